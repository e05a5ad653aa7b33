import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ellprim.quadratic import FrobeniusParams  # noqa: E402


@pytest.fixture(scope="session")
def grid():
    """Every (q, a) with 2 <= q <= 25 and a^2 < 4q."""
    return [p for q in range(2, 26) for p in FrobeniusParams.admissible(q)]
