"""Classical arithmetic functions computed from factorizations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator

from .errors import FactorizationExceeded
from .factor import Budget, factorize

DIVISOR_LIST_CAP = 10**6


@dataclass(frozen=True)
class ArithProfile:
    n: int
    phi: int
    tau: int
    omega: int
    mu: int
    divisors: tuple[int, ...] | None
    factors: tuple[tuple[int, int], ...]


def factor_small(n: int, budget: Budget | None = None) -> dict[int, int]:
    """Complete factorization of n or FactorizationExceeded."""
    f = factorize(n, budget)
    if not f.complete:
        raise FactorizationExceeded(f"could not factor {n} within budget")
    d = f.as_dict()
    if f.cofactor != 1:
        d[f.cofactor] = d.get(f.cofactor, 0) + 1
    return d


def phi_from(fac: dict[int, int]) -> int:
    return math.prod((p - 1) * p ** (e - 1) for p, e in fac.items())


def tau_from(fac: dict[int, int]) -> int:
    return math.prod(e + 1 for e in fac.values())


def mu_from(fac: dict[int, int]) -> int:
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def iter_divisors(fac: dict[int, int]) -> Iterator[int]:
    """Divisors in no particular order."""
    items = sorted(fac.items())
    for exps in product(*(range(e + 1) for _, e in items)):
        yield math.prod(p**k for (p, _), k in zip(items, exps))


def divisors_from(fac: dict[int, int]) -> list[int]:
    return sorted(iter_divisors(fac))


@lru_cache(maxsize=4096)
def _divisors(n: int) -> tuple[int, ...]:
    return tuple(divisors_from(factor_small(n)))


def divisors(n: int) -> list[int]:
    return list(_divisors(n))


def phi(n: int) -> int:
    return phi_from(factor_small(n))


def mobius(n: int) -> int:
    return mu_from(factor_small(n))


def profile(n: int, budget: Budget | None = None) -> ArithProfile:
    if n < 1:
        raise ValueError("n must be positive")
    fac = factor_small(n, budget)
    tau = tau_from(fac)
    divs = tuple(divisors_from(fac)) if tau <= DIVISOR_LIST_CAP else None
    return ArithProfile(
        n=n,
        phi=phi_from(fac),
        tau=tau,
        omega=len(fac),
        mu=mu_from(fac),
        divisors=divs,
        factors=tuple(sorted(fac.items())),
    )


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for a prime p."""
    if D % p == 0:
        return 0
    if p == 2:
        return 1 if D % 8 in (1, 7) else -1
    e = pow(D % p, (p - 1) // 2, p)
    return 1 if e == 1 else -1


def mobius_sum_check(n: int) -> int:
    """Sum of mu(d) over d | n; 1 for n = 1 and 0 otherwise."""
    fac = factor_small(n)
    return sum(mu_from(factor_small(d)) for d in iter_divisors(fac))


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo the odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    s, qq = 0, p - 1
    while qq % 2 == 0:
        qq //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, qq, p), pow(a, qq, p), pow(a, (qq + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def squarefree_kernel_signed(D: int) -> int:
    """Squarefree part of D, keeping the sign."""
    fac = factor_small(abs(D))
    core = math.prod(p for p, e in fac.items() if e % 2)
    return core if D > 0 else -core


def fundamental_discriminant(D: int) -> int:
    """Discriminant of Q(sqrt(D)) for a non-square D."""
    d0 = squarefree_kernel_signed(D)
    return d0 if d0 % 4 == 1 else 4 * d0
