import math
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ellprim.factor import (
    DETERMINISTIC_LIMIT,
    Budget,
    FactoredInteger,
    factorize,
    is_probable_prime,
    largest_known_prime_factor,
    small_primes,
    valuation,
)


def product(f: FactoredInteger) -> int:
    return math.prod(p**e for p, e in f.factors) * f.cofactor


@pytest.mark.parametrize(
    "n, expected",
    [(1, False), (2, True), (2147483647, True), (3215031751, False), (561, False), (97, True)],
)
def test_primality_examples(n, expected):
    assert is_probable_prime(n) is expected


def test_primality_matches_sympy_below_10k():
    for n in range(10_000):
        assert is_probable_prime(n) == sympy.isprime(n), n


def test_strong_pseudoprimes_rejected():
    # composites that fool Miller-Rabin for the first few prime bases
    for n in (2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383,
              341550071728321, 3825123056546413051, 318665857834031151167461):
        assert not is_probable_prime(n), n
    assert not is_probable_prime(DETERMINISTIC_LIMIT)


def test_large_known_primes():
    for p in (2**61 - 1, 2**89 - 1, 2**127 - 1, sympy.nextprime(10**30)):
        assert is_probable_prime(p)
    assert not is_probable_prime((2**61 - 1) * (2**89 - 1))


def test_small_primes_sieve():
    assert small_primes(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert small_primes(2) == []
    assert len(small_primes(10**4)) == 1229


@pytest.mark.parametrize(
    "n, factors",
    [(1, ()), (56, ((2, 3), (7, 1))), (1982, ((2, 1), (991, 1))), (2**20, ((2, 20),))],
)
def test_factorize_examples(n, factors):
    f = factorize(n)
    assert f.factors == factors
    assert f.cofactor == 1 and f.cofactor_status == "unit"


def test_factorize_agrees_with_sympy_on_random_inputs():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randrange(2, 10**18)
        f = factorize(n)
        assert f.complete
        assert f.as_dict() == sympy.factorint(n)


def test_factorize_semiprime_beyond_trial_range():
    p, q = sympy.nextprime(10**9), sympy.nextprime(3 * 10**11)
    f = factorize(p * q * 12)
    assert f.as_dict() == {2: 2, 3: 1, p: 1, q: 1}


def test_budget_exhaustion_labels_cofactor():
    p, q = sympy.nextprime(10**25), sympy.nextprime(10**26)
    f = factorize(6 * p * q, Budget(rho_iterations=50))
    assert f.cofactor_status == "composite_unknown"
    assert f.cofactor == p * q
    assert not f.complete
    assert product(f) == 6 * p * q
    assert largest_known_prime_factor(f) == (3, False)


def test_single_large_probable_prime_cofactor():
    big = sympy.nextprime(10**40)
    f = factorize(10 * big)
    assert f.cofactor == big and f.cofactor_status == "probable_prime"
    assert f.complete
    assert largest_known_prime_factor(f) == (big, True)


def test_factorize_is_deterministic():
    n = sympy.nextprime(10**15) * sympy.nextprime(10**16) * 7
    assert factorize(n) == factorize(n)


def test_wall_clock_budget_still_returns():
    p, q = sympy.nextprime(10**30), sympy.nextprime(10**31)
    f = factorize(p * q, Budget(rho_iterations=10**9, time_ms=50))
    assert product(f) == p * q


def test_product_of_factored_integers():
    a, b = factorize(12), factorize(18)
    c = a * b
    assert c.value == 216 and c.as_dict() == {2: 3, 3: 3}
    big1, big2 = sympy.nextprime(10**40), sympy.nextprime(10**41)
    m = factorize(big1) * factorize(big2)
    assert m.complete and set(m.primes()) == {big1, big2}


def test_summary_format():
    assert factorize(56).summary() == "2^3*7"
    assert factorize(1).summary() == "1"
    f = FactoredInteger(26, ((2, 1),), 13, "composite_unknown")
    assert f.summary() == "2*[c:13]"
    assert largest_known_prime_factor(f) == (2, False)


def test_largest_prime_factor_of_one():
    assert largest_known_prime_factor(factorize(1)) == (1, True)
    assert largest_known_prime_factor(factorize(56)) == (7, True)


@pytest.mark.parametrize("n, p, v", [(16, 2, 4), (14, 3, 0), (63, 3, 2), (-63, 3, 2)])
def test_valuation(n, p, v):
    assert valuation(n, p) == v


def test_valuation_of_zero_refused():
    with pytest.raises(ValueError):
        valuation(0, 3)


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=1, max_value=10**24))
def test_factorization_multiplies_back(n):
    f = factorize(n)
    assert product(f) == n
    assert all(is_probable_prime(p) for p, _ in f.factors)
