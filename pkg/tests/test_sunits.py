import itertools
import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ellprim.errors import EnumerationTooLarge, PreconditionViolation
from ellprim.sunits import (
    SUnitInstance,
    applicable,
    count_bounded_compositions,
    iter_sunits,
    log_star,
    sieve_count,
    theta_bound,
    theta_bound_exponent,
    theta_dominates,
    theta_exact,
    trivial_count_bound,
)

from oracles import theta_brute

SMALL_PRIMES = list(sympy.primerange(2, 60))
prime_sets = st.lists(st.sampled_from(SMALL_PRIMES), max_size=6, unique=True)


def test_small_examples():
    inst = SUnitInstance(10, (2, 3))
    assert theta_exact(inst) == 7
    assert list(iter_sunits(inst)) == [1, 3, 9, 2, 6, 4, 8]
    assert theta_bound(inst, "trivial") == pytest.approx(math.log(10) ** 4)
    assert theta_dominates(inst, "trivial") is True


def test_empty_and_degenerate_sets():
    assert theta_exact(SUnitInstance(10**6, ())) == 1
    assert theta_exact(SUnitInstance(0.5, (2,))) == 0
    assert theta_exact(SUnitInstance(1000, (2,))) == 10
    assert theta_exact(SUnitInstance(1000, (7,))) == 4


def test_set_normalized():
    assert SUnitInstance(10, (3, 2, 3)).S == (2, 3)
    with pytest.raises(ValueError):
        SUnitInstance(-1, (2,))


def test_general_bound_with_empty_set_is_twenty_log_three_exponent():
    inst = SUnitInstance(3, ())
    assert theta_bound_exponent(inst, "general") == pytest.approx(20 * math.log(3))


def test_seven_primes_million():
    inst = SUnitInstance(10**6, (2, 3, 5, 7))
    assert theta_exact(inst) == 1273
    for v in ("trivial", "large_primes", "general"):
        if applicable(inst, v):
            assert theta_dominates(inst, v) is True


@given(st.integers(1, 3000), prime_sets)
@settings(max_examples=60, deadline=None)
def test_theta_matches_brute_force(x, S):
    inst = SUnitInstance(x, tuple(S))
    assert theta_exact(inst) == theta_brute(x, S)


@given(st.integers(1, 10**5), prime_sets)
@settings(max_examples=100, deadline=None)
def test_enumeration_agrees_with_count_and_is_lexicographic(x, S):
    inst = SUnitInstance(x, tuple(S))
    units = list(iter_sunits(inst))
    assert len(units) == len(set(units)) == theta_exact(inst)
    assert all(u <= x for u in units)
    vecs = [tuple(sympy.multiplicity(p, u) for p in inst.S) for u in units]
    assert vecs == sorted(vecs)


def test_sieve_oracle_agrees_everywhere_up_to_a_million():
    for S in [(2, 3), (2, 3, 5, 7), (3, 11, 13), (2, 5, 23, 29, 31)]:
        cum = sieve_count(10**6, S)
        xs = np.unique(np.geomspace(1, 10**6, 300).astype(int))
        for x in xs:
            assert theta_exact(SUnitInstance(int(x), S)) == cum[x]


@given(st.integers(1, 10**8), st.integers(1, 10**8), prime_sets)
@settings(max_examples=60, deadline=None)
def test_theta_monotone_in_x(x1, x2, S):
    lo, hi = sorted((x1, x2))
    S = tuple(S)
    assert theta_exact(SUnitInstance(lo, S)) <= theta_exact(SUnitInstance(hi, S))


@given(st.integers(1, 10**8), prime_sets, st.sampled_from(SMALL_PRIMES))
@settings(max_examples=60, deadline=None)
def test_theta_monotone_in_set(x, S, extra):
    assert theta_exact(SUnitInstance(x, tuple(S))) <= theta_exact(SUnitInstance(x, tuple(S) + (extra,)))


@given(st.integers(1, 10**9), prime_sets)
@settings(max_examples=60, deadline=None)
def test_trivial_count_bounds_theta(x, S):
    inst = SUnitInstance(x, tuple(S))
    assert theta_exact(inst) <= trivial_count_bound(inst)


def test_enumeration_limit():
    inst = SUnitInstance(10**12, tuple(sympy.primerange(2, 60)))
    with pytest.raises(EnumerationTooLarge):
        theta_exact(inst, limit=10**4)
    # a limit above the trivial count never trips
    small = SUnitInstance(10**4, (2, 3))
    assert theta_exact(small, limit=trivial_count_bound(small)) == theta_brute(10**4, (2, 3))


@pytest.mark.parametrize(
    "x, S, variant",
    [(6, (2,), "trivial"), (2, (2,), "general"), (2, (2,), "large_primes"), (100, (2, 3, 5, 7, 11), "large_primes")],
)
def test_preconditions(x, S, variant):
    inst = SUnitInstance(x, S)
    assert not applicable(inst, variant)
    with pytest.raises(PreconditionViolation):
        theta_bound(inst, variant)
    with pytest.raises(PreconditionViolation):
        theta_dominates(inst, variant)


def test_unknown_variant():
    with pytest.raises(ValueError):
        theta_bound(SUnitInstance(100, (2,)), "other")


def test_large_bounds_report_infinity_but_finite_exponent():
    inst = SUnitInstance(1e300, tuple(sympy.primerange(2, 500)))
    assert theta_bound(inst, "trivial") == math.inf
    assert math.isfinite(theta_bound_exponent(inst, "trivial"))


def test_dominance_on_random_instances():
    rng = np.random.default_rng(7)
    for _ in range(150):
        k = int(rng.integers(0, 12))
        S = tuple(sorted(rng.choice(SMALL_PRIMES, size=k, replace=False).tolist()))
        x = float(10 ** rng.uniform(math.log10(7), 9))
        inst = SUnitInstance(x, S)
        count = theta_exact(inst)
        for v in ("trivial", "large_primes", "general"):
            if applicable(inst, v):
                assert theta_dominates(inst, v, count) is True, (x, S, v)


def test_log_star():
    assert log_star(0) == log_star(-3) == log_star(1) == log_star(math.e) == 1.0
    assert log_star(math.e**2) == pytest.approx(2.0)


@pytest.mark.parametrize("k, ell", [(1, 0), (1, 5), (3, 4), (5, 2), (6, 6)])
def test_compositions_against_enumeration(k, ell):
    brute = sum(1 for a in itertools.product(range(ell + 1), repeat=k) if sum(a) <= ell)
    exact, proof_count = count_bounded_compositions(k, ell)
    assert exact == brute == math.comb(k + ell, ell)
    assert exact <= proof_count
    assert proof_count == sum(math.comb(k + i, i) for i in range(ell + 1))


def test_compositions_reject_bad_input():
    with pytest.raises(ValueError):
        count_bounded_compositions(0, 3)
