import math

import numpy as np
import pytest
import sympy

from ellprim.errors import CongruenceViolation, NotUnitary, PreconditionViolation
from ellprim.factor import valuation
from ellprim.primitive import (
    ValuationRecord,
    check_congruence,
    classify_prime,
    crt_class,
    crt_class_of_prime,
    gamma_order_residue,
    gamma_rank,
    gamma_valuation,
    ideal_orders,
    nonprimitive_phi_valuation_check,
    primitive_primes,
    rank_of_apparition,
    small_divisor_census,
)
from ellprim.quadratic import FrobeniusParams, QuadInt, conj, quad_pow
from ellprim.sequence import group_order, order_value

from oracles import gamma_order_brute, ideal_orders_brute, primitive_set_brute

P21 = FrobeniusParams(2, 1)


@pytest.mark.parametrize("p, kind", [(7, "ramified"), (3, "inert"), (11, "split"), (2, "split"), (5, "inert")])
def test_classification_examples(p, kind):
    c = classify_prime(P21, p)
    assert c.kind == kind
    assert c.ideal_norm == (p * p if kind == "inert" else p)


def test_classification_counts_roots():
    # split iff x^2 - a x + q has two distinct roots mod p
    for q, a in [(2, 1), (3, 1), (5, -2), (13, 3)]:
        params = FrobeniusParams(q, a)
        for p in sympy.primerange(2, 200):
            roots = {r for r in range(p) if (r * r - a * r + q) % p == 0}
            kind = classify_prime(params, p).kind
            assert kind == {0: "inert", 1: "ramified", 2: "split"}[len(roots)], (q, a, p)


@pytest.mark.parametrize("p, rank", [(2, 1), (7, 3), (11, 5), (71, 7)])
def test_rank_examples(p, rank):
    assert rank_of_apparition(P21, p, 50) == rank


def test_rank_absent_when_too_small():
    assert rank_of_apparition(P21, 71, 6) is None


def test_ideal_orders_against_brute_force():
    for q, a in [(2, 1), (3, -1), (5, 2), (7, 0), (9, 3), (4, 2)]:
        params = FrobeniusParams(q, a)
        for p in sympy.primerange(2, 120):
            brute = ideal_orders_brute(q, a, p)
            for n in range(1, 50):
                got = ideal_orders(params, p, n)
                want = tuple(sorted(o for o in brute if o is not None and n % o == 0))
                assert got == want, (q, a, p, n)


def test_split_prime_primitive_although_rank_smaller():
    # 11 divides N_5 and N_10; one ideal above 11 has alpha of order 5, the other of order 10
    assert ideal_orders(P21, 11, 10) == (5, 10)
    rep = primitive_primes(P21, 10)
    assert 11 in rep.primes()
    (rec,) = [r for r in rep.primitive if r.p == 11]
    assert rec.rank == 5 and rec.kind == "split"


@pytest.mark.parametrize("n, prims", [(3, [7]), (4, []), (5, [11]), (7, [71]), (12, [37])])
def test_primitive_examples(n, prims):
    rep = primitive_primes(P21, n)
    assert rep.complete
    assert rep.primes() == prims
    assert rep.status == ("yes" if prims else "no")


def test_primitive_sets_against_brute_force():
    for q, a in [(2, 1), (2, -1), (3, 2), (5, -4), (7, 1), (4, 3)]:
        params = FrobeniusParams(q, a)
        for n in range(1, 21):
            rep = primitive_primes(params, n)
            assert rep.complete
            assert set(rep.primes()) == primitive_set_brute(q, a, n), (q, a, n)


def test_valuations_in_records():
    rep = primitive_primes(FrobeniusParams(3, 1), 12)
    N = group_order(FrobeniusParams(3, 1), 12)
    for rec in rep.primitive + rep.nonprimitive:
        assert rec.nu_Nn == valuation(N, rec.p)


@pytest.mark.parametrize("n, p", [(5, 11), (7, 71)])
def test_congruence_examples(n, p):
    (rec,) = [r for r in primitive_primes(P21, n).primitive if r.p == p]
    v = check_congruence(P21, rec)
    assert v.status == "pass" and v.norm_ok and v.signed_ok


def test_ramified_congruence_skipped():
    (rec,) = primitive_primes(P21, 3).primitive
    assert rec.kind == "ramified"
    assert check_congruence(P21, rec).status == "skipped-ramified"


def test_inert_primitive_prime_not_minus_one():
    # 3 is inert for (2, 1); alpha has order 8 in F_9 but 3 is not -1 mod 8
    (rec,) = [r for r in primitive_primes(P21, 8).primitive if r.p == 3]
    v = check_congruence(P21, rec)
    assert rec.kind == "inert"
    assert v.norm_ok and not v.signed_ok and v.status == "signed-form-fails"


def test_congruence_violation_raised_for_inconsistent_record():
    fake = ValuationRecord(p=13, n=5, kind="split", nu_Nn=1, nu_Psi_n=1, rank=5, orders=(5,))
    with pytest.raises(CongruenceViolation):
        check_congruence(P21, fake)


def test_congruence_preconditions():
    (rec,) = [r for r in primitive_primes(P21, 4).nonprimitive if r.p == 2]
    with pytest.raises(PreconditionViolation):
        check_congruence(P21, rec)


def test_norm_congruence_and_gamma_form_on_grid(grid):
    """N(P) = 1 mod n always; p = (Delta/p) mod the gamma order m whenever m >= 3."""
    for params in grid[::5]:
        for n in range(3, 25):
            rep = primitive_primes(params, n)
            for rec in rep.unramified_primitive:
                v = check_congruence(params, rec)
                assert v.norm_ok
                if rec.kind == "split":
                    assert v.signed_ok
                p = rec.p
                if (2 * params.q * params.delta) % p == 0:
                    continue
                m = gamma_rank(params, p, 10**4)
                if m is not None and m >= 3:
                    k = 1 if rec.kind == "split" else -1
                    assert (p - k) % m == 0, (params, n, p, m)


@pytest.mark.parametrize("n", [8, 12, 16, 24, 36])
def test_nonprimitive_bound_examples(n):
    chk = nonprimitive_phi_valuation_check(P21, n)
    assert chk.complete and chk.ok


def test_nonprimitive_needs_n_at_least_eight():
    with pytest.raises(PreconditionViolation):
        nonprimitive_phi_valuation_check(P21, 6)


@pytest.mark.parametrize("n, v", [(4, 1), (2, 0), (8, 1), (12, 2)])
def test_gamma_valuation_examples(n, v):
    assert gamma_valuation(P21, 3, n) == v
    assert valuation(order_value(P21, 4).w_n, 3) == 2


def exact_gamma_valuation(params, p, n):
    """nu_p(conj(alpha)^(2n) - q^n) read off the coordinates in Z[alpha]."""
    u = quad_pow(conj(params.alpha, params), 2 * n, params)
    d = QuadInt(u.x - params.q**n, u.y)
    return min(valuation(d.x, p) if d.x else 10**9, valuation(d.y, p) if d.y else 10**9)


def test_gamma_valuation_against_exact_coordinates():
    for q, a in [(2, 1), (3, 1), (5, 2), (11, -3)]:
        params = FrobeniusParams(q, a)
        for p in sympy.primerange(3, 400):
            if (2 * q * params.delta) % p == 0 or classify_prime(params, p).kind != "inert":
                continue
            for n in range(1, 41):
                assert gamma_valuation(params, p, n) == exact_gamma_valuation(params, p, n)


def test_gamma_order_residue_against_iteration():
    for q, a in [(2, 1), (3, 2), (7, -4), (13, 5)]:
        params = FrobeniusParams(q, a)
        for p in sympy.primerange(3, 300):
            if (2 * q * params.delta) % p == 0 or classify_prime(params, p).kind != "inert":
                continue
            m = gamma_order_residue(params, p)
            assert m == gamma_order_brute(q, a, p)
            assert gamma_rank(params, p, p + 1) == m


def test_gamma_preconditions():
    with pytest.raises(PreconditionViolation):
        gamma_valuation(FrobeniusParams(2, 2), 3, 4)  # gamma is a root of unity
    with pytest.raises(PreconditionViolation):
        gamma_valuation(P21, 11, 4)  # split
    with pytest.raises(PreconditionViolation):
        gamma_valuation(P21, 7, 4)  # ramified


@pytest.mark.parametrize("n, d, r", [(15, 3, 4), (15, 15, 1), (15, 1, 14), (21, 7, 8)])
def test_crt_examples(n, d, r):
    c = crt_class(n, d)
    assert (c.residue, c.modulus, c.parity_branch) == (r, n, "odd")


def test_crt_odd_against_brute_force():
    for n in range(3, 200, 2):
        for d in sympy.divisors(n):
            e = n // d
            if math.gcd(d, e) != 1:
                with pytest.raises(NotUnitary):
                    crt_class(n, d)
                continue
            r = np.arange(n)
            sols = r[(r % d == 1 % d) & ((r + 1) % e == 0)]
            assert sols.tolist() == [crt_class(n, d).residue]


def test_crt_even_branches():
    assert crt_class(12, 3, "3mod4").residue == 1
    assert crt_class(12, 2, "1mod4").residue == 5 % 6
    with pytest.raises(ValueError):
        crt_class(12, 2, "3mod4")
    with pytest.raises(ValueError):
        crt_class(12, 3)


def test_crt_class_of_prime_contains_prime():
    for n in range(3, 120):
        for p in sympy.primerange(3, 10 * n):
            if (p * p - 1) % n:
                continue
            c = crt_class_of_prime(n, p)
            assert p % c.modulus == c.residue


def test_divisor_census_examples():
    c16 = small_divisor_census(16)
    assert c16.count == 4 and c16.cutoff == pytest.approx(5 * math.log(16))
    assert c16.bound is not None and c16.within_bound and not c16.in_proven_range
    c11 = small_divisor_census(11)
    assert c11.count == 1 and c11.bound is None
    c2 = small_divisor_census(2**20)
    assert c2.count == sum(1 for k in range(21) if 2**k < 21 * 20 * math.log(2))
