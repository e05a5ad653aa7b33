"""Primitive prime divisors of N_n, prime splitting, gamma valuations, CRT classes.

A prime p is *primitive* for N_n when some prime ideal above p has alpha of
multiplicative order exactly n in its residue field.  For inert p this is
the same as ``rank(p) == n`` (rank = least m with p | N_m).  For split p the
two ideals above p can see different orders, so a split p with rank < n can
still carry a primitive ideal; such primes are always congruent to 1 mod n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, NamedTuple

from .arith import divisors, factor_small, kronecker, sqrt_mod, tau_from
from .errors import (
    CongruenceViolation,
    NotUnitary,
    PreconditionViolation,
)
from .factor import Budget, FactoredInteger, factorize, valuation
from .quadratic import FrobeniusParams, gamma_class
from .sequence import PsiFactorCache, cyclo_norm, group_order, order_value

Kind = Literal["split", "inert", "ramified"]


@dataclass(frozen=True)
class PrimeClassification:
    p: int
    kind: Kind

    @property
    def residue_degree(self) -> int:
        return 2 if self.kind == "inert" else 1

    @property
    def ideal_norm(self) -> int:
        return self.p**self.residue_degree


def classify_prime(params: FrobeniusParams, p: int) -> PrimeClassification:
    k = kronecker(params.delta, p)
    return PrimeClassification(p, "ramified" if k == 0 else "split" if k == 1 else "inert")


# -- residue-field arithmetic ------------------------------------------------


def _fp2_mul(u, v, a, q, p):
    # F_p[x]/(x^2 - a x + q), elements (c0, c1) = c0 + c1 x
    yy = u[1] * v[1]
    return ((u[0] * v[0] - q * yy) % p, (u[0] * v[1] + u[1] * v[0] + a * yy) % p)


def _fp2_pow(u, k, a, q, p):
    r = (1, 0)
    while k:
        if k & 1:
            r = _fp2_mul(r, u, a, q, p)
        k >>= 1
        if k:
            u = _fp2_mul(u, u, a, q, p)
    return r


def _refine_order(n: int, is_one: Callable[[int], bool]) -> int:
    """Exact order of an element known to satisfy x^n = 1."""
    order = n
    for r in factor_small(n):
        while order % r == 0 and is_one(order // r):
            order //= r
    return order


def _residue_roots(params: FrobeniusParams, p: int, kind: Kind) -> list[int]:
    """Images of alpha in F_p at the primes above a split or ramified p."""
    a, q = params.a, params.q
    if p == 2:
        return [x for x in (0, 1) if (x * x - a * x + q) % 2 == 0]
    if kind == "ramified":
        return [a * pow(2, -1, p) % p]
    s = sqrt_mod(params.delta, p)
    half = pow(2, -1, p)
    return sorted({(a + s) * half % p, (a - s) * half % p})


def ideal_orders(params: FrobeniusParams, p: int, n: int) -> tuple[int, ...]:
    """Orders of alpha modulo the primes above p, for those where alpha^n = 1."""
    kind = classify_prime(params, p).kind
    if kind == "inert":
        a, q = params.a % p, params.q % p
        alpha = (0, 1)
        one = (1, 0)
        if _fp2_pow(alpha, n, a, q, p) != one:
            return ()
        return (_refine_order(n, lambda m: _fp2_pow(alpha, m, a, q, p) == one),)
    out = []
    for r in _residue_roots(params, p, kind):
        if r == 0 or pow(r, n, p) != 1:
            continue
        out.append(_refine_order(n, lambda m, r=r: pow(r, m, p) == 1))
    return tuple(sorted(out))


def rank_of_apparition(params: FrobeniusParams, p: int, n_max: int) -> int | None:
    """Least m <= n_max with p | N_m."""
    a, q = params.a % p, params.q % p
    t_prev, t = 2 % p, a
    qm = q
    for m in range(1, n_max + 1):
        if (qm + 1 - t) % p == 0:
            return m
        t_prev, t = t, (a * t - q * t_prev) % p
        qm = qm * q % p
    return None


def gamma_rank(params: FrobeniusParams, p: int, n_max: int) -> int | None:
    """Least m <= n_max with p | w_m, i.e. the order of gamma at p when p does not divide q*delta."""
    a, q = params.a % p, params.q % p
    t_prev, t = 2 % p, a
    qm = q
    for m in range(1, n_max + 1):
        if (t * t - 4 * qm) % p == 0:
            return m
        t_prev, t = t, (a * t - q * t_prev) % p
        qm = qm * q % p
    return None


# -- primitive primes of N_n -------------------------------------------------


@dataclass(frozen=True)
class ValuationRecord:
    p: int
    n: int
    kind: Kind
    nu_Nn: int
    nu_Psi_n: int
    rank: int | None
    orders: tuple[int, ...]

    @property
    def primitive(self) -> bool:
        return self.n in self.orders


@dataclass(frozen=True)
class PrimitiveReport:
    """Primes of N_n split into primitive and non-primitive records.

    Ramified primes appear in either list with ``kind == "ramified"``; the
    congruence checks and the split/inert sums leave them out.
    """

    params: FrobeniusParams
    n: int
    factored: FactoredInteger
    primitive: list[ValuationRecord]
    nonprimitive: list[ValuationRecord]

    @property
    def complete(self) -> bool:
        return self.factored.complete

    @property
    def status(self) -> str:
        """yes / no / unknown: does N_n have a primitive prime."""
        if self.primitive:
            return "yes"
        return "no" if self.complete else "unknown"

    @property
    def unramified_primitive(self) -> list[ValuationRecord]:
        return [r for r in self.primitive if r.kind != "ramified"]

    def primes(self) -> list[int]:
        return [r.p for r in self.primitive]


def known_primes(f: FactoredInteger) -> dict[int, int]:
    """Listed primes plus a probable-prime cofactor."""
    d = f.as_dict()
    if f.cofactor_status == "probable_prime":
        d[f.cofactor] = d.get(f.cofactor, 0) + 1
    return d


def valuation_record(
    params: FrobeniusParams, p: int, n: int, nu_Nn: int, nu_Psi: int
) -> ValuationRecord:
    kind = classify_prime(params, p).kind
    rank = rank_of_apparition(params, p, n)
    return ValuationRecord(p, n, kind, nu_Nn, nu_Psi, rank, ideal_orders(params, p, n))


def primitive_primes(
    params: FrobeniusParams,
    n: int,
    budget: Budget | None = None,
    cache: PsiFactorCache | None = None,
) -> PrimitiveReport:
    """Classify every identified prime of N_n.

    When N_n is not fully factored the primitive list is a verified subset;
    ``report.complete`` says which case applies.
    """
    cache = cache or PsiFactorCache(params, budget)
    fN = cache.group_order(n)
    psi = known_primes(cache.psi(n))
    prim, nonprim = [], []
    for p, e in sorted(known_primes(fN).items()):
        rec = valuation_record(params, p, n, e, psi.get(p, 0))
        (prim if rec.primitive else nonprim).append(rec)
    return PrimitiveReport(params, n, fN, prim, nonprim)


class CongruenceVerdict(NamedTuple):
    p: int
    n: int
    kind: str
    status: str  # "pass", "signed-form-fails" or "skipped-ramified"
    norm_ok: bool | None
    signed_ok: bool | None


def check_congruence(params: FrobeniusParams, rec: ValuationRecord) -> CongruenceVerdict:
    """Check N(P) = 1 mod n and report the signed form p = +-1 mod n.

    The norm congruence is a theorem for every primitive prime ideal and
    raises on failure.  The signed form (split: p = 1, inert: p = -1) is
    only reported: it holds for split primes but fails for inert primes
    unless alpha^(p+1) = q is 1 mod p.
    """
    if not rec.primitive:
        raise PreconditionViolation(f"{rec.p} is not primitive for N_{rec.n}")
    if rec.n < 3:
        raise PreconditionViolation("congruences need n >= 3")
    if rec.kind == "ramified":
        return CongruenceVerdict(rec.p, rec.n, rec.kind, "skipped-ramified", None, None)
    p, n = rec.p, rec.n
    ideal_norm = p if rec.kind == "split" else p * p
    norm_ok = ideal_norm % n == 1 % n and ideal_norm >= n + 1
    if not norm_ok:
        raise CongruenceViolation(f"N(P) = {ideal_norm} is not 1 mod {n} for {params}")
    target = 1 if rec.kind == "split" else n - 1
    signed_ok = p % n == target % n
    status = "pass" if signed_ok else "signed-form-fails"
    return CongruenceVerdict(p, n, rec.kind, status, norm_ok, signed_ok)


class NonPrimitiveCheck(NamedTuple):
    n: int
    checked: list[tuple[int, int, int, bool]]  # (p, nu_p(Psi_n), nu_p(n), ok)
    complete: bool

    @property
    def ok(self) -> bool:
        return all(c[3] for c in self.checked)


def nonprimitive_phi_valuation_check(
    params: FrobeniusParams, n: int, budget: Budget | None = None
) -> NonPrimitiveCheck:
    """nu_p(Psi_n) <= 2 nu_p(n) for every prime p | Psi_n with no primitive ideal above it.

    Such p divide some N_m with m | n, m < n, so they all divide
    gcd(Psi_n, N_m) and a full factorization of Psi_n is not needed.
    """
    if n < 8:
        raise PreconditionViolation("the valuation bound needs n >= 8")
    psi = cyclo_norm(params, n)
    candidates: set[int] = set()
    complete = True
    for m in divisors(n)[:-1]:
        g = math.gcd(psi, group_order(params, m))
        if g > 1:
            f = factorize(g, budget)
            complete &= f.complete
            candidates |= set(known_primes(f))
    checked = []
    for p in sorted(candidates):
        if n in ideal_orders(params, p, n):
            continue
        vp, vn = valuation(psi, p), valuation(n, p)
        checked.append((p, vp, vn, vp <= 2 * vn))
    return NonPrimitiveCheck(n, checked, complete)


# -- gamma = conj(alpha)/alpha -----------------------------------------------


def _gamma_preconditions(params: FrobeniusParams, p: int) -> None:
    if gamma_class(params).degenerate:
        raise PreconditionViolation(f"gamma is a root of unity for {params}")
    if (2 * params.q * params.delta) % p == 0:
        raise PreconditionViolation(f"{p} divides 2*q*delta")
    if classify_prime(params, p).kind != "inert":
        raise PreconditionViolation(f"{p} is not inert")


def gamma_valuation(params: FrobeniusParams, p: int, n: int) -> int:
    """nu_p(gamma^n - 1) for inert p, read off w_n = (alpha^n - conj(alpha)^n)^2."""
    _gamma_preconditions(params, p)
    v = valuation(order_value(params, n).w_n, p)
    if v % 2:
        raise AssertionError(f"odd valuation {v} of w_{n} at inert {p}")
    return v // 2


def gamma_order_residue(params: FrobeniusParams, p: int) -> int:
    """Multiplicative order of gamma in the field with p^2 elements.

    Independent of the w_n route: gamma = (a - alpha)^2 / q computed by
    modular exponentiation in F_p[x]/(x^2 - a x + q).
    """
    _gamma_preconditions(params, p)
    a, q = params.a % p, params.q % p
    conj_alpha = (a, p - 1)
    g = _fp2_mul(conj_alpha, conj_alpha, a, q, p)
    qi = pow(q, -1, p)
    g = (g[0] * qi % p, g[1] * qi % p)
    # gamma has norm 1, so it lies in the subgroup of order p + 1
    one = (1, 0)
    assert _fp2_pow(g, p + 1, a, q, p) == one
    return _refine_order(p + 1, lambda m: _fp2_pow(g, m, a, q, p) == one)


# -- CRT residue classes -----------------------------------------------------

Branch = Literal["odd", "3mod4", "1mod4"]


@dataclass(frozen=True)
class CrtClass:
    n: int
    d: int
    residue: int
    modulus: int
    parity_branch: Branch


def crt_class(n: int, d: int, branch: Branch | None = None) -> CrtClass:
    """Residue r with r = 1 mod d and r = -1 mod (modulus/d).

    Odd n use modulus n.  Even n use modulus n/2 and a branch tag: for
    primes p = 3 mod 4 the part d must be odd, for p = 1 mod 4 the
    cofactor modulus/d must be odd.
    """
    if branch is None:
        branch = "odd" if n % 2 else None
        if branch is None:
            raise ValueError("even n needs branch '3mod4' or '1mod4'")
    if branch == "odd":
        if n % 2 == 0:
            raise ValueError("branch 'odd' needs odd n")
        modulus = n
    else:
        if n % 2:
            raise ValueError(f"branch {branch!r} needs even n")
        modulus = n // 2
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    if d < 1 or modulus % d:
        raise ValueError(f"{d} does not divide {modulus}")
    e = modulus // d
    if math.gcd(d, e) != 1:
        raise NotUnitary(f"gcd({d}, {e}) != 1")
    if branch == "3mod4" and d % 2 == 0:
        raise ValueError("branch '3mod4' needs odd d")
    if branch == "1mod4" and e % 2 == 0:
        raise ValueError("branch '1mod4' needs odd modulus/d")
    # r = 1 + d*k with 1 + d*k = -1 mod e
    k = (-2 * pow(d, -1, e)) % e if e > 1 else 0
    return CrtClass(n, d, (1 + d * k) % modulus, modulus, branch)


def crt_class_of_prime(n: int, p: int) -> CrtClass:
    """The class of a prime p with n | p^2 - 1, with d read off from p."""
    if (p * p - 1) % n:
        raise PreconditionViolation(f"{n} does not divide {p}^2 - 1")
    if n % 2:
        return crt_class(n, math.gcd(p - 1, n), "odd")
    half = n // 2
    if p % 4 == 3:
        return crt_class(n, math.gcd((p - 1) // 2, half), "3mod4")
    return crt_class(n, math.gcd(p - 1, half), "1mod4")


class DivisorCensus(NamedTuple):
    count: int
    cutoff: float
    bound: float | None
    within_bound: bool | None
    in_proven_range: bool


def small_divisor_census(n: int) -> DivisorCensus:
    """#{d | n : d < tau(n) log n} against exp(70 log n logloglog n / (loglog n)^2).

    The bound needs loglog n > 1, i.e. n >= 16; below that only the count
    is returned.  The inequality is proven only for n >= exp exp(10^10).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    fac = factor_small(n)
    log_n = math.log(n)
    cutoff = tau_from(fac) * log_n
    count = sum(1 for d in divisors(n) if d < cutoff)
    if n < 16:
        return DivisorCensus(count, cutoff, None, None, False)
    ll = math.log(log_n)
    bound = math.exp(70 * log_n * math.log(ll) / ll**2)
    return DivisorCensus(count, cutoff, bound, count <= bound, False)
