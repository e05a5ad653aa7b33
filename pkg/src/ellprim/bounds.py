"""Evaluators and certified checks for the explicit analytic inequalities.

Every check returns a :class:`BoundReport`.  Comparisons are done on
mpmath intervals (at least 128 bits); a comparison whose intervals overlap
is reported as inconclusive (``holds is None``), never as a pass.  Reports
carry ``in_proven_range`` so that desk-scale observations far below the
thresholds where the inequality is actually proven are never mistaken for
verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Any, Literal, NamedTuple

import mpmath
import numpy as np

from .arith import divisors, factor_small, fundamental_discriminant, phi_from, tau_from
from .errors import DomainError, IncompleteFactorization, PreconditionViolation
from .factor import Budget, is_probable_prime, small_primes
from .intervals import DEFAULT_PREC, IntervalCtx, certify_le, midpoint
from .primitive import (
    classify_prime,
    gamma_rank,
    gamma_valuation,
    known_primes,
    primitive_primes,
    small_divisor_census,
)
from .quadratic import FrobeniusParams, gamma_class
from .sequence import PsiFactorCache, cyclo_norm

Holds = bool | None | Literal["not_applicable"]


def log_star(t: float) -> float:
    """max(log t, 1); 1 for t <= 0."""
    if t <= 0:
        return 1.0
    return max(math.log(t), 1.0)


# -- iterated exponentials ---------------------------------------------------

_TOWER_CUTOFF = 1000.0  # exp(1000) already exceeds every float


@total_ordering
class IteratedLog:
    """exp applied ``depth`` times to ``value``.

    Holds thresholds such as exp exp(10^10) that no float can represent.
    Two towers are compared by stripping the common depth and evaluating
    the remaining (short) tower, stopping as soon as it outgrows floats.
    """

    __slots__ = ("depth", "value")

    def __init__(self, depth: int, value: float):
        if depth < 0:
            raise ValueError("depth must be >= 0")
        self.depth = depth
        self.value = float(value)

    @classmethod
    def of(cls, x: float | IteratedLog) -> IteratedLog:
        return x if isinstance(x, IteratedLog) else cls(0, x)

    def __repr__(self):
        return "exp^" + f"{self.depth}({self.value:g})" if self.depth else f"{self.value:g}"

    def __hash__(self):
        return hash((self.depth, self.value))

    def log(self) -> IteratedLog:
        if self.depth:
            return IteratedLog(self.depth - 1, self.value)
        if self.value <= 0:
            raise DomainError("log of a non-positive number")
        return IteratedLog(0, math.log(self.value))

    def __float__(self):
        v = mpmath.mpf(self.value)
        for _ in range(self.depth):
            if v > _TOWER_CUTOFF:
                return math.inf
            v = mpmath.exp(v)
        return float(v)

    @staticmethod
    def _cmp(x: IteratedLog, y: IteratedLog) -> int:
        if x.depth < y.depth:
            return -IteratedLog._cmp(y, x)
        # exp is increasing, so strip y.depth layers from both sides
        v = mpmath.mpf(x.value)
        target = mpmath.mpf(y.value)
        for _ in range(x.depth - y.depth):
            if v > _TOWER_CUTOFF:
                return 1
            v = mpmath.exp(v)
        return (v > target) - (v < target)

    def __eq__(self, other):
        if not isinstance(other, (IteratedLog, int, float)):
            return NotImplemented
        return self._cmp(self, IteratedLog.of(other)) == 0

    def __lt__(self, other):
        if not isinstance(other, (IteratedLog, int, float)):
            return NotImplemented
        return self._cmp(self, IteratedLog.of(other)) < 0


# -- reports -----------------------------------------------------------------


@dataclass
class BoundReport:
    """One inequality ``lhs <= rhs``; ``holds`` is None when inconclusive."""

    name: str
    lhs: Any
    rhs: Any
    holds: Holds
    slack: float | None
    in_proven_range: bool
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        """An asserted check that did not certify."""
        return self.in_proven_range and self.holds is not True and self.holds != "not_applicable"

    def row(self) -> dict[str, Any]:
        def enc(v):
            return repr(v) if isinstance(v, IteratedLog) else v

        return {
            "name": self.name,
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "holds": self.holds,
            "slack": self.slack,
            "in_proven_range": self.in_proven_range,
            **{k: v for k, v in self.details.items() if isinstance(v, (int, float, str, bool))},
        }


def _report(name, lhs_iv, rhs_iv, in_range, **details) -> BoundReport:
    return BoundReport(
        name,
        midpoint(lhs_iv),
        midpoint(rhs_iv),
        certify_le(lhs_iv, rhs_iv),
        midpoint(rhs_iv - lhs_iv),
        in_range,
        details,
    )


def _na(name: str, reason: str) -> BoundReport:
    return BoundReport(name, None, None, "not_applicable", None, False, {"reason": reason})


# -- single-valued evaluators ------------------------------------------------


def _mp_log_star(x):
    return mpmath.mpf(1) if x <= 0 else max(mpmath.log(x), mpmath.mpf(1))


def stewart_rat_bound(Np: float, d: int, h: float, n: int) -> float:
    """Np * exp(-0.002/d * log Np / loglog Np) * h * log* n."""
    if Np <= math.e:
        raise DomainError("need N(P) > e")
    if h < 0 or d < 1 or n < 1:
        raise ValueError("need h >= 0, d >= 1, n >= 1")
    with mpmath.workprec(DEFAULT_PREC):
        Np_ = mpmath.mpf(Np)
        L = mpmath.log(Np_)
        e = -mpmath.mpf("0.002") / d * L / mpmath.log(L)
        return float(Np_ * mpmath.exp(e) * mpmath.mpf(h) * _mp_log_star(mpmath.mpf(n)))


def stewart_quad_bound(p: int, h: float, n: int) -> float:
    """p * exp(-0.001 log p / loglog p) * h * log* n."""
    if p <= math.e:
        raise DomainError("need p > e")
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    if h < 0 or n < 1:
        raise ValueError("need h >= 0 and n >= 1")
    with mpmath.workprec(DEFAULT_PREC):
        L = mpmath.log(p)
        e = -mpmath.mpf("0.001") * L / mpmath.log(L)
        return float(p * mpmath.exp(e) * mpmath.mpf(h) * _mp_log_star(mpmath.mpf(n)))


def main_theorem_bound(n: int) -> float:
    """log of n * exp(0.0001 log n / loglog n)."""
    if n <= 15:
        raise DomainError("need n >= 16")
    with mpmath.workprec(DEFAULT_PREC):
        L = mpmath.log(n)
        return float(L + mpmath.mpf("0.0001") * L / mpmath.log(L))


class Thresholds(NamedTuple):
    n0: IteratedLog
    p0_quad: IteratedLog
    p0_rat: IteratedLog
    D_K: int


def thresholds(params: FrobeniusParams, d: int = 2) -> Thresholds:
    D_K = fundamental_discriminant(params.delta)
    return Thresholds(
        n0=IteratedLog(2, max(1e10, 3 * params.q)),
        p0_quad=IteratedLog(2, max(1e8, 2 * abs(D_K))),
        p0_rat=IteratedLog(1, 80000 * d * log_star(d) ** 2),
        D_K=D_K,
    )


def stewart_quad_report(params: FrobeniusParams, p: int, n: int) -> BoundReport:
    """Observed nu_p(gamma^n - 1) against the quadratic valuation bound."""
    nu = gamma_valuation(params, p, n)
    rhs = stewart_quad_bound(p, gamma_class(params).height, n)
    in_range = IteratedLog.of(p) > thresholds(params).p0_quad
    return BoundReport(
        "stewart_quad", nu, rhs, nu <= rhs, rhs - nu, in_range, {"p": p, "n": n}
    )


# -- grid checks -------------------------------------------------------------


def phin_log_check(params: FrobeniusParams, n: int, prec: int = DEFAULT_PREC) -> BoundReport:
    """|1/2 log Psi_n - 1/2 phi(n) log q| <= 5."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ctx = IntervalCtx(prec)
    psi = cyclo_norm(params, n)
    ph = phi_from(factor_small(n))
    dev = ctx.log(ctx.mpf(psi)) / 2 - ctx.mpf(ph) * ctx.log(ctx.mpf(params.q)) / 2
    return _report(
        "log_phi_n", abs(dev), ctx.mpf(5), True, deviation=midpoint(dev), psi_digits=len(str(psi))
    )


def arith_inequalities(n: int, factors: dict[int, int] | None = None) -> list[BoundReport]:
    """The divisor-function inequalities at one n, each flagged with its own range."""
    if n < 1:
        raise ValueError("n must be positive")
    fac = factors if factors is not None else factor_small(n)
    if math.prod(p**e for p, e in fac.items()) != n:
        raise ValueError("factorization does not multiply to n")
    tau, om, ph = tau_from(fac), len(fac), phi_from(fac)
    ctx = IntervalCtx()
    out = []

    if n >= 3:
        L = ctx.log(ctx.mpf(n))
        out.append(_report("tau_upper", ctx.log(ctx.mpf(tau)), 1.1 * L / ctx.log(L), True, tau=tau))
    else:
        out.append(_na("tau_upper", "needs n >= 3"))

    if n >= 16:
        L = ctx.log(ctx.mpf(n))
        LL = ctx.log(L)
        out.append(_report("omega_upper", ctx.mpf(om), 1.4 * L / LL, True, omega=om))
        geom = tau >= 2**om
        out.append(
            BoundReport(
                "log_tau_geq_omega_log2",
                math.log(tau),
                om * math.log(2),
                geom,
                math.log(tau) - om * math.log(2),
                True,
                {"tau": tau, "omega": om},
            )
        )
        # tau <= (floor(log2 n) + 1)^omega exactly, then log2 n + 1 <= (log n)^2
        step1 = tau <= n.bit_length() ** om
        step2 = certify_le(L / ctx.log(ctx.mpf(2)) + 1, L * L)
        rep = _report("log_tau_leq_2omega_loglog", ctx.log(ctx.mpf(tau)), 2 * om * LL, True, tau=tau)
        rep.holds = step1 and step2 if step2 is not None else None
        rep.details["exact_step"] = step1
        out.append(rep)
    else:
        for name in ("omega_upper", "log_tau_geq_omega_log2", "log_tau_leq_2omega_loglog"):
            out.append(_na(name, "needs n >= 16"))

    if n >= 16:
        # phi(n) >= 0.5 n / loglog n, compared as the exact ratio phi(n)/n
        ratio = Fraction(ph, n)
        lhs = ctx.mpf(ratio.numerator) / ctx.mpf(ratio.denominator)
        rhs = ctx.mpf(0.5) / ctx.log(ctx.log(ctx.mpf(n)))
        # reported as rhs <= lhs
        out.append(_report("phi_lower", rhs, lhs, n >= 10**20, phi_over_n=midpoint(lhs)))
    else:
        out.append(_na("phi_lower", "needs n >= 16"))
    return out


def primorial_factors(limit_exp: int = 100) -> list[tuple[int, dict[int, int]]]:
    """Primorials 2*3*...*p from the first one above 10^20 up to 10^limit_exp."""
    out, n = [], 1
    for p in small_primes(1000):
        n *= p
        if n > 10**limit_exp:
            break
        if n >= 10**20:
            out.append((n, {r: 1 for r in small_primes(p + 1)}))
    return out


class SweepResult(NamedTuple):
    name: str
    lo: int
    hi: int
    checked: int
    rechecked: int
    violations: list[int]
    inconclusive: list[int]


def divisor_tables(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """tau and omega for 0..n_max by sieving (index 0 unused)."""
    tau = np.zeros(n_max + 1, dtype=np.int64)
    for d in range(1, n_max + 1):
        tau[d::d] += 1
    omega = np.zeros(n_max + 1, dtype=np.int64)
    for p in small_primes(n_max + 1):
        omega[p::p] += 1
    return tau, omega


def arith_sweep(n_max: int, prec: int = DEFAULT_PREC) -> list[SweepResult]:
    """Exhaustive tau/omega inequalities up to n_max.

    Float64 screens every n; any n whose float margin is within 1e-9 of
    zero (or negative) is rechecked on intervals, so a float rounding slip
    can neither hide nor invent a violation.
    """
    tau, omega = divisor_tables(n_max)
    ctx = IntervalCtx(prec)
    results = []

    def sweep(name, lo, lhs_f, rhs_f, lhs_iv, rhs_iv):
        idx = np.arange(lo, n_max + 1)
        if idx.size == 0:
            results.append(SweepResult(name, lo, n_max, 0, 0, [], []))
            return
        margin = rhs_f(idx) - lhs_f(idx)
        scale = np.maximum(1.0, np.abs(rhs_f(idx)))
        suspect = idx[margin <= 1e-9 * scale]
        bad, unsure = [], []
        for n in suspect.tolist():
            v = certify_le(lhs_iv(n), rhs_iv(n))
            if v is False:
                bad.append(n)
            elif v is None:
                unsure.append(n)
        results.append(SweepResult(name, lo, n_max, idx.size, suspect.size, bad, unsure))

    def L(n):
        return ctx.log(ctx.mpf(n))

    sweep(
        "tau_upper",
        3,
        lambda i: np.log(tau[i].astype(float)),
        lambda i: 1.1 * np.log(i) / np.log(np.log(i)),
        lambda n: ctx.log(ctx.mpf(int(tau[n]))),
        lambda n: 1.1 * L(n) / ctx.log(L(n)),
    )
    sweep(
        "omega_upper",
        16,
        lambda i: omega[i].astype(float),
        lambda i: 1.4 * np.log(i) / np.log(np.log(i)),
        lambda n: ctx.mpf(int(omega[n])),
        lambda n: 1.4 * L(n) / ctx.log(L(n)),
    )
    sweep(
        "log2_plus_one_leq_log_squared",
        16,
        lambda i: np.log2(i) + 1,
        lambda i: np.log(i) ** 2,
        lambda n: L(n) / ctx.log(ctx.mpf(2)) + 1,
        lambda n: L(n) * L(n),
    )
    # both of these are integer comparisons
    idx = np.arange(16, n_max + 1)
    geom_bad = idx[tau[idx] < (1 << omega[idx])].tolist()
    results.append(SweepResult("log_tau_geq_omega_log2", 16, n_max, idx.size, 0, geom_bad, []))
    bits = np.floor(np.log2(idx)).astype(np.int64) + 1
    exact_bits = np.array([int(n).bit_length() for n in idx.tolist()], dtype=np.int64)
    assert (bits == exact_bits).all()
    step1_bad = idx[tau[idx].astype(float) > np.power(bits.astype(float), omega[idx])].tolist()
    results.append(SweepResult("log_tau_leq_2omega_loglog", 16, n_max, idx.size, 0, step1_bad, []))
    return results


# -- case split and the P' count ---------------------------------------------


def case_split_report(
    params: FrobeniusParams,
    n: int,
    budget: Budget | None = None,
    cache: PsiFactorCache | None = None,
) -> BoundReport:
    """Split versus inert primitive mass of Psi_n against 0.4 phi(n) log q.

    A sums nu_p(Psi_n) log p over unramified primitive split p, B the same
    over inert p.  The dichotomy max(A, B) >= 0.4 phi(n) log q is derived
    only for huge n, so the report is observational.
    """
    if n < 10:
        raise PreconditionViolation("case split needs n >= 10")
    rep = primitive_primes(params, n, budget, cache)
    if not rep.complete:
        raise IncompleteFactorization(rep.factored.value, rep.factored.cofactor)
    return _case_split_from(params, n, rep)


def case_split_values(rep) -> tuple[float, float, float]:
    """(A, B, ramified primitive mass) as floats."""
    A = math.fsum(r.nu_Psi_n * math.log(r.p) for r in rep.primitive if r.kind == "split")
    B = math.fsum(r.nu_Psi_n * math.log(r.p) for r in rep.primitive if r.kind == "inert")
    R = math.fsum(r.nu_Psi_n * math.log(r.p) for r in rep.primitive if r.kind == "ramified")
    return A, B, R


def _case_split_from(params: FrobeniusParams, n: int, rep) -> BoundReport:
    ctx = IntervalCtx()
    A = B = ctx.mpf(0)
    for r in rep.primitive:
        term = r.nu_Psi_n * ctx.log(ctx.mpf(r.p))
        if r.kind == "split":
            A += term
        elif r.kind == "inert":
            B += term
    big = A if midpoint(A) >= midpoint(B) else B
    rhs = ctx.mpf("0.4") * phi_from(factor_small(n)) * ctx.log(ctx.mpf(params.q))
    # reported as rhs <= max(A, B)
    return _report(
        "case_split",
        rhs,
        big,
        False,
        A=midpoint(A),
        B=midpoint(B),
        A_plus_B=midpoint(A + B),
        log_psi=midpoint(ctx.log(ctx.mpf(cyclo_norm(params, n)))),
        branch="split" if big is A else "inert",
    )


def pprime_bound_report(
    params: FrobeniusParams,
    n: int,
    budget: Budget | None = None,
    cache: PsiFactorCache | None = None,
) -> BoundReport:
    """#P' against (P/n + 1) exp(80 log n logloglog n / (loglog n)^2).

    P' keeps the inert primes p | N_n (p not dividing 2q) whose gamma rank
    m has d_p = n/m below tau(n) log n; P is the largest of them.
    """
    if n < 16:
        raise PreconditionViolation("the P' bound needs n >= 16")
    if gamma_class(params).degenerate:
        raise PreconditionViolation(f"gamma is a root of unity for {params}")
    cache = cache or PsiFactorCache(params, budget)
    fN = cache.group_order(n)
    if not fN.complete:
        raise IncompleteFactorization(fN.value, fN.cofactor)
    fac_n = factor_small(n)
    tau = tau_from(fac_n)
    cutoff = tau * math.log(n)

    inert, excluded, dp = [], [], {}
    for p in sorted(known_primes(fN)):
        if classify_prime(params, p).kind != "inert":
            continue
        if (2 * params.q) % p == 0:
            excluded.append(p)
            continue
        m = gamma_rank(params, p, n)
        assert m is not None and n % m == 0, (p, m)
        inert.append(p)
        dp[p] = n // m
    pprime = [p for p in inert if dp[p] < cutoff]
    P = max(pprime, default=0)

    ctx = IntervalCtx()
    L = ctx.log(ctx.mpf(n))
    LL = ctx.log(L)
    rhs = (ctx.mpf(P) / n + 1) * ctx.exp(80 * L * ctx.log(LL) / (LL * LL))

    big_d_tail = sum(Fraction(1, d) for d in divisors(n) if d >= cutoff)
    census = small_divisor_census(n)
    rep = _report(
        "pprime_count",
        ctx.mpf(len(pprime)),
        rhs,
        False,
        n_inert=len(inert),
        n_pprime=len(pprime),
        P=P,
        cutoff=cutoff,
        excluded=",".join(map(str, excluded)),
        big_d_tail=float(big_d_tail),
        tau_log2=tau * math.log(2),
        small_divisors=census.count,
    )
    rep.details["d_p"] = dp
    rep.details["pprime"] = pprime
    return rep
