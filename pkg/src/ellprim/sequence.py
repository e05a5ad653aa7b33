"""Traces t_n, group orders N_n, cyclotomic norms Psi_n and w_n = t_n^2 - 4q^n."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import divisors
from .errors import MismatchError
from .factor import Budget, FactoredInteger, factorize
from .quadratic import (
    ONE,
    FrobeniusParams,
    QuadInt,
    horner,
    norm_trace,
    quad_pow,
    quad_sub,
)

DEFAULT_BIT_BUDGET = 4096


@dataclass(frozen=True)
class CycloPoly:
    n: int
    coeffs: tuple[int, ...]  # low degree first

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class OrderValue:
    n: int
    t_n: int
    N_n: int
    w_n: int


def max_index(params: FrobeniusParams, bits: int = DEFAULT_BIT_BUDGET) -> int:
    """Largest n with q^n below the bit budget."""
    return max(1, bits // params.q.bit_length())


def trace_seq(params: FrobeniusParams, n_max: int) -> list[int]:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    t = [2, params.a]
    for _ in range(n_max - 1):
        t.append(params.a * t[-1] - params.q * t[-2])
    return t


def trace(params: FrobeniusParams, n: int) -> int:
    # t_n = trace of alpha^n
    return norm_trace(quad_pow(params.alpha, n, params), params)[1]


def group_order(params: FrobeniusParams, n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return params.q**n + 1 - trace_seq(params, n)[n]


def group_order_via_norm(params: FrobeniusParams, n: int) -> int:
    """N_n as the norm of alpha^n - 1."""
    return norm_trace(quad_sub(quad_pow(params.alpha, n, params), ONE), params)[0]


def order_value(params: FrobeniusParams, n: int) -> OrderValue:
    t = trace_seq(params, n)[n]
    qn = params.q**n
    return OrderValue(n, t, qn + 1 - t, t * t - 4 * qn)


def w_seq(params: FrobeniusParams, n_max: int) -> list[int]:
    """w_0..w_{n_max}, w_n = t_n^2 - 4 q^n = delta * U_n^2."""
    t = trace_seq(params, n_max)
    return [t[k] * t[k] - 4 * params.q**k for k in range(n_max + 1)]


def lucas_u(params: FrobeniusParams, n_max: int) -> list[int]:
    """U_n = (alpha^n - conj(alpha)^n) / (alpha - conj(alpha))."""
    u = [0, 1]
    for _ in range(n_max - 1):
        u.append(params.a * u[-1] - params.q * u[-2])
    return u[: n_max + 1]


def _poly_mul(f: list[int], g: list[int]) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    """Quotient of num by the monic polynomial den; the remainder must be 0."""
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(quot) - 1, -1, -1):
        c = num[i + dd]
        quot[i] = c
        if c:
            for j, b in enumerate(den):
                num[i + j] -= c * b
    if any(num[:dd]):
        raise MismatchError("cyclotomic division left a remainder")
    return quot


@lru_cache(maxsize=2048)
def _cyclo(n: int) -> tuple[int, ...]:
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        poly = _poly_exact_div(poly, list(_cyclo(d)))
    return tuple(poly)


def cyclotomic_poly(n: int) -> CycloPoly:
    if not 1 <= n <= 10**6:
        raise ValueError("n must be in [1, 10^6]")
    return CycloPoly(n, _cyclo(n))


def cyclo_value(params: FrobeniusParams, n: int) -> QuadInt:
    """Phi_n(alpha) in Z[alpha]."""
    return horner(list(_cyclo(n)), params.alpha, params)


def cyclo_norm(params: FrobeniusParams, n: int) -> int:
    """Psi_n = |Phi_n(alpha)|^2."""
    return norm_trace(cyclo_value(params, n), params)[0]


def order_product_check(params: FrobeniusParams, n: int) -> list[tuple[int, int]]:
    """Check N_n = prod_{d | n} Psi_d and return [(d, Psi_d), ...]."""
    parts = [(d, cyclo_norm(params, d)) for d in divisors(n)]
    lhs = group_order(params, n)
    rhs = math.prod(v for _, v in parts)
    if lhs != rhs:
        raise MismatchError(f"N_{n} = {lhs} but product of Psi_d = {rhs} for {params}")
    return parts


class PsiFactorCache:
    """Factorizations of Psi_d for one parameter pair, reused across n.

    Scan drivers share one instance per (q, a); N_n's factorization is the
    product of the cached Psi_d factorizations over d | n.  Each call site
    owns its cache, nothing is global.
    """

    def __init__(self, params: FrobeniusParams, budget: Budget | None = None):
        self.params = params
        self.budget = budget or Budget()
        self._psi: dict[int, FactoredInteger] = {}

    def psi(self, d: int) -> FactoredInteger:
        if d not in self._psi:
            self._psi[d] = factorize(cyclo_norm(self.params, d), self.budget)
        return self._psi[d]

    def group_order(self, n: int) -> FactoredInteger:
        out = FactoredInteger(1, ())
        for d in divisors(n):
            out = out * self.psi(d)
        return out


def factor_group_order(
    params: FrobeniusParams, n: int, budget: Budget | None = None
) -> FactoredInteger:
    return PsiFactorCache(params, budget).group_order(n)

