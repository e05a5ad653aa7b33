"""Exact arithmetic in Z[alpha], alpha^2 = a*alpha - q, and heights.

Elements are stored on the basis (1, alpha).  Everything is integer
arithmetic; heights are the only floating point values and come with the
exact integer whose logarithm they are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParams


@dataclass(frozen=True)
class FrobeniusParams:
    """Field size q and trace a, with alpha, conj(alpha) the roots of x^2 - a x + q."""

    q: int
    a: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not isinstance(self.a, int):
            raise InvalidParams("q and a must be integers")
        if self.q < 2:
            raise InvalidParams(f"q must be >= 2, got {self.q}")
        if self.a * self.a >= 4 * self.q:
            raise InvalidParams(f"need a^2 < 4q, got q={self.q}, a={self.a}")

    @property
    def delta(self) -> int:
        return self.a * self.a - 4 * self.q

    @property
    def alpha(self) -> QuadInt:
        return QuadInt(0, 1)

    @classmethod
    def admissible(cls, q: int) -> list[FrobeniusParams]:
        """All (q, a) with a^2 < 4q, in increasing a."""
        r = math.isqrt(4 * q - 1)
        return [cls(q, a) for a in range(-r, r + 1)]


@dataclass(frozen=True)
class QuadInt:
    """x + y*alpha."""

    x: int
    y: int = 0

    def __str__(self):
        return f"({self.x} + {self.y}a)"


ONE = QuadInt(1, 0)


def quad_add(u: QuadInt, v: QuadInt) -> QuadInt:
    return QuadInt(u.x + v.x, u.y + v.y)


def quad_sub(u: QuadInt, v: QuadInt) -> QuadInt:
    return QuadInt(u.x - v.x, u.y - v.y)


def quad_mul(u: QuadInt, v: QuadInt, params: FrobeniusParams) -> QuadInt:
    # (x1 + y1 A)(x2 + y2 A) with A^2 = aA - q
    yy = u.y * v.y
    return QuadInt(u.x * v.x - params.q * yy, u.x * v.y + u.y * v.x + params.a * yy)


def quad_pow(u: QuadInt, k: int, params: FrobeniusParams) -> QuadInt:
    if k < 0:
        raise ValueError("negative exponent")
    result = ONE
    while k:
        if k & 1:
            result = quad_mul(result, u, params)
        k >>= 1
        if k:
            u = quad_mul(u, u, params)
    return result


def conj(u: QuadInt, params: FrobeniusParams) -> QuadInt:
    # conj(alpha) = a - alpha
    return QuadInt(u.x + params.a * u.y, -u.y)


def norm_trace(u: QuadInt, params: FrobeniusParams) -> tuple[int, int]:
    x, y, a, q = u.x, u.y, params.a, params.q
    return x * x + a * x * y + q * y * y, 2 * x + a * y


def horner(coeffs: list[int], u: QuadInt, params: FrobeniusParams) -> QuadInt:
    """Evaluate sum coeffs[i] * u^i in Z[alpha]."""
    acc = QuadInt(0, 0)
    for c in reversed(coeffs):
        acc = quad_mul(acc, u, params)
        acc = QuadInt(acc.x + c, acc.y)
    return acc


@dataclass(frozen=True)
class GammaClass:
    """Root-of-unity status and height of gamma = conj(alpha)/alpha.

    ``mahler`` is the Mahler measure of gamma's primitive integer minimal
    polynomial, so ``height == log(mahler) / 2`` exactly.
    """

    order_of_unity: int
    height: float
    mahler: int

    @property
    def degenerate(self) -> bool:
        return self.order_of_unity != 0


_UNITY_ORDERS = {0: 2, 1: 3, 2: 4, 3: 6}


def gamma_class(params: FrobeniusParams) -> GammaClass:
    q, a = params.q, params.a
    a2 = a * a
    if a2 % q == 0 and a2 // q in _UNITY_ORDERS:
        return GammaClass(_UNITY_ORDERS[a2 // q], 0.0, 1)
    # min poly q x^2 - (a^2 - 2q) x + q; both roots have modulus 1
    mahler = q // math.gcd(q, a2 - 2 * q)
    h = 0.5 * math.log(mahler)
    assert h <= 2 * q
    return GammaClass(0, h, mahler)


def height_alpha(params: FrobeniusParams) -> float:
    return 0.5 * math.log(params.q)
