"""Counting S-units up to x and the explicit upper bounds for that count."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

from .errors import EnumerationTooLarge, PreconditionViolation
from .intervals import IntervalCtx, certify_le, midpoint
from .intervals import log_star as iv_log_star

Variant = Literal["trivial", "large_primes", "general"]
VARIANTS: tuple[Variant, ...] = ("trivial", "large_primes", "general")

DEFAULT_LIMIT = 10**9


@dataclass(frozen=True)
class SUnitInstance:
    x: float
    S: tuple[int, ...]

    def __post_init__(self):
        if self.x < 0:
            raise ValueError("x must be >= 0")
        s = tuple(sorted(set(self.S)))
        if s != tuple(self.S):
            object.__setattr__(self, "S", s)

    @property
    def k(self) -> int:
        return len(self.S)


def log_star(t: float) -> float:
    """max(log t, 1), and 1 for t <= 0."""
    if t <= 0:
        return 1.0
    return max(math.log(t), 1.0)


def trivial_count_bound(inst: SUnitInstance) -> int:
    """prod over p in S of (number of powers of p up to x)."""
    xi = int(inst.x)
    out = 1
    for p in inst.S:
        e, pk = 0, 1
        while pk * p <= xi:
            pk *= p
            e += 1
        out *= e + 1
    return out


def iter_sunits(inst: SUnitInstance) -> Iterator[int]:
    """S-units <= x, lexicographic in the exponent vector (a_1, ..., a_k)."""
    xi = int(inst.x)
    if xi < 1:
        return
    S = inst.S

    def rec(i: int, m: int) -> Iterator[int]:
        if i == len(S):
            yield m
            return
        p = S[i]
        while m <= xi:
            yield from rec(i + 1, m)
            m *= p

    yield from rec(0, 1)


def _num_powers(t: int, p: int) -> int:
    """#{j >= 0 : p^j <= t} for t >= 1."""
    if p == 2:
        return t.bit_length()
    c = 0
    while t:
        c += 1
        t //= p
    return c


def _count_two(t: int, p: int, r: int) -> int:
    """#{(i, j) : r^i p^j <= t} with p < r."""
    c = 0
    while t:
        c += _num_powers(t, p)
        t //= r
    return c


def theta_exact(inst: SUnitInstance, limit: int = DEFAULT_LIMIT) -> int:
    """Number of n <= x whose prime factors all lie in S.

    Depth-first over the exponents of the larger primes, pruned by the
    running product; the two smallest primes are counted in closed form.
    Raises EnumerationTooLarge once the count would pass ``limit``.
    """
    xi = int(inst.x)
    if xi < 1:
        return 0
    S = inst.S
    if not S:
        return 1
    if len(S) == 1:
        return _num_powers(xi, S[0])
    careful = trivial_count_bound(inst) > limit
    big = S[:1:-1]  # descending, without the two smallest
    p, r = S[0], S[1]
    count = 0
    stack = [(0, xi)]
    while stack:
        i, t = stack.pop()
        if i == len(big):
            count += _count_two(t, p, r)
            if careful and count > limit:
                raise EnumerationTooLarge(f"more than {limit} S-units below {inst.x}")
            continue
        b = big[i]
        while t:
            stack.append((i + 1, t))
            t //= b
    return count


def sieve_count(x: int, S: tuple[int, ...]) -> np.ndarray:
    """cumulative[n] = #{1 <= m <= n : m is an S-unit}, by dividing out each p in S.

    Independent of the enumeration in theta_exact; used as a cross-check.
    """
    rem = np.arange(x + 1, dtype=np.int64)
    for p in S:
        pk = p
        while pk <= x:
            rem[pk::pk] //= p
            pk *= p
    smooth = rem == 1
    smooth[0] = False
    return np.cumsum(smooth)


def _check(inst: SUnitInstance, variant: Variant) -> None:
    if variant == "trivial":
        if inst.x < 7:
            raise PreconditionViolation("trivial bound needs x >= 7")
    elif variant in ("large_primes", "general"):
        if inst.x < 3:
            raise PreconditionViolation(f"{variant} bound needs x >= 3")
        if variant == "large_primes" and any(p * p < inst.k for p in inst.S):
            raise PreconditionViolation("large_primes bound needs p >= sqrt(k) for all p in S")
    else:
        raise ValueError(f"unknown variant {variant!r}")


def applicable(inst: SUnitInstance, variant: Variant) -> bool:
    try:
        _check(inst, variant)
    except PreconditionViolation:
        return False
    return True


def _exponent(ctx, inst: SUnitInstance, variant: Variant):
    """Interval enclosure of the log of the bound."""
    k = ctx.mpf(inst.k)
    lx = ctx.log(ctx.mpf(inst.x))
    if variant == "trivial":
        return 2 * k * ctx.log(lx)
    ls_k = iv_log_star(ctx, k)
    inner = (lx / ls_k) * iv_log_star(ctx, k * ls_k / lx)
    if variant == "large_primes":
        return 10 * inner
    return 2 * ctx.sqrt(k) * ctx.log(lx) + 20 * inner


def theta_bound_exponent(inst: SUnitInstance, variant: Variant, prec: int = 128) -> float:
    """Natural log of the bound (finite even when the bound overflows a float)."""
    _check(inst, variant)
    return midpoint(_exponent(IntervalCtx(prec), inst, variant))


def theta_bound(inst: SUnitInstance, variant: Variant) -> float:
    """The bound itself; ``inf`` when it exceeds the float range."""
    e = theta_bound_exponent(inst, variant)
    return math.exp(e) if e < 709 else math.inf


def theta_dominates(
    inst: SUnitInstance, variant: Variant, count: int | None = None, prec: int = 128
) -> bool | None:
    """Certified check of theta_exact <= bound; None when the intervals overlap."""
    _check(inst, variant)
    if count is None:
        count = theta_exact(inst)
    if count == 0:
        return True
    ctx = IntervalCtx(prec)
    return certify_le(ctx.log(ctx.mpf(count)), _exponent(ctx, inst, variant))


def count_bounded_compositions(k: int, ell: int) -> tuple[int, int]:
    """(#{a in Z_{>=0}^k : sum a <= ell}, sum_{i<=ell} C(k+i, i)).

    The first is C(k+ell, ell); the second is the larger count used in the
    proof of the large-primes bound.  Both are returned and exact <= the other.
    """
    if k < 1 or ell < 0:
        raise ValueError("need k >= 1 and ell >= 0")
    exact = math.comb(k + ell, ell)
    proof_count = sum(math.comb(k + i, i) for i in range(ell + 1))
    assert exact <= proof_count
    return exact, proof_count
