"""Interval arithmetic helpers for certified inequality checks."""

from __future__ import annotations

from mpmath.ctx_iv import MPIntervalContext

DEFAULT_PREC = 128


def IntervalCtx(prec: int = DEFAULT_PREC) -> MPIntervalContext:
    """A private mpmath interval context; never touches the global one."""
    ctx = MPIntervalContext()
    ctx.prec = max(prec, DEFAULT_PREC)
    return ctx


def certify_le(lhs, rhs) -> bool | None:
    """True if lhs <= rhs for every point of both intervals, False if lhs > rhs
    everywhere, None when they overlap."""
    if lhs.b <= rhs.a:
        return True
    if lhs.a > rhs.b:
        return False
    return None


def log_star(ctx: MPIntervalContext, t):
    """Interval max(log t, 1), with 1 for t <= 0."""
    one = ctx.mpf(1)
    if t.b <= 0:
        return one
    if t.a <= 0:
        # straddles 0: the result lies between 1 and max(log t.b, 1)
        hi = ctx.log(ctx.mpf(t.b))
        return one if hi.b <= 1 else ctx.mpf([1, hi.b])
    v = ctx.log(t)
    if v.a >= 1:
        return v
    if v.b <= 1:
        return one
    return ctx.mpf([1, v.b])


def midpoint(v) -> float:
    return float(v.mid)
