"""Independent reference implementations used only by the tests.

Nothing here calls into ellprim; each routine takes the slow, obvious
route so that agreement with the library means something.
"""

from __future__ import annotations

import cmath
import math

import sympy


def complex_alpha(q: int, a: int) -> complex:
    return (a + 1j * math.sqrt(4 * q - a * a)) / 2


def trace_by_complex_power(q: int, a: int, n: int) -> int:
    """t_n = 2 Re(alpha^n), rounded; only trusted while |alpha^n| stays small."""
    z = complex_alpha(q, a) ** n
    return round(2 * z.real)


def poly_mulmod(u, v, a, q, m):
    """(u0 + u1 x)(v0 + v1 x) in (Z/m)[x]/(x^2 - a x + q)."""
    c0 = u[0] * v[0]
    c1 = u[0] * v[1] + u[1] * v[0]
    c2 = u[1] * v[1]
    return ((c0 - q * c2) % m, (c1 + a * c2) % m)


def brute_order(elem, one, mul, cap):
    """Least k <= cap with elem^k == one, by repeated multiplication."""
    x = elem
    for k in range(1, cap + 1):
        if x == one:
            return k
        x = mul(x, elem)
    return None


def ideal_orders_brute(q: int, a: int, p: int) -> list[int]:
    """Orders of alpha at every prime ideal above p, by brute force.

    Roots of x^2 - a x + q mod p are found by trying every residue.  With no
    root the ideal is (p) and alpha is iterated in F_p[x]/(x^2 - a x + q).
    A zero root (p | q) contributes nothing.  Large p falls back to sympy's
    modular square roots and multiplicative orders.
    """
    if p > 5000:
        return _ideal_orders_large(q, a, p)
    roots = sorted({r for r in range(p) if (r * r - a * r + q) % p == 0})
    if roots:
        out = []
        for r in roots:
            if r == 0:
                continue
            out.append(brute_order(r, 1, lambda x, y: x * y % p, p))
        return out
    mul = lambda u, v: poly_mulmod(u, v, a, q, p)  # noqa: E731
    return [brute_order((0, 1), (1, 0), mul, p * p)]


def _poly_powmod(u, k, a, q, p):
    acc = (1, 0)
    while k:
        if k & 1:
            acc = poly_mulmod(acc, u, a, q, p)
        u = poly_mulmod(u, u, a, q, p)
        k >>= 1
    return acc


def _ideal_orders_large(q: int, a: int, p: int) -> list[int]:
    inv2 = pow(2, -1, p)
    sq = sympy.sqrt_mod((a * a - 4 * q) % p, p, all_roots=True)
    if sq:
        roots = sorted({(a + s) * inv2 % p for s in sq})
        return [sympy.n_order(r, p) for r in roots if r]
    for d in sympy.divisors(p * p - 1):
        if _poly_powmod((0, 1), d, a, q, p) == (1, 0):
            return [d]
    raise AssertionError("no order found")


def gamma_order_brute(q: int, a: int, p: int) -> int:
    """Order of conj(alpha)/alpha in F_{p^2} by iteration; p inert, p not dividing q."""
    mul = lambda u, v: poly_mulmod(u, v, a, q, p)  # noqa: E731
    conj = (a % p, p - 1)  # a - x
    inv_alpha = (a * pow(q, -1, p) % p, (-pow(q, -1, p)) % p)  # (a - x)/q
    g = mul(conj, inv_alpha)
    return brute_order(g, (1, 0), mul, p * p)


def psi_by_resultant(q: int, a: int, n: int) -> int:
    """Res(x^2 - a x + q, Phi_n(x)) = Phi_n(alpha) Phi_n(conj alpha)."""
    x = sympy.Symbol("x")
    return int(sympy.resultant(x**2 - a * x + q, sympy.cyclotomic_poly(n, x), x))


def primitive_set_brute(q: int, a: int, n: int) -> set[int]:
    """Primes p | N_n with some ideal where alpha has order exactly n."""
    N = q**n + 1 - _trace_exact(q, a, n)
    return {p for p in sympy.factorint(N) if n in ideal_orders_brute(q, a, p)}


def _trace_exact(q: int, a: int, n: int) -> int:
    x = sympy.Symbol("x")
    # power sum of the roots via sympy's polynomial remainder
    r = sympy.rem(x**n, x**2 - a * x + q, x)
    c = sympy.Poly(r, x).all_coeffs()
    c1, c0 = (c if len(c) == 2 else [0, c[0]])
    # x^n = c1 x + c0 at both roots; sum over roots
    return int(c1 * a + 2 * c0)


def theta_brute(x: int, S) -> int:
    S = set(S)
    return sum(1 for m in range(1, int(x) + 1) if set(sympy.primefactors(m)) <= S)


def mahler_measure(coeffs) -> float:
    """Leading coefficient times product of max(1, |root|), numerically."""
    import numpy as np

    roots = np.roots(coeffs)
    return abs(coeffs[0]) * math.prod(max(1.0, abs(r)) for r in roots)


def is_root_of_unity(z: complex, max_order: int = 12) -> int:
    for k in range(1, max_order + 1):
        if abs(z**k - 1) < 1e-9:
            return k
    return 0


def gamma_complex(q: int, a: int) -> complex:
    al = complex_alpha(q, a)
    return al.conjugate() / al


def unit_circle_ok(z: complex) -> bool:
    return abs(abs(z) - 1) < 1e-12 and not cmath.isnan(z.real)
