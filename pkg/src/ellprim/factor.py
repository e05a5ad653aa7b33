"""Primality testing and budgeted factorization of big integers.

Pipeline: trial division up to ``Budget.trial_bound`` (done blockwise with
gcds against prime products), then Pollard rho with Brent's cycle detection.
Rho is seeded from the number being split, so results are reproducible.
Whatever cannot be split within the iteration cap is returned as an
explicitly labelled cofactor instead of raising.
"""

from __future__ import annotations

import math
import os
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import gmpy2

# Deterministic Miller-Rabin: the first 13 primes are a witness set for all
# n < 3317044064679887385961981.
DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
RANDOM_ROUNDS = 40

_BLOCK = 256
_SMALL = 10**8

CofactorStatus = Literal["unit", "probable_prime", "composite_unknown"]


def _default_rho_iterations() -> int:
    return int(os.environ.get("ELLPRIM_BUDGET", "100000"))


@dataclass(frozen=True)
class Budget:
    """Work limits for one call to :func:`factorize`.

    ``rho_iterations`` caps the total number of rho steps across all pieces.
    ``time_ms`` is an optional wall-clock cap; setting it gives up the
    run-to-run reproducibility guarantee.
    """

    trial_bound: int = 10**6
    rho_iterations: int = field(default_factory=_default_rho_iterations)
    time_ms: int | None = None


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]
    cofactor: int = 1
    cofactor_status: CofactorStatus = "unit"

    @property
    def complete(self) -> bool:
        return self.cofactor_status in ("unit", "probable_prime")

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def summary(self) -> str:
        """Compact text form, e.g. ``2^3*7`` or ``2*[c:1234...]``."""
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors]
        if self.cofactor != 1:
            tag = "p" if self.cofactor_status == "probable_prime" else "c"
            parts.append(f"[{tag}:{self.cofactor}]")
        return "*".join(parts) if parts else "1"

    def __mul__(self, other: FactoredInteger) -> FactoredInteger:
        merged = self.as_dict()
        for p, e in other.factors:
            merged[p] = merged.get(p, 0) + e
        pieces = [
            (f.cofactor, f.cofactor_status) for f in (self, other) if f.cofactor != 1
        ]
        if len(pieces) == 2:
            # Two probable primes stay listed factors rather than a fake composite.
            for c, st in list(pieces):
                if st == "probable_prime":
                    merged[c] = merged.get(c, 0) + 1
                    pieces.remove((c, st))
        if not pieces:
            cof, status = 1, "unit"
        elif len(pieces) == 1:
            cof, status = pieces[0]
        else:
            cof, status = pieces[0][0] * pieces[1][0], "composite_unknown"
        return FactoredInteger(
            self.value * other.value, tuple(sorted(merged.items())), cof, status
        )


def small_primes(limit: int) -> list[int]:
    """All primes < limit (plain sieve of Eratosthenes)."""
    if limit <= 2:
        return []
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return [i for i, v in enumerate(sieve) if v]


@lru_cache(maxsize=4)
def _trial_table(bound: int):
    primes = small_primes(bound + 1)
    products = [math.prod(primes[i : i + _BLOCK]) for i in range(0, len(primes), _BLOCK)]
    return primes, products, gmpy2.mpz(math.prod(products))


def _trial_divide(m: int, bound: int) -> tuple[dict[int, int], int]:
    """Strip all prime factors <= bound from m."""
    primes, products, everything = _trial_table(bound)
    found: dict[int, int] = {}
    if m < _SMALL:
        for p in primes:
            if p * p > m:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                found[p] = e
        if 1 < m <= bound:
            found[m] = found.get(m, 0) + 1
            m = 1
        return found, m
    g = int(gmpy2.gcd(everything, m))
    if g == 1:
        return found, m
    for i, prod in enumerate(products):
        if math.gcd(g, prod) == 1:
            continue
        for p in primes[i * _BLOCK : (i + 1) * _BLOCK]:
            if g % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                found[p] = e
                g //= p
        if g == 1:
            break
    return found, m


def _strong_probable_prime(n: int, base: int) -> bool:
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; exact below ``DETERMINISTIC_LIMIT``.

    Larger inputs get 40 extra rounds with bases drawn from a generator
    seeded by ``n`` itself, so the answer never changes between runs.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if not all(_strong_probable_prime(n, b) for b in _MR_BASES):
        return False
    if n < DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(n)
    return all(
        _strong_probable_prime(n, rng.randrange(2, n - 1)) for _ in range(RANDOM_ROUNDS)
    )


def valuation(n: int, p: int) -> int:
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


class _Meter:
    def __init__(self, budget: Budget):
        self.left = budget.rho_iterations
        self.deadline = (
            None if budget.time_ms is None else time.monotonic() + budget.time_ms / 1000
        )

    def spend(self, k: int) -> bool:
        self.left -= k
        if self.left < 0:
            return False
        return self.deadline is None or time.monotonic() < self.deadline


def _brent(n: int, c: int, y: int, meter: _Meter) -> int | None:
    """One Brent-rho attempt; returns a factor (possibly n itself) or None."""
    m = 128
    n, c, y = gmpy2.mpz(n), gmpy2.mpz(c), gmpy2.mpz(y)
    g = r = 1
    q = gmpy2.mpz(1)
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        if not meter.spend(r):
            return None
        k = 0
        while k < r and g == 1:
            ys = y
            steps = min(m, r - k)
            for _ in range(steps):
                y = (y * y + c) % n
                q = q * (x - y) % n
            g = gmpy2.gcd(q, n)
            k += steps
            if not meter.spend(steps):
                return None if g in (1, n) else int(g)
        r *= 2
    if g == n:
        # Batched gcd overshot; walk back one step at a time.
        while True:
            ys = (ys * ys + c) % n
            g = gmpy2.gcd(x - ys, n)
            if g > 1:
                break
    return int(g)


def _split(n: int, meter: _Meter) -> int | None:
    """Find a nontrivial factor of the odd composite n, or None on budget."""
    r = math.isqrt(n)
    if r * r == n:
        return r
    rng = random.Random(n)
    while meter.left > 0:
        c = rng.randrange(1, n - 1)
        y = rng.randrange(0, n)
        g = _brent(n, c, y, meter)
        if g is None:
            return None
        if 1 < g < n:
            return g
    return None


def factorize(n: int, budget: Budget | None = None) -> FactoredInteger:
    """Factor n as far as the budget allows.

    Never raises on budget exhaustion: unsplit composite pieces end up in
    ``cofactor`` with status ``composite_unknown``.  A single leftover piece
    beyond the deterministic primality range is reported as a
    ``probable_prime`` cofactor.
    """
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    budget = budget or Budget()
    found, m = _trial_divide(n, budget.trial_bound)

    meter = _Meter(budget)
    stack = [m] if m > 1 else []
    leftovers: list[tuple[int, bool]] = []
    while stack:
        x = stack.pop()
        if is_probable_prime(x):
            if x < DETERMINISTIC_LIMIT:
                found[x] = found.get(x, 0) + 1
            else:
                leftovers.append((x, True))
            continue
        g = _split(x, meter)
        if g is None:
            leftovers.append((x, False))
            continue
        stack.extend((g, x // g))

    # Merge repeated big probable primes into the factor list.
    counts: dict[int, int] = {}
    for x, prime in leftovers:
        counts[x] = counts.get(x, 0) + 1
    composite = [x for x, prime in leftovers if not prime]
    probable = sorted({x for x, prime in leftovers if prime})
    status: CofactorStatus
    if not leftovers:
        cof, status = 1, "unit"
    elif not composite and len(probable) == 1 and counts[probable[0]] == 1:
        cof, status = probable[0], "probable_prime"
    else:
        # Probable primes found alongside other leftovers are listed; they
        # pass the primality test like any other listed factor.
        for x in probable:
            found[x] = found.get(x, 0) + counts[x]
        cof, status = (math.prod(composite), "composite_unknown") if composite else (1, "unit")
    return FactoredInteger(n, tuple(sorted(found.items())), cof, status)


def largest_known_prime_factor(f: FactoredInteger) -> tuple[int, bool]:
    """(P, complete); P(1) = 1, and a composite cofactor only lowers confidence."""
    p = max((q for q, _ in f.factors), default=1)
    if f.cofactor_status == "probable_prime":
        p = max(p, f.cofactor)
    return p, f.complete
