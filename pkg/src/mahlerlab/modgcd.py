"""Multi-modular gcd for polynomials with rational coefficients.

Euclid over Q suffers from coefficient growth once degrees reach the
hundreds, which is routine for composed Mahler coefficients.  Here the gcd
is computed modulo word-size primes, lifted by CRT and accepted only after
an exact trial division, so the result is always the true gcd.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes():
    n = (1 << 61) - 1
    while True:
        if _is_prime(n):
            yield n
        n -= 2


def to_primitive_ints(coeffs) -> list[int]:
    """Integer primitive associate of a list of rationals (lowest degree first)."""
    den = 1
    for x in coeffs:
        den = den * x.denominator // igcd(den, x.denominator)
    ints = [int(x * den) for x in coeffs]
    g = 0
    for x in ints:
        g = igcd(g, x)
    return [x // g for x in ints] if g > 1 else ints


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _rem_mod(a, b, P):
    a = list(a)
    inv = pow(b[-1], -1, P)
    db = len(b) - 1
    for top in range(len(a) - 1, db - 1, -1):
        f = a[top] * inv % P
        if f:
            off = top - db
            for j, y in enumerate(b):
                a[off + j] = (a[off + j] - f * y) % P
    return _trim(a[:db])


def _gcd_mod(a, b, P):
    a = _trim([x % P for x in a])
    b = _trim([x % P for x in b])
    while b:
        a, b = b, _rem_mod(a, b, P)
    inv = pow(a[-1], -1, P)
    return [x * inv % P for x in a]


def _divides(d, a) -> bool:
    """Exact divisibility of integer polynomials."""
    r = list(a)
    dd = len(d) - 1
    lc = d[-1]
    for top in range(len(r) - 1, dd - 1, -1):
        if r[top] % lc:
            return False
        q = r[top] // lc
        if q:
            off = top - dd
            for j, y in enumerate(d):
                r[off + j] -= q * y
    return not any(r[:dd])


def modular_gcd(a: list[int], b: list[int], max_primes: int = 64) -> list[int] | None:
    """Primitive gcd of two nonzero integer polynomials, or None if it gave up."""
    gam = igcd(a[-1], b[-1])
    best = None
    H, M = None, 1
    used = 0
    for P in _primes():
        if used >= max_primes:
            return None
        used += 1
        if a[-1] % P == 0 or b[-1] % P == 0:
            continue
        g = _gcd_mod(a, b, P)
        if len(g) == 1:
            return [1]
        g = [x * gam % P for x in g]
        if best is None or len(g) < best:
            best, H, M = len(g), g, P
        elif len(g) > best:
            continue
        elif H is not g:
            inv = pow(M, -1, P)
            H = [h + M * ((x - h) * inv % P) for h, x in zip(H, g)]
            M *= P
        half = M // 2
        cand = to_primitive_ints([Fraction(h - M if h > half else h) for h in H])
        if cand[-1] < 0:
            cand = [-x for x in cand]
        if _divides(cand, a) and _divides(cand, b):
            return cand
    return None
