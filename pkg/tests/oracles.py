"""Independent reference computations used by the test suite.

Nothing here calls the graph code in mahlerlab.calmness: valuations at
K-points come from repeated synthetic division, and minimal calmness values
come from exhaustive enumeration of sequences.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import inf

from mahlerlab.field import Cyclotomic, multiplicative_order
from mahlerlab.points import orbit_step
from mahlerlab.poly import Poly, RatFun, valuation_at_class


def mult_at(p: Poly, beta) -> int:
    """Multiplicity of the root beta of p by Horner division."""
    c = list(p.c)
    e = 0
    while len(c) > 1:
        q = [c[-1]]
        for x in reversed(c[1:-1]):
            q.append(x + beta * q[-1])
        rem = c[0] + beta * q[-1]
        if rem != 0:
            break
        c = q[::-1]
        e += 1
    return e


def val_at(c: RatFun, beta):
    if c.is_zero():
        return inf
    return mult_at(c.num, beta) - mult_at(c.den, beta)


def _weights(coeffs, start, k, length):
    """w[t][a-1] = valuation of c_a at the t-th orbit point of start."""
    if start.poly.deg == 1:
        beta = start.value
        pts = []
        for _ in range(length):
            pts.append(beta)
            beta = beta ** k
        return [[val_at(c, b) for c in coeffs] for b in pts]
    cls, out = start, []
    for _ in range(length):
        out.append([valuation_at_class(c, cls.poly) for c in coeffs])
        cls = orbit_step(cls, k)
    return out


def brute_min_clm(coeffs, start, k, bound=8):
    """Exhaustive minimum over sequences rooted at ``start``.

    Non-unity starts: every sequence until the step sum reaches ``bound``
    (weights are assumed to vanish from there on).  Unity starts: every
    closed walk of at most 2m steps; a negative one means -inf.
    """
    n = len(coeffs)
    if start.order is not None:
        m = multiplicative_order(k, start.order)
        w = _weights(coeffs, start, k, m)
        best = inf

        def walk(pos, steps, acc):
            nonlocal best
            if steps and pos == 0:
                best = min(best, acc)
            if steps == 2 * m:
                return
            for a in range(1, n + 1):
                x = w[pos][a - 1]
                if x != inf:
                    walk((pos + a) % m, steps + 1, acc + x)

        walk(0, 0, 0)
        return -inf if best < 0 else best
    w = _weights(coeffs, start, k, bound)
    best = inf

    def seq(s, acc):
        nonlocal best
        if s >= bound:
            best = min(best, acc)
            return
        for a in range(1, n + 1):
            x = w[s][a - 1]
            if x != inf:
                seq(s + a, acc + x)

    seq(0, 0)
    return best


# random instances ------------------------------------------------------------

Q_POINTS = [Fraction(2), Fraction(3), Fraction(1, 2), Fraction(-2)]


def random_coefficients(rng: random.Random, use_zeta: bool, n: int | None = None, max_deg: int = 4, allow_zero=True):
    """Coefficients with zeros and poles among 2, 3, 1/2, -2 and fifth roots of unity.

    With ``use_zeta`` the field is Q(zeta_5) and single fifth roots appear;
    otherwise the whole cyclotomic class Phi_5 is used over Q.
    """
    K = Cyclotomic(5 if use_zeta else 1)
    if use_zeta:
        zeta = K.zeta()
        factors = [Poly.linear(K.embed(p)) for p in Q_POINTS] + [Poly.linear(zeta ** j) for j in range(1, 5)]
    else:
        factors = [Poly.linear(p) for p in Q_POINTS] + [Poly([1, 1, 1, 1, 1])]
    n = n or rng.randint(1, 3)
    coeffs = []
    for i in range(n):
        if allow_zero and i < n - 1 and rng.random() < 0.15:
            coeffs.append(RatFun(Poly([])))
            continue
        num, den = Poly([K.one]), Poly([K.one])
        for f in rng.sample(factors, rng.randint(0, 3)):
            e = rng.choice([-2, -1, 1, 2])
            if e > 0 and num.deg + e * f.deg <= max_deg:
                num = num * f ** e
            elif e < 0 and den.deg - e * f.deg <= max_deg:
                den = den * f ** (-e)
        scale = K.embed(Fraction(rng.choice([1, -1, 2, 3]), rng.choice([1, 2, 5])))
        if rng.random() < 0.3 and num.deg < max_deg:
            num = num * Poly.monomial(1, K.one)
        coeffs.append(RatFun(num * scale, den))
    return coeffs
