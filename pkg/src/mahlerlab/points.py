"""Point classes, calm/anxious classification and k-power orbits.

A point class is a Galois-stable set of points represented by its monic
squarefree class polynomial.  Every K-rational function in play has the same
valuation at each root of a class, so statements about a single point carry
over to the whole class.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd as igcd
from math import inf

from .errors import AllCoefficientsZero
from .field import (
    CycloElem,
    Cyclotomic,
    QQ,
    cyclotomic_coeffs,
    euler_phi,
    field_of,
    multiplicative_order,
    orders_with_phi_at_most,
    to_fraction,
)
from .poly import (
    ONE,
    Poly,
    RatFun,
    Z,
    coprime_basis,
    format_poly,
    gcd,
    multiplicity,
    poly_sort_key,
    power_image,
    squarefree_part,
    valuation_at_class,
)

ZERO_KIND = "zero"
ELEMENT = "element"
UNITY = "unity"
ALGEBRAIC = "algebraic"


@dataclass(frozen=True)
class PointClass:
    kind: str
    poly: Poly
    order: int | None = None  # root-of-unity order, when the class consists of roots of unity

    @property
    def value(self):
        if self.kind != ELEMENT:
            raise AttributeError("only element classes have a value")
        return -self.poly.c[0]

    @property
    def is_unity(self) -> bool:
        return self.order is not None

    def __str__(self):
        return format_poly(self.poly)

    @classmethod
    def zero(cls) -> "PointClass":
        return cls(ZERO_KIND, Z)

    @classmethod
    def element(cls, alpha, K: Cyclotomic | None = None) -> "PointClass":
        K = K or field_of(alpha)
        alpha = K.embed(alpha)
        if alpha == 0:
            return cls.zero()
        return cls(ELEMENT, Poly.linear(alpha), K.root_of_unity_order(alpha))

    @classmethod
    def unity(cls, b: int, poly: Poly | None = None) -> "PointClass":
        poly = Poly(cyclotomic_coeffs(b)) if poly is None else poly.monic()
        if poly.deg == 1:
            return cls(ELEMENT, poly, b)
        return cls(UNITY, poly, b)

    @classmethod
    def algebraic(cls, f: Poly) -> "PointClass":
        pieces = split_classes(f)
        if len(pieces) != 1:
            raise ValueError(f"{f} is not a single non-cyclotomic class")
        return pieces[0]


@dataclass(frozen=True)
class Classification:
    calm: bool
    unity: tuple[int, int] | None = None  # (order b, period m) for anxious roots of unity

    @property
    def anxious(self) -> bool:
        return not self.calm


def _poly_field(p: Poly) -> Cyclotomic:
    return field_of(*p.c)


def split_classes(p: Poly) -> list[PointClass]:
    """Split a monic squarefree polynomial into zero / root-of-unity / other classes."""
    return list(_split_classes(p.monic()))


@lru_cache(maxsize=4096)
def _split_classes(p: Poly) -> tuple:
    out = []
    if p.deg <= 0:
        return ()
    if p.c[0] == 0:
        out.append(PointClass.zero())
        p = p.exact_div(Z)
    K = _poly_field(p)
    for b in _cyclotomic_orders(p if K.is_rational else norm_poly(p)):
        g = gcd(p, Poly(cyclotomic_coeffs(b)))
        if g.deg > 0:
            if g.deg > 1 and K.unity_order % b == 0:
                out.extend(PointClass(ELEMENT, Poly.linear(r), b) for r in _unity_roots(g, K, b))
            else:
                out.append(PointClass.unity(b, g))
            p = p.exact_div(g).monic()
    if p.deg > 1:
        for r in rational_roots(p if K.is_rational else norm_poly(p)):
            lin = Poly.linear(K.embed(r))
            if p.deg > 1 and (p % lin).is_zero():
                out.append(PointClass(ELEMENT, lin, None))
                p = p.exact_div(lin)
    if p.deg == 1:
        out.append(PointClass(ELEMENT, p.monic(), None))
    elif p.deg > 1:
        out.append(PointClass(ALGEBRAIC, p.monic(), None))
    return tuple(out)


_SCREEN_PRIME = (1 << 61) - 1


def _cyclotomic_orders(q: Poly) -> list[int]:
    """Orders b such that Phi_b divides the Q-polynomial q.

    Each candidate is screened by division modulo a large prime before the
    exact check, so high-degree inputs stay cheap.
    """
    c = [to_fraction(x) for x in q.c]
    if len(c) < 2:
        return []
    den = 1
    for x in c:
        den = den * x.denominator // igcd(den, x.denominator)
    P = _SCREEN_PRIME
    ints = [int(x * den) % P for x in c]
    exact = Poly(c)
    out = []
    for b in orders_with_phi_at_most(len(c) - 1):
        phi = cyclotomic_coeffs(b)
        d = len(phi) - 1
        r = list(ints)
        for top in range(len(r) - 1, d - 1, -1):
            f = r[top]
            if f:
                for i in range(d):
                    r[top - d + i] = (r[top - d + i] - f * phi[i]) % P
                r[top] = 0
        if any(r[:d]):
            continue
        if (exact % Poly(phi)).is_zero():
            out.append(b)
    return out


def _unity_roots(g: Poly, K: Cyclotomic, b: int) -> list:
    """Roots of g among the primitive b-th roots of unity of K (all of them lie in K)."""
    M = K.unity_order
    gen = K.zeta() if K.N % 2 == 0 else -K.zeta()
    return [gen ** j for j in range(M) if igcd(j, M) == M // b and g(gen ** j) == 0]


RATIONAL_ROOT_LIMIT = 10 ** 8


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(p: Poly) -> list[Fraction]:
    """Nonzero rational roots of a Q-polynomial (empty when its coefficients are too large to search)."""
    c = [to_fraction(x) for x in p.c]
    while c and c[0] == 0:
        c.pop(0)
    if len(c) < 2:
        return []
    den = 1
    for x in c:
        den = den * x.denominator // igcd(den, x.denominator)
    a = [int(x * den) for x in c]
    if abs(a[0]) > RATIONAL_ROOT_LIMIT or abs(a[-1]) > RATIONAL_ROOT_LIMIT:
        return []
    q = Poly(c)
    out = []
    for num in _divisors(abs(a[0])):
        for d in _divisors(abs(a[-1])):
            if igcd(num, d) != 1:
                continue
            for r in (Fraction(num, d), Fraction(-num, d)):
                if q(r) == 0:
                    out.append(r)
    return sorted(out)


def classify_point(p: PointClass, k: int) -> Classification:
    if p.kind == ZERO_KIND:
        return Classification(True)
    if p.order is not None:
        b = p.order
        if igcd(b, k) > 1:
            return Classification(True)
        return Classification(False, (b, multiplicative_order(k, b)))
    return Classification(False)


def is_anxious(p: PointClass, k: int) -> bool:
    return classify_point(p, k).anxious


def orbit_step(p: PointClass, k: int) -> PointClass:
    """The class of beta^k for beta in p."""
    if p.kind == ZERO_KIND:
        return p
    img = squarefree_part(power_image(p.poly, k))
    if p.order is not None:
        return PointClass.unity(p.order // igcd(p.order, k), img)
    if img.deg == 1:
        return PointClass(ELEMENT, img, None)
    return PointClass(ALGEBRAIC, img, None)


# support sets ---------------------------------------------------------


@dataclass
class SupportSet:
    coeffs: list
    classes: list[PointClass]
    mult: dict = field(default_factory=dict)  # (class index, coeff index) -> (zero mult, pole mult)

    def valuation(self, ci: int, i: int):
        if self.coeffs[i].is_zero():
            return inf
        z, p = self.mult.get((ci, i), (0, 0))
        return z - p

    def pole_classes(self) -> list[PointClass]:
        return [
            c
            for ci, c in enumerate(self.classes)
            if any(self.mult.get((ci, i), (0, 0))[1] > 0 for i in range(len(self.coeffs)))
        ]

    def anxious_pole_classes(self, k: int) -> list[PointClass]:
        return [c for c in self.pole_classes() if is_anxious(c, k)]

    def anxious_flags(self, k: int) -> list[bool]:
        return [is_anxious(c, k) for c in self.classes]

    def polys(self) -> list[Poly]:
        return [c.poly for c in self.classes]


def support_set(coeffs) -> SupportSet:
    return _support_set(tuple(RatFun.coerce(c) for c in coeffs))


@lru_cache(maxsize=256)
def _support_set(coeffs: tuple) -> SupportSet:
    coeffs = list(coeffs)
    if not coeffs or all(c.is_zero() for c in coeffs):
        raise AllCoefficientsZero("support of an all-zero coefficient list")
    polys = []
    for c in coeffs:
        if c.is_zero():
            continue
        for p in (c.num, c.den):
            if p.deg > 0:
                polys.append(p)
    classes = []
    for b in coprime_basis(polys):
        classes.extend(split_classes(b))
    classes.sort(key=lambda c: poly_sort_key(c.poly))
    mult = {}
    for ci, cl in enumerate(classes):
        for i, c in enumerate(coeffs):
            if c.is_zero():
                continue
            # classes split a coprime basis of these very polys, so no cofactor check
            zm = multiplicity(cl.poly, c.num, check=False)
            pm = multiplicity(cl.poly, c.den, check=False)
            if zm or pm:
                mult[(ci, i)] = (zm, pm)
    return SupportSet(coeffs, classes, mult)


# modulus bounds -------------------------------------------------------


def norm_poly(p: Poly) -> Poly:
    """A Q-polynomial whose roots include every root of p (product of conjugates)."""
    K = _poly_field(p)
    if K.is_rational:
        return Poly([to_fraction(x) for x in p.c])
    acc = ONE
    for a in K.galois_exponents():
        acc = acc * p.map_coeffs(lambda x: x.conjugate(a) if isinstance(x, CycloElem) else x)
    return Poly([to_fraction(x) for x in acc.c])


def _cauchy_upper(abs_coeffs, iters: int = 24) -> Fraction:
    """Rational upper bound on the positive root of |a_n| x^n - sum |a_i| x^i."""
    an = abs_coeffs[-1]
    lower = abs_coeffs[:-1]
    if not any(lower):
        return Fraction(0)

    signed = [-a for a in lower] + [an]

    def q(x):
        acc = Fraction(0)
        for a in reversed(signed):
            acc = acc * x + a
        return acc

    hi = 1 + max(a / an for a in lower)
    lo = Fraction(0)
    for _ in range(iters):
        mid = (lo + hi) / 2
        # keep denominators short: snap to a dyadic grid
        mid = Fraction(round(mid * 2 ** 20), 2 ** 20)
        if mid <= lo or mid >= hi:
            break
        if q(mid) >= 0:
            hi = mid
        else:
            lo = mid
    return hi


@lru_cache(maxsize=4096)
def root_modulus_bounds(p: Poly) -> tuple[Fraction, Fraction]:
    """(lo, hi) with lo <= |beta| <= hi for every root beta of p."""
    q = norm_poly(p.monic())
    if q.deg <= 0:
        return Fraction(0), Fraction(0)
    if q.deg == 1:
        r = abs(-q.c[0] / q.c[1])
        return r, r
    if q.c[0] == 0:
        lo = Fraction(0)
    else:
        rev = [abs(x) for x in reversed(q.c)]
        up = _cauchy_upper(rev)
        lo = 1 / up if up else Fraction(0)
    hi = _cauchy_upper([abs(x) for x in q.c])
    return lo, hi


def _coeff_bits(p: Poly) -> int:
    bits = 0
    for x in p.c:
        if isinstance(x, CycloElem):
            for y in x.coords:
                bits = max(bits, y.numerator.bit_length(), y.denominator.bit_length())
        else:
            x = Fraction(x)
            bits = max(bits, x.numerator.bit_length(), x.denominator.bit_length())
    return bits


HEIGHT_CERTIFIED = "HeightCertified"
CAP_REACHED = "CapReached"
SPLIT = "Split"
MAX_COEFF_BITS = 50_000


@dataclass
class OrbitHorizon:
    steps: list[PointClass]
    T: int
    guarantee: str

    @property
    def certified(self) -> bool:
        return self.guarantee == HEIGHT_CERTIFIED


def _meets(cls: PointClass, support_polys) -> bool:
    return any(gcd(cls.poly, b).deg > 0 for b in support_polys)


def _splits(cls: PointClass, polys) -> bool:
    return any(0 < gcd(cls.poly, b).deg < cls.poly.deg for b in polys)


def orbit_horizon(
    start: PointClass, support: SupportSet, k: int, n: int = 1, cap: int = 64, stop_on_split: bool = False
) -> OrbitHorizon:
    """Orbit classes of a non-unity start until no later class can meet the support.

    With ``stop_on_split`` the walk ends early (guarantee SPLIT) at the first
    class that meets a support poly only partially; the caller splits the start.
    """
    polys = [c.poly for c in support.classes if c.kind != ZERO_KIND]
    bounds = [root_modulus_bounds(p) for p in polys]
    sup_hi = max((b[1] for b in bounds), default=Fraction(0))
    sup_lo = min((b[0] for b in bounds), default=None)
    steps = [start]
    last_hit = -1
    guarantee = CAP_REACHED
    t = 0
    while True:
        cls = steps[t]
        if stop_on_split and _splits(cls, polys):
            return OrbitHorizon(steps, len(steps), SPLIT)
        if _meets(cls, polys):
            last_hit = t
        else:
            lo, hi = root_modulus_bounds(cls.poly)
            if lo > 1 and lo > sup_hi:
                guarantee = HEIGHT_CERTIFIED
                break
            if hi < 1 and (sup_lo is None or hi < sup_lo):
                guarantee = HEIGHT_CERTIFIED
                break
        if t + 1 >= cap or _coeff_bits(cls.poly) > MAX_COEFF_BITS:
            break
        steps.append(orbit_step(cls, k))
        t += 1
    T = last_hit + 1 if guarantee == HEIGHT_CERTIFIED else len(steps)
    while len(steps) < T + n:
        steps.append(orbit_step(steps[-1], k))
    return OrbitHorizon(steps, T, guarantee)


# uniform orbit pieces ---------------------------------------------------


@dataclass
class Orbit:
    """Orbit of a class along which every support valuation is uniform.

    For root-of-unity classes ``steps`` is one full period of classes; for
    other classes it runs through the horizon window.
    """

    start: PointClass
    steps: list[PointClass]
    period: int | None = None
    horizon: OrbitHorizon | None = None


def _unity_period_steps(start: PointClass, k: int) -> list[PointClass]:
    steps = [start]
    while True:
        nxt = orbit_step(steps[-1], k)
        if nxt.poly == start.poly:
            return steps
        steps.append(nxt)


def _find_split(steps, polys):
    for t, cls in enumerate(steps):
        for b in polys:
            g = gcd(cls.poly, b)
            if 0 < g.deg < cls.poly.deg:
                return t, g
    return None


def _pull_back(steps, t: int, g: Poly, k: int) -> Poly:
    p = g
    for s in range(t - 1, -1, -1):
        p = gcd(steps[s].poly, p.compose_power(k))
    return p


def _reclass(p: Poly, like: PointClass) -> PointClass:
    if like.order is not None:
        return PointClass.unity(like.order, p)
    if p.deg == 1:
        return PointClass(ELEMENT, p.monic(), None)
    return PointClass(ALGEBRAIC, p.monic(), None)


def uniform_orbits(start: PointClass, support: SupportSet, k: int, n: int = 1, cap: int = 64) -> list[Orbit]:
    """Split ``start`` until each piece sees uniform valuations along its orbit."""
    polys = support.polys()
    work = [start]
    done = []
    while work:
        cls = work.pop()
        if cls.order is not None:
            steps = _unity_period_steps(cls, k)
            hz = None
        else:
            hz = orbit_horizon(cls, support, k, n, cap, stop_on_split=True)
            steps = hz.steps
        split = _find_split(steps, polys)
        if split is None:
            done.append(Orbit(cls, steps, len(steps) if cls.order is not None else None, hz))
            continue
        t, g = split
        piece = _pull_back(steps, t, g, k).monic()
        rest = cls.poly.exact_div(piece).monic()
        work.append(_reclass(rest, cls))
        work.append(_reclass(piece, cls))
    done.sort(key=lambda o: poly_sort_key(o.start.poly))
    return done


def orbit_valuations(orbit: Orbit, coeffs) -> list[list]:
    """table[t][a-1] = v at orbit class t of coefficient a."""
    return [[valuation_at_class(c, s.poly) for c in coeffs] for s in orbit.steps]
