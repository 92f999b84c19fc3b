"""Exact arithmetic in the cyclotomic field Q(zeta_N).

For N in {1, 2} the field is Q and elements are plain ``Fraction`` objects.
Otherwise elements are :class:`CycloElem`, a coordinate vector over the power
basis 1, zeta, ..., zeta^(phi(N)-1) reduced modulo the N-th cyclotomic
polynomial.  Both kinds mix freely with ints and Fractions.
"""
from __future__ import annotations

import math

from fractions import Fraction
from functools import lru_cache
from math import gcd


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = Fraction(a[-1]) / lb
        q[shift] = f
        for i, y in enumerate(b):
            a[shift + i] -= f * y
        a = _trim(a)
    return _trim(q), a


def _mobius(n: int) -> int:
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first.

    Phi_n is the product of (z^d - 1)^mu(n/d) over d | n.
    """
    a = [1]
    ds = divisors(n)
    for d in ds:
        if _mobius(n // d) == 1:
            out = [0] * (len(a) + d)
            for i, x in enumerate(a):
                out[i] -= x
                out[i + d] += x
            a = out
    for d in ds:
        if _mobius(n // d) == -1:
            q = [0] * (len(a) - d)
            for j in range(len(q)):
                q[j] = -a[j] + (q[j - d] if j >= d else 0)
            a = q
    return tuple(a)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    out, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


@lru_cache(maxsize=None)
def orders_with_phi_at_most(D: int) -> tuple:
    """All b >= 1 with phi(b) <= D.

    Uses phi(n) > n / (e^gamma log log n + 3 / log log n) for n >= 3; the
    right side is increasing there, so the scan can stop once it exceeds D.
    """
    def lower(n):
        ll = math.log(math.log(n))
        return n / (1.7810724179901979 * ll + 3 / ll)

    B = 3
    while lower(B) <= D:
        B *= 2
    return tuple(b for b in range(1, B + 1) if euler_phi(b) <= D)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def multiplicative_order(k: int, b: int) -> int:
    """Smallest m >= 1 with k^m = 1 mod b (gcd(k, b) must be 1)."""
    if b == 1:
        return 1
    m, x = 1, k % b
    while x != 1:
        x = (x * k) % b
        m += 1
    return m


def _normalized(field, num, den):
    """CycloElem from integer numerators over a positive denominator."""
    g = gcd(*num, den)
    if g != 1:
        num = tuple(x // g for x in num)
        den //= g
    e = CycloElem.__new__(CycloElem)
    e.field, e.num, e.den = field, num, den
    return e


class CycloElem:
    """Element sum num[i] zeta^i / den with gcd(num, den) = 1 and den > 0."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: "Cyclotomic", coords):
        coords = [Fraction(c) for c in coords]
        den = 1
        for x in coords:
            q = x.denominator
            if q != 1:
                den = den * q // gcd(den, q)
        num = tuple(x.numerator * (den // x.denominator) for x in coords)
        g = gcd(*num, den)
        self.field = field
        self.num = tuple(x // g for x in num) if g != 1 else num
        self.den = den // g

    @property
    def coords(self) -> tuple:
        d = self.den
        return tuple(Fraction(x, d) for x in self.num)

    # coercion helpers -------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CycloElem):
            if other.field.N != self.field.N:
                raise TypeError("elements of different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.embed(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return _normalized(self.field, tuple(a + b for a, b in zip(self.num, o.num)), self.den)
        da, db = self.den, o.den
        return _normalized(self.field, tuple(a * db + b * da for a, b in zip(self.num, o.num)), da * db)

    __radd__ = __add__

    def __neg__(self):
        e = CycloElem.__new__(CycloElem)
        e.field, e.num, e.den = self.field, tuple(-a for a in self.num), self.den
        return e

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return _normalized(self.field, tuple(a * other for a in self.num), self.den)
        if isinstance(other, Fraction):
            return _normalized(self.field, tuple(a * other.numerator for a in self.num), self.den * other.denominator)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.field._mul(self, o)

    __rmul__ = __mul__

    def inverse(self):
        return self.field._inv_cached(self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta)")
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CycloElem):
            return self.field.N == other.field.N and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return not any(self.num[1:]) and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if not any(self.num[1:]):
            return hash(Fraction(self.num[0], self.den))
        return hash((self.field.N, self.num, self.den))

    def __bool__(self):
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def conjugate(self, a: int) -> "CycloElem":
        """Image under the automorphism zeta -> zeta^a."""
        F = self.field
        out = [Fraction(0)] * F.degree
        for i, c in enumerate(self.coords):
            if c:
                r = F._power_coords((i * a) % F.N)
                for j, x in enumerate(r):
                    out[j] += c * x
        return CycloElem(F, out)

    def __repr__(self):
        return f"CycloElem(N={self.field.N}, {format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


class Cyclotomic:
    """The field Q(zeta_N); N = 1 is Q."""

    _cache: dict = {}

    def __new__(cls, N: int = 1):
        if N < 1:
            raise ValueError("cyclotomic order must be >= 1")
        if N in cls._cache:
            return cls._cache[N]
        self = super().__new__(cls)
        self.N = N
        self.modulus = list(cyclotomic_coeffs(N))
        self.degree = len(self.modulus) - 1
        self._pow_table: dict = {}
        self._inv_table: dict = {}
        cls._cache[N] = self
        return self

    def __reduce__(self):
        return (Cyclotomic, (self.N,))

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def zero(self):
        return Fraction(0) if self.is_rational else CycloElem(self, [Fraction(0)] * self.degree)

    @property
    def one(self):
        return self.embed(1)

    def embed(self, x):
        if isinstance(x, CycloElem):
            if x.field.N != self.N:
                raise TypeError("element of a different cyclotomic field")
            return x
        x = Fraction(x)
        if self.is_rational:
            return x
        e = CycloElem.__new__(CycloElem)
        e.field, e.num, e.den = self, (x.numerator,) + (0,) * (self.degree - 1), x.denominator
        return e

    __call__ = embed

    def from_coords(self, coords):
        coords = [Fraction(c) for c in coords]
        if len(coords) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(coords)}")
        if self.is_rational:
            return coords[0]
        return CycloElem(self, coords)

    def coords(self, x) -> list[Fraction]:
        x = self.embed(x)
        if self.is_rational:
            return [x]
        return list(x.coords)

    def zeta(self):
        if self.N == 1:
            return Fraction(1)
        if self.N == 2:
            return Fraction(-1)
        return CycloElem(self, self._power_coords(1))

    def _power_coords(self, e: int) -> tuple:
        e %= self.N
        t = self._pow_table.get(e)
        if t is None:
            mono = [0] * e + [1]
            _, r = _pdivmod(mono, self.modulus)
            r = [Fraction(x) for x in r] + [Fraction(0)] * (self.degree - len(r))
            t = tuple(r)
            self._pow_table[e] = t
        return t

    def _mul(self, a: CycloElem, b: CycloElem) -> CycloElem:
        # Phi_N is monic with integer coefficients, so reduction stays integral
        if not any(b.num[1:]):
            return _normalized(self, tuple(x * b.num[0] for x in a.num), a.den * b.den)
        if not any(a.num[1:]):
            return _normalized(self, tuple(a.num[0] * y for y in b.num), a.den * b.den)
        n = self.degree
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        prod[i + j] += x * y
        out = prod[:n]
        for e in range(n, len(prod)):
            c = prod[e]
            if c:
                for j, y in enumerate(self._int_power_coords(e)):
                    if y:
                        out[j] += c * y
        return _normalized(self, tuple(out), a.den * b.den)

    def _int_power_coords(self, e: int) -> tuple:
        t = self._pow_table.get(("int", e))
        if t is None:
            t = tuple(int(x) for x in self._power_coords(e))
            self._pow_table[("int", e)] = t
        return t

    def _inv_cached(self, x: CycloElem) -> CycloElem:
        key = (x.num, x.den)
        r = self._inv_table.get(key)
        if r is None:
            r = self._inv(x.coords)
            if len(self._inv_table) < 100_000:
                self._inv_table[key] = r
        return r

    def _inv(self, a):
        # extended Euclid of a(x) against Phi_N(x)
        r0, r1 = list(self.modulus), _trim(a)
        if not r1:
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _trim(_sub(s0, _pmul(q, s1)))
        c = Fraction(r1[0])
        inv = [x / c for x in s1]
        inv += [Fraction(0)] * (self.degree - len(inv))
        return CycloElem(self, inv[: self.degree])

    @property
    def unity_order(self) -> int:
        """M such that the roots of unity in the field are exactly mu_M."""
        return self.N if self.N % 2 == 0 else 2 * self.N

    def root_of_unity_order(self, x) -> int | None:
        """Exact multiplicative order of x if it is a root of unity, else None."""
        if x == 0:
            return None
        M = self.unity_order
        if not (x ** M == 1):
            return None
        for d in divisors(M):
            if x ** d == 1:
                return d
        return None  # pragma: no cover

    def galois_exponents(self) -> list[int]:
        if self.is_rational:
            return [1]
        return [a for a in range(1, self.N) if gcd(a, self.N) == 1]

    def conjugates(self, x) -> list:
        x = self.embed(x)
        if self.is_rational:
            return [x]
        return [x.conjugate(a) for a in self.galois_exponents()]

    def __repr__(self):
        return "QQ" if self.N == 1 else f"QQ(zeta_{self.N})"


def _sub(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return out


QQ = Cyclotomic(1)


def field_of(*xs) -> Cyclotomic:
    """The smallest field among our representations containing all xs."""
    for x in xs:
        if isinstance(x, CycloElem):
            return x.field
    return QQ


def is_rational(x) -> bool:
    return not isinstance(x, CycloElem) or x.is_rational()


def to_fraction(x) -> Fraction:
    if isinstance(x, CycloElem):
        if not x.is_rational():
            raise ValueError("element is not rational")
        return x.coords[0]
    return Fraction(x)


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    if not isinstance(x, CycloElem):
        return format_fraction(x)
    parts = []
    for i, c in enumerate(x.coords):
        if not c:
            continue
        mono = "" if i == 0 else ("zeta" if i == 1 else f"zeta^{i}")
        if not mono:
            parts.append(format_fraction(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{format_fraction(c)}*{mono}")
    if not parts:
        return "0"
    s = "+".join(parts).replace("+-", "-")
    return s if len(parts) == 1 else f"({s})"
