"""Dense univariate polynomials and reduced rational functions over Q(zeta_N).

Coefficients are stored lowest degree first.  Scalars are whatever
:mod:`mahlerlab.field` hands out (``Fraction`` or ``CycloElem``); mixing
them with ints works everywhere.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd as gcd_int
from math import inf

from .errors import (
    ModuliNotCoprime,
    NonUniformClass,
    TargetHasPole,
    ZeroDenominator,
    ZeroInput,
)
from .field import format_scalar
from .modgcd import modular_gcd, to_primitive_ints


def _scalar(x):
    return Fraction(x) if isinstance(x, int) else x


class Poly:
    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [_scalar(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, x) -> "Poly":
        return cls([x])

    @classmethod
    def z(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, d: int, x=1) -> "Poly":
        return cls([0] * d + [x])

    @classmethod
    def linear(cls, root) -> "Poly":
        """z - root."""
        return cls([-root, 1])

    @staticmethod
    def coerce(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return Poly([x])

    # basic properties -------------------------------------------------
    @property
    def deg(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1] if self.c else Fraction(0)

    def __bool__(self):
        return bool(self.c)

    def is_zero(self) -> bool:
        return not self.c

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def is_one(self) -> bool:
        return len(self.c) == 1 and self.c[0] == 1

    def __getitem__(self, i: int):
        return self.c[i] if 0 <= i < len(self.c) else Fraction(0)

    def __len__(self):
        return len(self.c)

    def __iter__(self):
        return iter(self.c)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self == Poly([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def order(self) -> int:
        """Lowest degree with a nonzero coefficient (z-adic valuation)."""
        for i, x in enumerate(self.c):
            if x != 0:
                return i
        return inf

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, RatFun):
            return NotImplemented
        o = Poly.coerce(other).c
        a = self.c
        if len(a) < len(o):
            a, o = o, a
        out = list(a)
        for i, x in enumerate(o):
            out[i] = out[i] + x
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-x for x in self.c])

    def __sub__(self, other):
        if isinstance(other, RatFun):
            return NotImplemented
        return self + (-Poly.coerce(other))

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RatFun):
            return NotImplemented
        if not isinstance(other, Poly):
            if other == 0:
                return Poly()
            return Poly([x * other for x in self.c])
        a, b = self.c, other.c
        if not a or not b:
            return Poly()
        if len(a) < len(b):
            a, b = b, a
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        bnz = [(j, y) for j, y in enumerate(b) if y != 0]
        for i, x in enumerate(a):
            if x != 0:
                for j, y in bnz:
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        b = Poly.coerce(other)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.c)
        db = b.deg
        if len(a) - 1 < db:
            return Poly(), self
        inv_lc = 1 / b.lc
        q = [Fraction(0)] * (len(a) - db)
        bc = b.c
        for shift in range(len(a) - 1 - db, -1, -1):
            f = a[shift + db]
            if f == 0:
                continue
            f = f * inv_lc
            q[shift] = f
            for i in range(db + 1):
                if bc[i] != 0:
                    a[shift + i] = a[shift + i] - f * bc[i]
        return Poly(q), Poly(a[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides(self, other: "Poly") -> bool:
        return not (other % self)

    # transformations --------------------------------------------------
    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = self.lc
        if lc == 1:
            return self
        inv = 1 / lc
        return Poly([x * inv for x in self.c])

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.c):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([i * x for i, x in enumerate(self.c)][1:])

    def compose_power(self, K: int) -> "Poly":
        """p(z^K)."""
        if K == 1 or self.deg <= 0:
            return self
        out = [Fraction(0)] * (self.deg * K + 1)
        for i, x in enumerate(self.c):
            out[i * K] = x
        return Poly(out)

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.c):
            acc = acc * other + c
        return acc

    def shift(self, d: int) -> "Poly":
        """z^d * p for d >= 0."""
        return Poly([0] * d + list(self.c)) if self.c else self

    def reverse(self) -> "Poly":
        return Poly(list(reversed(self.c)))

    def map_coeffs(self, f) -> "Poly":
        return Poly([f(x) for x in self.c])

    def truncate(self, n: int) -> "Poly":
        return Poly(self.c[:n])

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


ONE = Poly([1])
ZERO = Poly()
Z = Poly.z()


def format_poly(p: Poly, var: str = "z") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for i in range(p.deg, -1, -1):
        c = p.c[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        s = format_scalar(c)
        if mono:
            if c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{s}*{mono}"
        terms.append(s)
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


# gcd machinery --------------------------------------------------------


MODULAR_GCD_DEGREE = 8
MODULAR_GCD_BITS = 256


def _height_bits(p: Poly) -> int:
    return max(x.numerator.bit_length() + x.denominator.bit_length() for x in p.c)


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0.

    Rational inputs of moderate degree or large height go through the
    multi-modular gcd; everything else uses Euclid with monic remainders.
    """
    if (
        a.deg >= 1
        and b.deg >= 1
        and all(isinstance(x, Fraction) for x in a.c)
        and all(isinstance(x, Fraction) for x in b.c)
        and (max(a.deg, b.deg) >= MODULAR_GCD_DEGREE or max(_height_bits(a), _height_bits(b)) > MODULAR_GCD_BITS)
    ):
        g = modular_gcd(to_primitive_ints(a.c), to_primitive_ints(b.c))
        if g is not None:
            return Poly([Fraction(x) for x in g]).monic()
    a, b = a.monic(), b.monic()
    while b:
        a, b = b, (a % b).monic()
    return a


def xgcd(a: Poly, b: Poly):
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return ZERO
    return (a * b).exact_div(gcd(a, b)).monic()


def inverse_mod(a: Poly, m: Poly) -> Poly:
    g, s, _ = xgcd(a % m, m)
    if g.deg != 0:
        raise ZeroDivisionError("not invertible modulo m")
    return s % m


def squarefree_part(p: Poly) -> Poly:
    if p.deg <= 0:
        return ONE
    return p.exact_div(gcd(p, p.derivative())).monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: [(a_i, i)] with p = lc * prod a_i^i, a_i squarefree coprime."""
    out = []
    if p.deg <= 0:
        return out
    p = p.monic()
    dp = p.derivative()
    a = gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative()
    i = 1
    while b.deg > 0:
        a = gcd(b, d)
        if a.deg > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def multiplicity(f: Poly, p: Poly, check: bool = True) -> int:
    """Largest e with f^e | p, requiring the cofactor to be coprime to f.

    ``check=False`` skips the coprimality test when f is known to come from a
    coprime basis of p's factors.
    """
    if p.is_zero():
        return inf
    e = 0
    while True:
        q, r = divmod(p, f)
        if r:
            break
        p = q
        e += 1
    # gcd(p, f) = gcd(f, p mod f); a linear f with nonzero remainder is coprime
    if check and f.deg > 1 and gcd(f, r).deg > 0:
        raise NonUniformClass(f"class {f} splits a factor of {p}")
    return e


def coprime_basis(polys) -> list[Poly]:
    """Pairwise coprime monic squarefree polys generating every input multiplicatively."""
    work = []
    for p in polys:
        if p.is_zero():
            raise ZeroInput("coprime_basis input must be nonzero")
        for a, _ in squarefree_decomposition(p):
            work.append(a)
    basis: list[Poly] = []
    for p in work:
        pending = [p]
        while pending:
            q = pending.pop()
            if q.deg <= 0:
                continue
            for idx, b in enumerate(basis):
                g = gcd(q, b)
                if g.deg > 0:
                    del basis[idx]
                    for piece in (g, b.exact_div(g).monic(), q.exact_div(g).monic()):
                        if piece.deg > 0:
                            pending.append(piece)
                    break
            else:
                basis.append(q.monic())
    basis.sort(key=poly_sort_key)
    return basis


def poly_sort_key(p: Poly):
    return (p.deg, [str(x) for x in p.c])


# power sums / k-th power image ----------------------------------------


def power_sums(p: Poly, count: int) -> list:
    """[p_1, ..., p_count] for the roots of p (with multiplicity)."""
    p = p.monic()
    d = p.deg
    a = p.c  # a[d] = 1
    ps = []
    for j in range(1, count + 1):
        s = Fraction(0)
        if j <= d:
            s = j * a[d - j]
            for i in range(1, j):
                s = s + a[d - i] * ps[j - i - 1]
        else:
            for i in range(1, d + 1):
                s = s + a[d - i] * ps[j - i - 1]
        ps.append(-s)
    return ps


def from_power_sums(ps, d: int) -> Poly:
    """Monic degree-d polynomial whose roots have the given power sums."""
    a = [Fraction(0)] * (d + 1)
    a[d] = Fraction(1)
    for j in range(1, d + 1):
        s = ps[j - 1]
        for i in range(1, j):
            s = s + a[d - i] * ps[j - i - 1]
        a[d - j] = -s / j
    return Poly(a)


def _int_power_image(p: Poly, k: int) -> Poly:
    """power_image for rational p: Newton's identities over Z after scaling.

    With D clearing the denominators of the monic p, the roots D*beta are
    algebraic integers, so every power sum and symmetric function is an integer.
    """
    p = p.monic()
    d = p.deg
    D = 1
    for x in p.c:
        D = D * x.denominator // gcd_int(D, x.denominator)
    a = [int(p.c[i] * D ** (d - i)) for i in range(d + 1)]
    ps = []
    for j in range(1, d * k + 1):
        s = j * a[d - j] if j <= d else 0
        for i in range(1, min(j - 1, d) + 1):
            s += a[d - i] * ps[j - i - 1]
        ps.append(-s)
    sub = [ps[j * k - 1] for j in range(1, d + 1)]
    b = [0] * (d + 1)
    b[d] = 1
    for j in range(1, d + 1):
        s = sub[j - 1]
        for i in range(1, j):
            s += b[d - i] * sub[j - i - 1]
        b[d - j] = -s // j
    # roots (D beta)^k; undo the scaling by D^k
    Dk = D ** k
    return Poly([Fraction(b[i], Dk ** (d - i)) for i in range(d + 1)])


def power_image(p: Poly, k: int) -> Poly:
    """Monic prod (z - beta^k) over the roots beta of p, with multiplicity."""
    d = p.deg
    if d <= 0:
        return ONE
    if d == 1:
        p = p.monic()
        return Poly([-((-p.c[0]) ** k), 1])
    if all(isinstance(x, (int, Fraction)) for x in p.c):
        return _int_power_image(p, k)
    ps = power_sums(p, d * k)
    return from_power_sums([ps[j * k - 1] for j in range(1, d + 1)], d)


# rational functions ---------------------------------------------------


class RatFun:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        num = Poly.coerce(num)
        den = ONE if den is None else Poly.coerce(den)
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = ONE
            elif den.deg > 0:
                g = gcd(num, den)
                if g.deg > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lc
            if lc != 1:
                inv = 1 / lc
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @staticmethod
    def coerce(x) -> "RatFun":
        if isinstance(x, RatFun):
            return x
        return RatFun(Poly.coerce(x), ONE, _reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.deg == 0

    def __eq__(self, other):
        if isinstance(other, (RatFun, Poly, int, Fraction)):
            o = RatFun.coerce(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = RatFun.coerce(other)
        if self.den.is_one() and o.den.is_one():
            return RatFun(self.num + o.num, ONE, _reduced=True)
        if self.den == o.den:
            return RatFun(self.num + o.num, self.den)
        g = gcd(self.den, o.den)
        if g.is_one():
            return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)
        d1 = self.den.exact_div(g)
        d2 = o.den.exact_div(g)
        return RatFun(self.num * d2 + o.num * d1, d1 * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-RatFun.coerce(other))

    def __rsub__(self, other):
        return RatFun.coerce(other) - self

    def __mul__(self, other):
        o = RatFun.coerce(other)
        if self.is_zero() or o.is_zero():
            return RatFun(ZERO)
        if self.den.is_one() and o.den.is_one():
            return RatFun(self.num * o.num, ONE, _reduced=True)
        a, b, c, d = self.num, self.den, o.num, o.den
        g1 = gcd(a, d) if d.deg > 0 else ONE
        g2 = gcd(c, b) if b.deg > 0 else ONE
        if g1.deg > 0:
            a, d = a.exact_div(g1), d.exact_div(g1)
        if g2.deg > 0:
            c, b = c.exact_div(g2), b.exact_div(g2)
        num, den = a * c, b * d
        lc = den.lc
        if lc != 1:
            inv = 1 / lc
            num, den = num * inv, den * inv
        return RatFun(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if self.is_zero():
            raise ZeroDenominator("inverse of zero rational function")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        return self * RatFun.coerce(other).inverse()

    def __rtruediv__(self, other):
        return RatFun.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFun(self.num ** e, self.den ** e, _reduced=True)

    def compose_power(self, K: int) -> "RatFun":
        """c(z^K); stays reduced in characteristic zero."""
        return RatFun(self.num.compose_power(K), self.den.compose_power(K), _reduced=True)

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(x) / d

    def valuation_at(self, f: Poly):
        return valuation_at_class(self, f)

    def __repr__(self):
        return f"RatFun({format_ratfun(self)})"

    def __str__(self):
        return format_ratfun(self)


def format_ratfun(c: RatFun) -> str:
    if c.den.is_one():
        return format_poly(c.num)
    n = format_poly(c.num)
    if len(c.num) > 1 and sum(1 for x in c.num.c if x != 0) > 1:
        n = f"({n})"
    return f"{n}/({format_poly(c.den)})"


def ratfun_normalize(num: Poly, den: Poly) -> RatFun:
    return RatFun(num, den)


def valuation_at_class(c, f: Poly):
    """v_f(c): multiplicity of f in the numerator minus in the denominator."""
    c = RatFun.coerce(c)
    if c.is_zero():
        return inf
    return multiplicity(f, c.num) - multiplicity(f, c.den)


def local_expansion(c, f: Poly, count: int):
    """(w, digits): the first ``count`` f-adic digits of c starting at f^w."""
    c = RatFun.coerce(c)
    if c.is_zero():
        raise ZeroInput("local expansion of zero")
    if count < 1:
        raise ValueError("count must be positive")
    w = valuation_at_class(c, f)
    num, den = c.num, c.den
    if w > 0:
        num = num.exact_div(f ** w)
    elif w < 0:
        den = den.exact_div(f ** (-w))
    mod = f ** count
    u = (num * inverse_mod(den, mod)) % mod
    digits = []
    for _ in range(count):
        u, r = divmod(u, f)
        digits.append(r)
    return w, digits


def residue_mod(g, f: Poly, e: int) -> Poly:
    """g mod f^e for a rational g without pole at f."""
    g = RatFun.coerce(g)
    mod = f ** e
    if gcd(g.den, f).deg > 0:
        raise TargetHasPole(f"target has a pole at {f}")
    return (g.num * inverse_mod(g.den, mod)) % mod


def crt(residues) -> Poly:
    """Combine [(r_i, m_i)] into h with h = r_i mod m_i; moduli pairwise coprime."""
    h, M = ZERO, ONE
    for r, m in residues:
        if gcd(M, m).deg > 0:
            raise ModuliNotCoprime("CRT moduli are not coprime")
        # h' = h + M * t with M t = r - h mod m
        t = ((r - h) * inverse_mod(M, m)) % m
        h = h + M * t
        M = M * m
    return h % M if M.deg > 0 else h


def digit_match(targets) -> Poly:
    """h with v_{f_i}(h - g_i) >= e_i for all (f_i, e_i, g_i)."""
    fs = [Poly.coerce(t[0]) for t in targets]
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            if gcd(fs[i], fs[j]).deg > 0:
                raise ModuliNotCoprime("class polynomials are not coprime")
    res = [(residue_mod(g, f, e), f ** e) for f, e, g in targets]
    return crt(res)
