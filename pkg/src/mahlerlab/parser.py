"""Parser for equations such as ``f(z) = (1+z)*f(z^2) - z*f(z^4)``.

Both sides are parsed into linear combinations of f(z^E) with rational
function coefficients; the result is normalized to f(z) = sum c_i f(z^{k^i}).
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import FieldMismatch, ParseError, RadixInconsistent
from .field import Cyclotomic
from .operators import MahlerEquation
from .poly import Poly, RatFun

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|(zeta|z|f)|(\*\*|[-+*/^()=]))")

# Linear combinations: {exponent E: coefficient of f(z^E)}, with key 0 for the f-free part.


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastindex)
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num, start))
        elif name is not None:
            out.append(("name", name, start))
        else:
            out.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, K: Cyclotomic):
        self.toks = _tokenize(text)
        self.i = 0
        self.K = K

    # token helpers
    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, value) -> bool:
        kind, val, _ = self.peek()
        if kind in ("op", "name") and val == value:
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            kind, val, pos = self.peek()
            raise ParseError(f"expected {value!r}, found {val if val is not None else 'end of input'!r}", pos)

    # grammar
    def equation(self):
        lhs = self.expr()
        self.expect("=")
        rhs = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return _sub(lhs, rhs)

    def expr(self):
        if self.accept("-"):
            acc = _neg(self.term())
        else:
            self.accept("+")
            acc = self.term()
        while True:
            if self.accept("+"):
                acc = _add(acc, self.term())
            elif self.accept("-"):
                acc = _sub(acc, self.term())
            else:
                return acc

    def term(self):
        acc = self.unary()
        while True:
            pos = self.peek()[2]
            if self.accept("*"):
                acc = _mul(acc, self.unary(), pos)
            elif self.accept("/"):
                acc = _div(acc, self.unary(), pos)
            else:
                return acc

    def unary(self):
        if self.accept("-"):
            return _neg(self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        pos = self.peek()[2]
        if self.accept("^"):
            e = self.int_exponent()
            if set(base) != {0}:
                raise ParseError("only f-free factors can be raised to a power", pos)
            return {0: base[0] ** e}
        return base

    def int_exponent(self) -> int:
        if self.accept("("):
            e = self.int_exponent()
            self.expect(")")
            return e
        sign = -1 if self.accept("-") else 1
        kind, val, pos = self.take()
        if kind != "num" or "." in val:
            raise ParseError("expected an integer exponent", pos)
        return sign * int(val)

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return {0: RatFun(Poly.const(self.K.embed(Fraction(val))))}
        if kind == "name" and val == "z":
            return {0: RatFun(Poly([self.K.zero, self.K.one]))}
        if kind == "name" and val == "zeta":
            if self.K.N == 1:
                raise FieldMismatch("zeta used but the field is Q; pass --field-zeta N")
            return {0: RatFun(Poly.const(self.K.zeta()))}
        if kind == "name" and val == "f":
            return {self.f_argument(): RatFun(Poly.const(self.K.one))}
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val if val is not None else 'end of input'!r}", pos)

    def f_argument(self) -> int:
        self.expect("(")
        kind, val, pos = self.take()
        if kind != "name" or val != "z":
            raise ParseError("f must be applied to z or a power of z", pos)
        E = 1
        if self.accept("^"):
            E = self.int_exponent()
            if E < 1:
                raise ParseError("f(z^E) needs a positive exponent", pos)
        self.expect(")")
        return E


def _add(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out[e] + c if e in out else c
    return {e: c for e, c in out.items() if not c.is_zero()} or {0: RatFun(Poly())}


def _neg(a):
    return {e: -c for e, c in a.items()}


def _sub(a, b):
    return _add(a, _neg(b))


def _mul(a, b, pos):
    if set(a) <= {0}:
        s, other = a.get(0, RatFun(Poly())), b
    elif set(b) <= {0}:
        s, other = b.get(0, RatFun(Poly())), a
    else:
        raise ParseError("product of two f-terms is not linear", pos)
    return {e: c * s for e, c in other.items() if not (c * s).is_zero()} or {0: RatFun(Poly())}


def _div(a, b, pos):
    if set(b) != {0}:
        raise ParseError("cannot divide by an f-term", pos)
    if b[0].is_zero():
        raise ParseError("division by zero", pos)
    return {e: c / b[0] for e, c in a.items()}


def _is_power(E: int, k: int) -> int | None:
    i = 0
    while E % k == 0 and E > 1:
        E //= k
        i += 1
    return i if E == 1 and i >= 1 else None


def infer_radix(exponents) -> int | None:
    exps = sorted(set(exponents))
    if not exps:
        return None
    for k in range(exps[0], 1, -1):
        if all(_is_power(E, k) is not None for E in exps):
            return k
    return None


def parse_equation(text: str, field_zeta: int = 1, k: int | None = None) -> MahlerEquation:
    K = Cyclotomic(field_zeta)
    comb = _Parser(text, K).equation()
    if 0 in comb and not comb[0].is_zero():
        raise ParseError("the equation has a term without f")
    comb.pop(0, None)
    if 1 not in comb:
        raise ParseError("the equation does not involve f(z)")
    lead = comb.pop(1)
    others = {E: -c / lead for E, c in comb.items()}
    if not others:
        raise ParseError("the equation has no f(z^E) term with E > 1")
    inferred = infer_radix(others)
    if k is None:
        if inferred is None:
            raise RadixInconsistent(f"exponents {sorted(others)} are not powers of one radix")
        k = inferred
    bad = [E for E in others if _is_power(E, k) is None]
    if bad:
        raise RadixInconsistent(f"exponents {bad} are not powers of k={k}")
    n = max(_is_power(E, k) for E in others)
    coeffs = [RatFun(Poly())] * n
    for E, c in others.items():
        coeffs[_is_power(E, k) - 1] = c
    return MahlerEquation(k, coeffs)
