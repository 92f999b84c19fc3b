"""JSON encodings of scalars, polynomials, equations, point classes and verdicts."""
from __future__ import annotations

from fractions import Fraction
from math import inf

from .errors import FieldMismatch
from .field import CycloElem, Cyclotomic, format_fraction
from .operators import MahlerEquation
from .points import ALGEBRAIC, ELEMENT, UNITY, ZERO_KIND, PointClass
from .poly import Poly, RatFun, format_poly

SCHEMA = "mahler-lab/1"


def ext_int(x):
    if x == inf:
        return "inf"
    if x == -inf:
        return "-inf"
    return int(x)


def scalar_to_json(x, K: Cyclotomic):
    if K.is_rational:
        return format_fraction(Fraction(x) if not isinstance(x, CycloElem) else x.coords[0])
    return [format_fraction(c) for c in K.coords(x)]


def scalar_from_json(v, K: Cyclotomic):
    if isinstance(v, list):
        if K.is_rational:
            if len(v) != 1:
                raise FieldMismatch("coordinate vector given for the rational field")
            return Fraction(v[0])
        return K.from_coords([Fraction(c) for c in v])
    return K.embed(Fraction(v))


def poly_to_json(p: Poly, K: Cyclotomic) -> list:
    return [scalar_to_json(c, K) for c in p.c]


def poly_from_json(v, K: Cyclotomic) -> Poly:
    return Poly([scalar_from_json(c, K) for c in v])


def ratfun_to_json(c: RatFun, K: Cyclotomic) -> dict:
    return {"num": poly_to_json(c.num, K), "den": poly_to_json(c.den, K)}


def ratfun_from_json(v, K: Cyclotomic) -> RatFun:
    return RatFun(poly_from_json(v["num"], K), poly_from_json(v.get("den", ["1"]), K))


def equation_field(eq: MahlerEquation) -> Cyclotomic:
    for c in eq.coeffs:
        for x in c.num.c + c.den.c:
            if isinstance(x, CycloElem):
                return x.field
    return Cyclotomic(1)


def equation_to_json(eq: MahlerEquation, K: Cyclotomic | None = None) -> dict:
    K = K or equation_field(eq)
    return {
        "k": eq.k,
        "field": {"cyclotomic_order": K.N},
        "coefficients": [ratfun_to_json(c, K) for c in eq.coeffs],
    }


def equation_from_json(doc: dict) -> MahlerEquation:
    K = Cyclotomic(int(doc.get("field", {}).get("cyclotomic_order", 1)))
    return MahlerEquation(int(doc["k"]), [ratfun_from_json(c, K) for c in doc["coefficients"]])


def point_class_to_json(p: PointClass, K: Cyclotomic) -> dict:
    if p.kind == ZERO_KIND:
        return {"kind": "zero"}
    if p.kind == ELEMENT:
        out = {"kind": "element", "value": [format_fraction(c) for c in K.coords(p.value)]}
        if p.order is not None:
            out["order"] = p.order
        return out
    if p.kind == UNITY:
        return {"kind": "unity", "order": p.order, "poly": poly_to_json(p.poly, K)}
    assert p.kind == ALGEBRAIC
    return {"kind": "algebraic", "poly": poly_to_json(p.poly, K)}


def sequence_to_json(spec) -> dict:
    return {"start": format_poly(spec.start.poly), "sequence": list(spec.entries), "mode": spec.mode}


def truncation_to_json(t, K: Cyclotomic) -> list:
    return [scalar_to_json(x, K) for x in t.coeffs]
