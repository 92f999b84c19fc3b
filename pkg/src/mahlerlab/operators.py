"""Mahler equations, the operator ring K(z)[Delta_k] and the regularity criterion.

An equation f(z) = sum_i c_i(z) f(z^{k^i}) corresponds to the operator
1 - sum_i c_i Delta^i.  Left multiplication by 1 + sum_m psi_m Delta^m gives
the special operators whose coefficient rows d_{i,m} drive the search for a
calm equation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import inf

from .calmness import (
    act,
    is_precalm,
    polynomialize,
)
from .errors import (
    ConstructionFailed,
    HorizonUncertified,
    NonUniformClass,
    RadixMismatch,
    Undecided,
)
from .linalg import IncrementalSpan
from .points import (
    PointClass,
    is_anxious,
    orbit_horizon,
    split_classes,
    support_set,
    uniform_orbits,
)
from .poly import (
    ONE,
    ZERO,
    Poly,
    RatFun,
    Z,
    coprime_basis,
    digit_match,
    gcd,
    lcm,
    power_image,
    squarefree_part,
    valuation_at_class,
)

REGULAR = "Regular"
NOT_REGULAR = "NotRegular"
ASSUMPTION_VIOLATED = "AssumptionViolated"
UNKNOWN = "Unknown"


@dataclass
class MahlerEquation:
    k: int
    coeffs: list
    minimal_order_asserted: bool = False

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("radix k must be at least 2")
        self.coeffs = [RatFun.coerce(c) for c in self.coeffs]
        if not self.coeffs or self.coeffs[-1].is_zero():
            raise ValueError("the last coefficient c_n must be nonzero")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def operator(self) -> "MahlerOperator":
        terms = {0: RatFun.coerce(ONE)}
        for i, c in enumerate(self.coeffs, start=1):
            if not c.is_zero():
                terms[i] = -c
        return MahlerOperator(terms, self.k)


class MahlerOperator:
    """Finite sum of c_d(z) Delta_k^d."""

    def __init__(self, terms, k: int):
        self.k = k
        self.terms = {d: RatFun.coerce(c) for d, c in terms.items() if not RatFun.coerce(c).is_zero()}

    @classmethod
    def delta(cls, d: int, k: int) -> "MahlerOperator":
        return cls({d: ONE}, k)

    @classmethod
    def scalar(cls, c, k: int) -> "MahlerOperator":
        return cls({0: c}, k)

    @property
    def degree(self) -> int:
        return max(self.terms, default=-1)

    def coeff(self, d: int) -> RatFun:
        return self.terms.get(d, RatFun.coerce(ZERO))

    def _check(self, other):
        if not isinstance(other, MahlerOperator):
            other = MahlerOperator.scalar(other, self.k)
        if other.k != self.k:
            raise RadixMismatch(f"radix {self.k} vs {other.k}")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out[d] + c if d in out else c
        return MahlerOperator(out, self.k)

    def __neg__(self):
        return MahlerOperator({d: -c for d, c in self.terms.items()}, self.k)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        return op_mul(self, self._check(other))

    def __eq__(self, other):
        if not isinstance(other, MahlerOperator):
            return NotImplemented
        return self.k == other.k and self.terms == other.terms

    def __repr__(self):
        parts = [f"({c})*D^{d}" for d, c in sorted(self.terms.items())]
        return f"MahlerOperator[k={self.k}](" + " + ".join(parts) + ")"


def op_mul(A: MahlerOperator, B: MahlerOperator) -> MahlerOperator:
    """(a Delta^d)(b Delta^e) = a b(z^{k^d}) Delta^{d+e}."""
    if A.k != B.k:
        raise RadixMismatch(f"radix {A.k} vs {B.k}")
    k = A.k
    out: dict[int, RatFun] = {}
    for d, a in A.terms.items():
        for e, b in B.terms.items():
            t = a * b.compose_power(k ** d)
            out[d + e] = out[d + e] + t if d + e in out else t
    return MahlerOperator(out, k)


# Cartier operators ----------------------------------------------------------


def cartier_poly(p: Poly, r: int, k: int) -> Poly:
    return Poly(p.c[r::k])


def cartier_rational(c, r: int, k: int) -> RatFun:
    """Lambda_r(c): the unique rational function with c = sum_r z^r Lambda_r(c)(z^k)."""
    c = RatFun.coerce(c)
    if not 0 <= r < k:
        raise ValueError(f"residue {r} outside 0..{k - 1}")
    if c.is_zero():
        return c
    if c.den.deg == 0:
        return RatFun(cartier_poly(c.num, r, k))
    dt = power_image(c.den, k)
    e = dt.compose_power(k).exact_div(c.den)
    return RatFun(cartier_poly(c.num * e, r, k), dt)


# special operators -----------------------------------------------------------


def next_row(row: list, psi, coeffs, k: int, m: int) -> list:
    """Row m from row m-1 for Gamma_m = (1 + ... + psi Delta^m)(1 - sum c_i Delta^i)."""
    n = len(coeffs)
    out = list(row) + [RatFun.coerce(ZERO)]
    out[m - 1] = out[m - 1] - psi
    if not psi.is_zero():
        for i in range(1, n + 1):
            out[m + i - 1] = out[m + i - 1] + psi * coeffs[i - 1].compose_power(k ** m)
    return out


def special_coefficients(eq: MahlerEquation, m_max: int):
    """Yield rows (d_{1,m}, ..., d_{n+m,m}) for m = 0..m_max with psi_m = d_{m,m-1}."""
    row = list(eq.coeffs)
    yield row
    for m in range(1, m_max + 1):
        row = next_row(row, row[m - 1], eq.coeffs, eq.k, m)
        yield row


def anxious_pole_set(eq: MahlerEquation) -> tuple[list[PointClass], bool]:
    classes = support_set(eq.coeffs).anxious_pole_classes(eq.k)
    return classes, any(c.is_unity for c in classes)


# verdicts -------------------------------------------------------------------


@dataclass
class SearchTrace:
    windows: dict = field(default_factory=dict)  # class -> [(m, [v_alpha(d_{m+i,m})])]
    digit_depth: int | None = None
    B: dict = field(default_factory=dict)  # m -> [class polys]
    psi: dict = field(default_factory=dict)  # m -> psi'_m
    witness_m: dict = field(default_factory=dict)  # class -> m


@dataclass
class RegularityVerdict:
    status: str
    witness_m: int | None = None
    calm_equation: MahlerEquation | None = None
    multiplier: Poly | None = None  # the calm equation is satisfied by f / multiplier
    certificate: tuple | None = None  # (class, SequenceSpec, clm) for NotRegular
    reason: str | None = None
    trace: SearchTrace = field(default_factory=SearchTrace)


def _is_calm(coeffs, k: int) -> bool:
    if all(c.is_zero() for c in coeffs):
        return True
    return not support_set(coeffs).anxious_pole_classes(k)


def _precalm_regular(eq: MahlerEquation, cap: int, trace: SearchTrace) -> RegularityVerdict:
    h = polynomialize(eq.coeffs, eq.k, cap)
    calm = MahlerEquation(eq.k, act(h, eq.coeffs, eq.k), eq.minimal_order_asserted)
    if not _is_calm(calm.coeffs, eq.k):
        raise ConstructionFailed("polynomialized equation is not calm")
    return RegularityVerdict(REGULAR, 0, calm, h, trace=trace)


def order_one_decide(eq: MahlerEquation, cap: int = 64) -> RegularityVerdict:
    if eq.n != 1:
        raise ValueError("order_one_decide needs an order-one equation")
    trace = SearchTrace()
    try:
        verdict = is_precalm(eq.coeffs, eq.k, cap, witness=False)
    except Undecided as exc:
        return RegularityVerdict(UNKNOWN, reason=str(exc), trace=trace)
    if verdict.precalm:
        return _precalm_regular(eq, cap, trace)
    return RegularityVerdict(NOT_REGULAR, certificate=verdict.violation, trace=trace)


def _split_against(cls: PointClass, rats) -> list[PointClass]:
    """Refine a class so every given rational function has uniform valuation on each piece."""
    polys = [cls.poly]
    for c in rats:
        for p in (c.num, c.den):
            g = gcd(cls.poly, p)
            if g.deg > 0:
                polys.append(g)
    pieces = [b for b in coprime_basis(polys) if gcd(b, cls.poly).deg == b.deg]
    out = []
    for p in pieces:
        out.extend(split_classes(p))
    return out


def _valuation(c, cls: PointClass):
    return valuation_at_class(c, cls.poly)


def _orbit_clean_from(cls: PointClass, eq: MahlerEquation, support, cap: int) -> int | None:
    """Smallest m with v_{alpha^{k^j}}(c_i) >= 0 for all j > m, or None if uncertified."""
    hz = orbit_horizon(cls, support, eq.k, eq.n, cap)
    if not hz.certified:
        return None
    last_bad = 0
    for j, s in enumerate(hz.steps[: hz.T]):
        if any(_valuation(c, s) < 0 for c in eq.coeffs if not c.is_zero()):
            last_bad = j
    return last_bad


def regularity_search(eq: MahlerEquation, m_max: int = 32, cap: int = 64, degree_budget: int = 2000) -> RegularityVerdict:
    if eq.n == 1:
        return order_one_decide(eq, cap)
    trace = SearchTrace()
    try:
        if is_precalm(eq.coeffs, eq.k, cap, witness=False).precalm:
            return _precalm_regular(eq, cap, trace)
    except Undecided:
        pass
    V, has_unity = anxious_pole_set(eq)
    if has_unity:
        names = [str(c) for c in V if c.is_unity]
        return RegularityVerdict(ASSUMPTION_VIOLATED, reason=f"anxious poles at roots of unity: {names}", trace=trace)
    support = support_set(eq.coeffs)
    pending = []
    for cls in V:
        for orbit in uniform_orbits(cls, support, eq.k, eq.n, cap):
            pending.append(orbit.start)
    gen = special_coefficients(eq, m_max)
    clean = {}
    for cls in pending:
        c0 = _orbit_clean_from(cls, eq, support, cap)
        if c0 is None:
            return RegularityVerdict(UNKNOWN, reason=f"orbit of {cls} uncertified within {cap} steps", trace=trace)
        clean[cls] = c0
    todo = list(pending)
    found: dict = {}
    last_deg = 0
    for m in range(m_max + 1):
        if not todo:
            break
        # row m has degree about k times that of row m-1; stop before building it
        if last_deg * eq.k > degree_budget:
            return RegularityVerdict(UNKNOWN, reason=f"degree budget {degree_budget} reached before m={m}", trace=trace)
        try:
            row = next(gen)
        except StopIteration:
            break
        last_deg = max(max(c.num.deg, c.den.deg) for c in row)
        window = row[m : m + eq.n]
        still = []
        queue = list(todo)
        while queue:
            cls = queue.pop(0)
            try:
                vals = [_valuation(d, cls) for d in window]
            except NonUniformClass:
                for piece in _split_against(cls, window):
                    clean[piece] = clean[cls]
                    queue.append(piece)
                continue
            trace.windows.setdefault(str(cls), []).append((m, vals))
            if all(v >= 0 for v in vals) and m >= clean[cls]:
                found[cls] = m
                trace.witness_m[str(cls)] = m
            else:
                still.append(cls)
        todo = still
    if todo:
        return RegularityVerdict(
            UNKNOWN,
            reason=f"no witness m <= {m_max} for {[str(c) for c in todo]}",
            trace=trace,
        )
    m0 = max(found.values(), default=0)
    calm = calmify_equation(eq, m0, trace, list(found))
    return RegularityVerdict(REGULAR, m0, calm, ONE, trace=trace)


def _anxious_classes_of(eq: MahlerEquation) -> list[PointClass]:
    sup = support_set(eq.coeffs)
    out = []
    for cls in sup.anxious_pole_classes(eq.k):
        out.extend(o.start for o in uniform_orbits(cls, sup, eq.k, eq.n))
    return out


def _b_product(eq: MahlerEquation, V: list[PointClass], m: int, trace: SearchTrace) -> Poly:
    """prod over alpha in B_m of (z - alpha)^{-min_j v_{alpha^{k^m}}(c_j)}."""
    sup = support_set(eq.coeffs)
    vpoly = ONE
    for cls in V:
        vpoly = vpoly * cls.poly
    out = ONE
    used = []
    for ci, cls in enumerate(sup.classes):
        e = -min(sup.valuation(ci, i) for i in range(eq.n))
        if e <= 0:
            continue
        if cls.poly == Z:
            base = Z
        else:
            base = cls.poly.compose_power(eq.k ** m)
            g = gcd(base, vpoly)
            if g.deg > 0:
                base = base.exact_div(g)
        if base.deg > 0:
            out = out * base ** e
            used.append((str(base), e))
    trace.B[m] = used
    return out


def calmify_equation(eq: MahlerEquation, m0: int, trace: SearchTrace | None = None, V=None) -> MahlerEquation:
    """Order n + m0 equation with calm coefficients, built from the special rows."""
    trace = trace if trace is not None else SearchTrace()
    k = eq.k
    if m0 == 0:
        if not _is_calm(eq.coeffs, k):
            raise ConstructionFailed("m0 = 0 but the equation is not calm")
        return eq
    V = list(V) if V is not None else _anxious_classes_of(eq)
    exact = list(special_coefficients(eq, m0))
    lows = []
    for cls in V:
        for m, row in enumerate(exact):
            for d in row[m : m + eq.n]:
                if not d.is_zero():
                    lows.append(_valuation(d, cls))
    v = max(1, -min(lows, default=0))
    trace.digit_depth = v
    row = list(eq.coeffs)
    for m in range(1, m0 + 1):
        d_exact = exact[m - 1][m - 1]
        d_prime = row[m - 1]
        if d_exact.is_zero() or d_prime.is_zero():
            psi = RatFun.coerce(ZERO)
        else:
            bprod = _b_product(eq, V, m, trace)
            base = d_prime * bprod
            targets = [(cls.poly, v, d_exact / base) for cls in V]
            h = digit_match(targets) if targets else ONE
            psi = base * h
        trace.psi[m] = psi
        row = next_row(row, psi, eq.coeffs, k, m)
    out = MahlerEquation(k, row, eq.minimal_order_asserted)
    if not _is_calm(out.coeffs, k):
        raise ConstructionFailed("calmified equation still has anxious poles")
    return out


# kernel orbit ----------------------------------------------------------------


@dataclass
class KernelLevel:
    depth: int
    added: int
    rank: int
    pole_orders: dict  # anxious class -> max pole order among vectors of this level


@dataclass
class KernelProfile:
    levels: list[KernelLevel]
    closed: bool

    @property
    def rank(self) -> int:
        return self.levels[-1].rank if self.levels else 0


def _cartier_vector(vec, r: int, eq: MahlerEquation):
    """Lambda_r of sum_i h_i f(z^{k^{i-1}}), rewritten in the same basis."""
    n, k = eq.n, eq.k
    out = [RatFun.coerce(ZERO)] * n
    for i in range(1, n):
        if not vec[i].is_zero():
            out[i - 1] = out[i - 1] + cartier_rational(vec[i], r, k)
    h1 = vec[0]
    if not h1.is_zero():
        for j, c in enumerate(eq.coeffs):
            if not c.is_zero():
                out[j] = out[j] + cartier_rational(h1 * c, r, k)
    return out


def _flatten(vecs) -> list[list]:
    """Vectors in K(z)^n cleared to one denominator, as coefficient lists."""
    L = ONE
    for v in vecs:
        for c in v:
            if not c.is_zero():
                L = lcm(L, c.den)
    polys = [[(c * L).num if not c.is_zero() else ZERO for c in v] for v in vecs]
    width = max((p.deg + 1 for v in polys for p in v), default=1)
    width = max(width, 1)
    rows = []
    for v in polys:
        row = []
        for p in v:
            cs = list(p.c) + [0] * (width - len(p.c))
            row.extend(cs)
        rows.append(row)
    return rows


def _pole_orders(vec, k: int) -> dict:
    out: dict = {}
    for c in vec:
        if c.is_zero() or c.den.deg <= 0:
            continue
        for cls in split_classes(squarefree_part(c.den)):
            if not is_anxious(cls, k):
                continue
            try:
                order = -valuation_at_class(c, cls.poly)
            except NonUniformClass:
                continue
            key = str(cls)
            out[key] = max(out.get(key, 0), order)
    return out


def kernel_orbit(eq: MahlerEquation, depth: int) -> KernelProfile:
    n = eq.n
    start = [RatFun.coerce(ONE)] + [RatFun.coerce(ZERO)] * (n - 1)
    basis = [start]
    levels = [KernelLevel(0, 1, 1, _pole_orders(start, eq.k))]
    frontier = [start]
    closed = False
    for d in range(1, depth + 1):
        nxt = []
        poles: dict = {}
        for vec in frontier:
            for r in range(eq.k):
                w = _cartier_vector(vec, r, eq)
                if all(c.is_zero() for c in w):
                    continue
                rows = _flatten(basis + nxt + [w])
                span = IncrementalSpan()
                for row in rows[:-1]:
                    span.add(row)
                if span.add(rows[-1]):
                    nxt.append(w)
                    for key, val in _pole_orders(w, eq.k).items():
                        poles[key] = max(poles.get(key, 0), val)
        basis.extend(nxt)
        levels.append(KernelLevel(d, len(nxt), len(basis), poles))
        if not nxt:
            closed = True
            break
        frontier = nxt
    return KernelProfile(levels, closed)
