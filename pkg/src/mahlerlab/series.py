"""Truncated power series: solving Mahler equations and probing their k-kernel."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import inf

from .errors import (
    ConstantTermNotOne,
    ConstraintViolated,
    Inconsistent,
    TruncationTooShort,
)
from .field import field_of, is_rational, to_fraction
from .linalg import IncrementalSpan, nullspace
from .operators import (
    MahlerEquation,
    MahlerOperator,
    REGULAR,
    op_mul,
    regularity_search,
)
from .poly import ONE, ZERO, Poly, RatFun, lcm

DEFAULT_MARGIN = 32


@dataclass
class Truncation:
    coeffs: list

    @property
    def T(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, j):
        return self.coeffs[j]

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Truncation):
            return NotImplemented
        return self.coeffs == other.coeffs

    @classmethod
    def from_poly(cls, p: Poly, T: int) -> "Truncation":
        c = list(p.c[:T])
        return cls(c + [0] * (T - len(c)))

    @classmethod
    def from_ratfun(cls, c, T: int) -> "Truncation":
        c = RatFun.coerce(c)
        if c.den.c[0] == 0:
            raise ValueError("rational function has a pole at 0")
        return cls.from_poly(c.num, T) * cls.inverse_of(c.den, T)

    @classmethod
    def inverse_of(cls, p: Poly, T: int) -> "Truncation":
        b0 = p.c[0]
        if b0 == 0:
            raise ValueError("no inverse: zero constant term")
        inv0 = 1 / b0
        out = [inv0]
        for j in range(1, T):
            s = 0
            for t in range(1, min(j, p.deg) + 1):
                if p.c[t]:
                    s = s + p.c[t] * out[j - t]
            out.append(-s * inv0)
        return cls(out[:T])

    def __add__(self, other):
        T = min(self.T, other.T)
        return Truncation([a + b for a, b in zip(self.coeffs[:T], other.coeffs[:T])])

    def __sub__(self, other):
        T = min(self.T, other.T)
        return Truncation([a - b for a, b in zip(self.coeffs[:T], other.coeffs[:T])])

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self.mul_poly(other)
        if not isinstance(other, Truncation):
            return Truncation([a * other for a in self.coeffs])
        T = min(self.T, other.T)
        out = [0] * T
        for i, a in enumerate(self.coeffs[:T]):
            if a:
                for j in range(T - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return Truncation(out)

    def mul_poly(self, p: Poly) -> "Truncation":
        out = [0] * self.T
        for t, x in enumerate(p.c):
            if x:
                for j in range(self.T - t):
                    y = self.coeffs[j]
                    if y:
                        out[j + t] += x * y
        return Truncation(out)

    def compose_power(self, K: int) -> "Truncation":
        """t(z^K), keeping the same truncation order."""
        out = [0] * self.T
        for j in range(0, (self.T - 1) // K + 1):
            out[j * K] = self.coeffs[j]
        return Truncation(out)

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def cartier_series(t: Truncation, r: int, k: int) -> Truncation:
    return Truncation(list(t.coeffs[r::k]))


# solving ---------------------------------------------------------------------


@dataclass
class SolveReport:
    solution: Truncation
    free_parameters: list[int] = field(default_factory=list)
    consistency: list[tuple] = field(default_factory=list)  # (degree, "ok" | "contradiction")

    @property
    def contradictions(self) -> list[int]:
        return [j for j, s in self.consistency if s == "contradiction"]


def cleared_polys(eq: MahlerEquation) -> list[Poly]:
    """[P_0, P_1, ..., P_n] with P_0 f = sum P_i f(z^{k^i}), common z-power removed."""
    L = ONE
    for c in eq.coeffs:
        if not c.is_zero():
            L = lcm(L, c.den)
    polys = [L] + [(c * L).num if not c.is_zero() else ZERO for c in eq.coeffs]
    g = min(p.order() for p in polys if not p.is_zero())
    return [Poly(p.c[g:]) if not p.is_zero() else p for p in polys]


def series_residue(eq: MahlerEquation, t: Truncation) -> Truncation:
    """P_0 t - sum P_i t(z^{k^i}) to the truncation order of t."""
    P = cleared_polys(eq)
    acc = t.mul_poly(P[0])
    for i, p in enumerate(P[1:], start=1):
        if not p.is_zero():
            acc = acc - t.compose_power(eq.k ** i).mul_poly(p)
    return acc


def solve_series(eq: MahlerEquation, T: int, seeds: dict | None = None) -> SolveReport:
    if T < 1:
        raise ValueError("truncation order must be positive")
    seeds = dict(seeds or {})
    P = cleared_polys(eq)
    k, n = eq.k, eq.n
    s0 = P[0].order()
    known: dict[int, object] = {}
    pending: list[tuple[dict, object]] = []
    free: list[int] = []
    consistency: list[tuple] = []

    def equation(j):
        lin: dict[int, object] = {}
        for t, x in enumerate(P[0].c):
            if x and 0 <= j - t < T:
                lin[j - t] = lin.get(j - t, 0) + x
        for i in range(1, n + 1):
            K = k ** i
            for t, x in enumerate(P[i].c):
                if x and t <= j and (j - t) % K == 0:
                    idx = (j - t) // K
                    lin[idx] = lin.get(idx, 0) - x
        return {i: c for i, c in lin.items() if c != 0}, 0

    def substitute(eqn):
        lin, const = eqn
        out = {}
        for i, c in lin.items():
            if i in known:
                const = const + c * known[i]
            else:
                out[i] = c
        return out, const

    def settle(j):
        progress = True
        while progress:
            progress = False
            rest = []
            for e in pending:
                lin, const = substitute(e)
                if not lin:
                    consistency.append((j, "ok" if const == 0 else "contradiction"))
                elif len(lin) == 1:
                    (i, c), = lin.items()
                    known[i] = -const / c
                    progress = True
                else:
                    rest.append((lin, const))
            pending[:] = rest

    for j in range(T + s0):
        pending.append(equation(j))
        settle(j)
        idx = j - s0
        if 0 <= idx < T and idx not in known:
            if idx in seeds:
                val = seeds[idx]
            else:
                val = 1 if not free else 0
            free.append(idx)
            known[idx] = val
            settle(j)
    sol = Truncation([known.get(i, 0) for i in range(T)])
    report = SolveReport(sol, free, consistency)
    if sol.is_zero() or report.contradictions:
        raise Inconsistent(f"no nonzero solution (contradictions at degrees {report.contradictions})")
    return report


def apply_operator(op: MahlerOperator, t: Truncation) -> Truncation:
    """sum_d c_d(z) t(z^{k^d}) for an operator whose coefficients have no pole at 0."""
    acc = Truncation([0] * t.T)
    for d, c in op.terms.items():
        acc = acc + t.compose_power(op.k ** d) * Truncation.from_ratfun(c, t.T)
    return acc


# kernel probe ------------------------------------------------------------------


@dataclass
class ProbeReport:
    rank: int
    closed: bool
    ranks: list[int]  # cumulative rank after each BFS level
    retained: int


def kernel_rank_probe(source, depth: int, T: int | None = None, k: int | None = None, margin: int = DEFAULT_MARGIN) -> ProbeReport:
    """Rank of the span of Lambda-words of length < depth applied to a series."""
    if isinstance(source, MahlerEquation):
        k = source.k
        t = solve_series(source, T).solution
    else:
        t = source
        if T is not None:
            t = Truncation(t.coeffs[:T])
    if k is None:
        raise ValueError("radix k required for a bare truncation")
    if depth < 1:
        raise ValueError("depth must be positive")
    retained = t.T // k ** (depth - 1)
    if retained < margin:
        raise TruncationTooShort(f"T={t.T} keeps {retained} < {margin} coefficients at depth {depth}")
    span = IncrementalSpan()
    span.add(t.coeffs[:retained])
    ranks = [len(span)]
    frontier = [t]
    closed = False
    for _ in range(1, depth):
        nxt = []
        for s in frontier:
            for r in range(k):
                w = cartier_series(s, r, k)
                if span.add(w.coeffs[:retained]):
                    nxt.append(w)
        ranks.append(len(span))
        if not nxt:
            closed = True
            break
        frontier = nxt
    return ProbeReport(len(span), closed, ranks, retained)


# relation guessing ---------------------------------------------------------------


def guess_relation(t: Truncation, n_hat: int, d_hat: int, k: int, margin: int = DEFAULT_MARGIN):
    """Candidate equation sum_i p_i(z) t(z^{k^i}) = 0 (mod z^{T-margin}), or None."""
    T = t.T
    unknowns = (n_hat + 1) * (d_hat + 1)
    if T < 2 * unknowns + margin:
        raise TruncationTooShort(f"T={T} < {2 * unknowns + margin}")
    N = T - margin
    comps = [t.compose_power(k ** i) for i in range(n_hat + 1)]
    rows = []
    for j in range(N):
        row = []
        for i in range(n_hat + 1):
            for e in range(d_hat + 1):
                row.append(comps[i].coeffs[j - e] if j - e >= 0 else 0)
        rows.append(row)
    zero = Fraction(0) if all(is_rational(x) for x in t.coeffs) else field_of(*t.coeffs).zero
    one = zero + 1
    basis = nullspace(rows, unknowns, zero, one)
    for vec in basis:
        ps = [Poly(vec[i * (d_hat + 1) : (i + 1) * (d_hat + 1)]) for i in range(n_hat + 1)]
        if ps[0].is_zero():
            continue
        coeffs = [RatFun(p) / RatFun(ps[0]) for p in ps[1:]]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            continue
        return MahlerEquation(k, [-c for c in coeffs])
    return None


# Becker product --------------------------------------------------------------


def becker_product(c0, k: int, T: int) -> tuple[Truncation, Truncation]:
    """(h, residue) with h = 1 / prod_{i>=0} c0(z^{k^i}) and residue h c0 - h(z^k)."""
    c0 = RatFun.coerce(c0)
    if c0.is_zero() or c0.den.c[0] == 0 or c0(0) != 1:
        raise ConstantTermNotOne("c0(0) must equal 1")
    base = Truncation.from_ratfun(c0, T)
    prod = Truncation([1] + [0] * (T - 1))
    K = 1
    while K < T:
        prod = prod * base.compose_power(K)
        K *= k
    h = Truncation.inverse_of(Poly(prod.coeffs), T)
    residue = h * base - h.compose_power(k)
    return h, residue


# the counterexample ------------------------------------------------------------------


def counterexample_coefficients(k: int, alpha) -> tuple[RatFun, RatFun]:
    a = alpha
    c1 = RatFun(Poly([a - a ** k, a ** (k - 1) - a ** (1 - k)]), Poly([a, -1]))
    c2 = RatFun(Poly([a ** k, -1]), Poly([a, -1]))
    return c1, c2


def counterexample_psi(k: int, alpha) -> RatFun:
    a = alpha
    return RatFun(Poly.monomial(k) * (-1) + a, Poly([a, -1])) * (-(a ** (1 - k)))


def _check_constraints(k: int, alpha: Fraction):
    if k < 3:
        raise ConstraintViolated("the example needs k >= 3")
    if alpha == 0 or abs(alpha) == 1:
        raise ConstraintViolated(f"alpha = {alpha} is not anxious or gives alpha^(k-1) = +-1")
    if alpha ** (k - 1) in (1, -1):
        raise ConstraintViolated("alpha^(k-1) = +-1")
    factor = 1 + alpha ** (1 - k)
    lo_factor = abs(1 - abs(alpha) ** (1 - k))
    x = alpha
    for i in range(64):
        if alpha == x * factor:
            raise ConstraintViolated(f"alpha = alpha^(k^{i}) (1 + alpha^(1-k)) at i = {i}")
        # past this point |alpha^{k^i} (1 + alpha^{1-k})| moves monotonically away from |alpha|
        if abs(alpha) > 1 and abs(x) * lo_factor > abs(alpha):
            return i
        if abs(alpha) < 1 and abs(x) * abs(factor) < abs(alpha) and abs(x) < abs(alpha):
            return i
        x = x ** k
    return None


def verify_counterexample(k: int, alpha, T: int = 200, guess_T: int = 600, d_hat: int = 8) -> dict:
    """Check the five claims of the precalm-but-regular example; returns a report."""
    from .calmness import SequenceSpec, INFINITE_TAIL, clm_of_sequence, is_precalm
    from .points import PointClass

    if not is_rational(alpha):
        return {"status": "Unknown", "reason": "only rational alpha is supported"}
    alpha = to_fraction(alpha)
    certified_at = _check_constraints(k, alpha)
    if certified_at is None:
        return {"status": "Unknown", "reason": "constraint check not certified"}
    c1, c2 = counterexample_coefficients(k, alpha)
    eq2 = MahlerEquation(k, [c1, c2])
    report: dict = {"k": k, "alpha": str(alpha), "constraint_horizon": certified_at}
    # (a) not precalm, with clm(1,1) = -1
    verdict = is_precalm(eq2.coeffs, k, witness=False)
    spec = SequenceSpec(PointClass.element(alpha), (1, 1), INFINITE_TAIL)
    clm11 = clm_of_sequence(eq2.coeffs, spec, k)
    report["a_not_precalm"] = (not verdict.precalm) and clm11 == -1
    report["a_detail"] = {"precalm": verdict.precalm, "clm_1_1": clm11}
    # (b) no order-one relation
    sol_long = solve_series(eq2, guess_T).solution
    rel = guess_relation(sol_long, 1, d_hat, k)
    report["b_no_order_one"] = rel is None
    # (c) the left multiple has polynomial coefficients
    psi = counterexample_psi(k, alpha)
    prod = op_mul(MahlerOperator({0: ONE, 1: psi}, k), eq2.operator())
    report["c_polynomial_product"] = prod.degree == 3 and all(c.is_poly() for c in prod.terms.values())
    eq3 = MahlerEquation(k, [-prod.coeff(i) for i in range(1, 4)])
    # (d) the criterion says Regular with witness m = 1
    reg = regularity_search(eq2)
    report["d_regular"] = reg.status == REGULAR and reg.witness_m == 1
    report["d_detail"] = {"status": reg.status, "witness_m": reg.witness_m}
    # (e) the solved series satisfies both equations
    sol = solve_series(eq2, T + 1).solution
    report["e_residues_zero"] = series_residue(eq2, sol).is_zero() and series_residue(eq3, sol).is_zero()
    keys = ["a_not_precalm", "b_no_order_one", "c_polynomial_product", "d_regular", "e_residues_zero"]
    report["status"] = "pass" if all(report[x] for x in keys) else "fail"
    return report
