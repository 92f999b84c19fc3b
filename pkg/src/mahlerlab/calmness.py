"""Calmness values, the h* action, the precalmness decision and witnesses.

Walks in a weighted orbit graph stand in for the sequences (a_i): a step by
``a`` from orbit position ``t`` costs the valuation of ``c_a`` at the class of
position ``t``.  Root-of-unity orbits give a cyclic graph, every other orbit
gives a finite DAG that ends in the zero-weight tail window.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd as igcd
from math import inf

from .errors import ConstructionFailed, HorizonUncertified, NotCalm, NotPrecalm, Undecided, ZeroAction
from .field import multiplicative_order
from .points import (
    ZERO_KIND,
    Orbit,
    PointClass,
    classify_point,
    is_anxious,
    orbit_horizon,
    orbit_step,
    orbit_valuations,
    support_set,
    uniform_orbits,
)
from .poly import ONE, Poly, RatFun, Z, squarefree_part, valuation_at_class

UNITY_CYCLE = "UnityCycle"
INFINITE_TAIL = "InfiniteTail"


@dataclass(frozen=True)
class SequenceSpec:
    start: PointClass
    entries: tuple
    mode: str

    @property
    def partial_sums(self) -> list[int]:
        out = [0]
        for a in self.entries:
            out.append(out[-1] + a)
        return out


@dataclass
class CalmnessGraph:
    """Edge weights ``w[t][a-1]``; ``cyclic`` graphs live on Z_m."""

    start: PointClass
    weights: list[list]
    cyclic: bool
    tail: int | None = None  # first tail node for the DAG form

    @property
    def size(self) -> int:
        return len(self.weights)

    def target(self, t: int, a: int) -> int:
        return (t + a) % self.size if self.cyclic else t + a


@dataclass
class WitnessTrace:
    steps: list[dict] = field(default_factory=list)

    def log(self, **entry):
        self.steps.append(entry)


@dataclass
class PrecalmVerdict:
    precalm: bool
    witness: Poly | None = None
    violation: tuple | None = None  # (class, SequenceSpec, clm value)
    trace: WitnessTrace = field(default_factory=WitnessTrace)


def _coerce_all(coeffs) -> list[RatFun]:
    return [RatFun.coerce(c) for c in coeffs]


# the action -------------------------------------------------------------


def act(h, coeffs, k: int) -> list[RatFun]:
    """h*(c_i) = h(z^{k^i}) / h(z) * c_i."""
    h = RatFun.coerce(h)
    if h.is_zero():
        raise ZeroAction("acting by the zero function")
    out = []
    for i, c in enumerate(_coerce_all(coeffs), start=1):
        if c.is_zero():
            out.append(c)
            continue
        out.append(h.compose_power(k ** i) / h * c)
    return out


# calmness of one sequence -------------------------------------------------


def clm_of_sequence(coeffs, spec: SequenceSpec, k: int, cap: int = 64):
    coeffs = _coerce_all(coeffs)
    if any(coeffs[a - 1].is_zero() for a in spec.entries):
        return inf
    sums = spec.partial_sums
    if spec.mode == INFINITE_TAIL:
        hz = orbit_horizon(spec.start, support_set(coeffs), k, len(coeffs), cap)
        if not hz.certified:
            raise HorizonUncertified(f"orbit of {spec.start} not certified within {cap} steps")
        if sums[-1] < hz.T:
            raise ValueError(f"prefix ends at {sums[-1]}, before the horizon {hz.T}")
    classes = [spec.start]
    total = 0
    for t, a in zip(sums, spec.entries):
        while len(classes) <= t:
            classes.append(orbit_step(classes[-1], k))
        total += valuation_at_class(coeffs[a - 1], classes[t].poly)
    return total


# graphs -----------------------------------------------------------------


def _orbits_for(coeffs, start: PointClass, k: int, cap: int) -> list[Orbit]:
    return uniform_orbits(start, support_set(coeffs), k, len(coeffs), cap)


def unity_graph(coeffs, orbit: Orbit, k: int) -> CalmnessGraph:
    """Point-level graph on Z_m with weights read off the class period."""
    table = orbit_valuations(orbit, coeffs)
    m = multiplicative_order(k, orbit.start.order)
    period = len(table)
    return CalmnessGraph(orbit.start, [table[j % period] for j in range(m)], True)


def tail_graph(coeffs, orbit: Orbit) -> CalmnessGraph:
    hz = orbit.horizon
    table = orbit_valuations(orbit, coeffs)
    return CalmnessGraph(orbit.start, table, False, hz.T)


def _edges(g: CalmnessGraph):
    for t in range(g.size):
        for a, w in enumerate(g.weights[t], start=1):
            if w != inf:
                yield t, a, g.target(t, a), w


def _reach(g: CalmnessGraph, src: int, reverse: bool = False) -> set[int]:
    adj: dict[int, list[int]] = {}
    for u, _, v, _ in _edges(g):
        if reverse:
            u, v = v, u
        adj.setdefault(u, []).append(v)
    seen = {src}
    stack = [src]
    while stack:
        u = stack.pop()
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _shortest_from(g: CalmnessGraph, src: int, nodes: set[int]):
    """Bellman-Ford restricted to ``nodes``; returns (dist, pred, cycle node or None)."""
    edges = [e for e in _edges(g) if e[0] in nodes and e[2] in nodes]
    dist = {v: inf for v in nodes}
    pred: dict[int, tuple[int, int]] = {}
    dist[src] = 0
    for _ in range(len(nodes)):
        changed = False
        for u, a, v, w in edges:
            if dist[u] != inf and dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                pred[v] = (u, a)
                changed = True
        if not changed:
            return dist, pred, None
    for u, a, v, w in edges:
        if dist[u] != inf and dist[u] + w < dist[v]:
            pred[v] = (u, a)
            x = v
            for _ in range(len(nodes)):
                x = pred[x][0]
            return dist, pred, x
    return dist, pred, None


def _path(pred, src: int, dst: int) -> list[int]:
    steps = []
    x = dst
    while x != src:
        u, a = pred[x]
        steps.append(a)
        x = u
    return steps[::-1]


def _walk_weight(g: CalmnessGraph, start: int, entries) -> int:
    t, total = start, 0
    for a in entries:
        total += g.weights[t][a - 1]
        t = g.target(t, a)
    return total


def _negative_cycle_walk(g: CalmnessGraph, nodes: set[int], pred, x: int) -> list[int]:
    """A negative closed walk through node 0 that loops the cycle found at x."""
    cyc = []
    y = x
    while True:
        u, a = pred[y]
        cyc.append(a)
        y = u
        if y == x:
            break
    cyc.reverse()
    to_x = _bfs_path(g, nodes, 0, x)
    back = _bfs_path(g, nodes, x, 0)
    base = _walk_weight(g, 0, to_x) + _walk_weight(g, x, back)
    c = _walk_weight(g, x, cyc)
    reps = max(1, base // (-c) + 1)
    return to_x + cyc * reps + back


def _bfs_path(g: CalmnessGraph, nodes: set[int], src: int, dst: int) -> list[int]:
    prev = {src: None}
    queue = [src]
    for u in queue:
        if u == dst:
            break
        for a in range(1, len(g.weights[u]) + 1):
            if g.weights[u][a - 1] == inf:
                continue
            v = g.target(u, a)
            if v in nodes and v not in prev:
                prev[v] = (u, a)
                queue.append(v)
    out = []
    x = dst
    while x != src:
        u, a = prev[x]
        out.append(a)
        x = u
    return out[::-1]


def _unity_min(g: CalmnessGraph):
    nodes = _reach(g, 0) & _reach(g, 0, reverse=True)
    dist, pred, x = _shortest_from(g, 0, nodes)
    if x is not None:
        walk = _negative_cycle_walk(g, nodes, pred, x)
        return -inf, walk
    best, best_walk = inf, None
    for a in range(1, len(g.weights[0]) + 1):
        w = g.weights[0][a - 1]
        v = g.target(0, a)
        if w == inf or v not in nodes:
            continue
        d, p, _ = _shortest_from(g, v, nodes)
        if d[0] == inf:
            continue
        if w + d[0] < best:
            best = w + d[0]
            best_walk = [a] + _path(p, v, 0)
    return best, best_walk


def _tail_min(g: CalmnessGraph):
    T = g.tail
    best = [inf] * (g.size + len(g.weights[0]) + 1)
    choice = [None] * len(best)
    for t in range(T, len(best)):
        best[t] = 0
    for t in range(T - 1, -1, -1):
        for a in range(1, len(g.weights[t]) + 1):
            w = g.weights[t][a - 1]
            if w == inf or best[t + a] == inf:
                continue
            if w + best[t + a] < best[t]:
                best[t] = w + best[t + a]
                choice[t] = a
    if best[0] == inf:
        return inf, None
    walk, t = [], 0
    while t < T:
        walk.append(choice[t])
        t += choice[t]
    return best[0], walk


def min_clm(coeffs, start: PointClass, k: int, cap: int = 64):
    """(minimal calmness, SequenceSpec) over all sequences rooted at ``start``.

    A value of -inf comes with a negative closed walk as certificate.
    """
    coeffs = _coerce_all(coeffs)
    if not is_anxious(start, k):
        raise ValueError(f"{start} is calm for k={k}")
    best, spec = inf, None
    for orbit in _orbits_for(coeffs, start, k, cap):
        if orbit.start.is_unity:
            g = unity_graph(coeffs, orbit, k)
            val, walk = _unity_min(g)
            mode = UNITY_CYCLE
        else:
            if not orbit.horizon.certified:
                raise HorizonUncertified(f"orbit of {orbit.start} not certified within {cap} steps")
            g = tail_graph(coeffs, orbit)
            val, walk = _tail_min(g)
            mode = INFINITE_TAIL
        if spec is None or val < best:
            best = val
            spec = SequenceSpec(orbit.start, tuple(walk or ()), mode)
    return best, spec


# the decision ------------------------------------------------------------


def _anxious_poles(coeffs, k: int) -> list[PointClass]:
    if all(c.is_zero() for c in coeffs):
        return []
    return support_set(coeffs).anxious_pole_classes(k)


def is_precalm(coeffs, k: int, cap: int = 64, witness: bool = True) -> PrecalmVerdict:
    coeffs = _coerce_all(coeffs)
    support_set(coeffs)  # raises AllCoefficientsZero
    undecided = None
    for cls in _anxious_poles(coeffs, k):
        try:
            val, spec = min_clm(coeffs, cls, k, cap)
        except HorizonUncertified as exc:
            undecided = exc
            continue
        if val < 0:
            shown = clm_of_sequence(coeffs, spec, k, cap) if val == -inf else val
            return PrecalmVerdict(False, violation=(cls, spec, shown))
    if undecided is not None:
        raise Undecided(str(undecided))
    if not witness:
        return PrecalmVerdict(True)
    trace = WitnessTrace()
    h = _witness(coeffs, k, cap, trace)
    return PrecalmVerdict(True, witness=h, trace=trace)


# witnesses ---------------------------------------------------------------


def _class_table(coeffs, classes, period: int, n: int):
    """v[i][j] for coefficient i = 1..n at orbit class j (mod period)."""
    return {(i, j): valuation_at_class(coeffs[i - 1], classes[j].poly) for i in range(1, n + 1) for j in range(period)}


def _floyd(s, m: int):
    """All-pairs shortest walks on Z_m with edges j -> j+i of weight s[i][j]."""
    d = [[inf] * m for _ in range(m)]
    for j in range(m):
        d[j][j] = 0
    for i in range(1, m + 1):
        for j in range(m):
            w = s[i][j]
            t = (j + i) % m
            if w < d[j][t]:
                d[j][t] = w
    for x in range(m):
        for u in range(m):
            if d[u][x] == inf:
                continue
            for v in range(m):
                if d[u][x] + d[x][v] < d[u][v]:
                    d[u][v] = d[u][x] + d[x][v]
    return d


def _sigma(s, m: int) -> int:
    return -sum(s[i][j] for i in range(1, m + 1) for j in range(m) if s[i][j] < 0)


def _unity_orbit_factor(coeffs, orbit: Orbit, k: int, trace: WitnessTrace) -> Poly:
    """Polynomial clearing every pole along one root-of-unity orbit."""
    classes = orbit.steps
    m = len(classes)
    n = len(coeffs)
    v = _class_table(coeffs, classes, m, n)
    # fold coefficients with equal index mod m
    s = {i: [inf] * m for i in range(1, m + 1)}
    for (a, j), w in v.items():
        i = (a - 1) % m + 1
        s[i][j] = min(s[i][j], w)
    trace.log(stage="fold", orbit=[str(c) for c in classes], s={i: list(r) for i, r in s.items()})
    # zero fill
    p = sum(abs(x) for r in s.values() for x in r if x != inf)
    for i in s:
        if all(x == inf for x in s[i]):
            s[i] = [p] * m
    trace.log(stage="zero-fill", p=p, s={i: list(r) for i, r in s.items()})
    # normalize minimal calmnesses through each edge to zero
    changed = True
    while changed:
        changed = False
        d = _floyd(s, m)
        for b in range(1, m + 1):
            for a in range(m):
                val = s[b][a] + d[(a + b) % m][a]
                if val < 0:
                    raise NotPrecalm(f"negative closed walk through class {classes[a]}")
                if val > 0:
                    s[b][a] -= val
                    changed = True
                    break
            if changed:
                break
    trace.log(stage="normalize", s={i: list(r) for i, r in s.items()})
    # sigma reduction
    h = ONE
    sigma = _sigma(s, m)
    while sigma > 0:
        vmin = [min(s[i][j] for i in range(1, m + 1)) for j in range(m)]
        j = min(range(m), key=lambda x: (vmin[x], x))
        S = [i for i in range(1, m + 1) if s[i][j] == vmin[j]]
        targets = sorted({(j + i0) % m for i0 in S})
        for j0 in targets:
            h = h * classes[j0].poly
            for i in range(1, m + 1):
                for jj in range(m):
                    s[i][jj] += ((jj + i) % m == j0) - (jj == j0)
        new_sigma = _sigma(s, m)
        trace.log(stage="sigma", j=j, S=S, factor=[str(classes[t]) for t in targets], sigma_before=sigma, sigma_after=new_sigma)
        if new_sigma >= sigma:
            raise ConstructionFailed(f"sigma did not decrease ({sigma} -> {new_sigma})")
        sigma = new_sigma
    return h


def _first_pole(coeffs, k: int, unity: bool):
    for cls in _anxious_poles(coeffs, k):
        if cls.is_unity == unity:
            return cls
    return None


def _pole_piece(coeffs, cls: PointClass, k: int, cap: int) -> Orbit:
    for orbit in _orbits_for(coeffs, cls, k, cap):
        if any(valuation_at_class(c, orbit.start.poly) < 0 for c in coeffs):
            return orbit
    raise ConstructionFailed(f"no pole piece inside {cls}")  # pragma: no cover


def _witness(coeffs, k: int, cap: int, trace: WitnessTrace, budget: int = 10_000) -> Poly:
    h = ONE
    cur = list(coeffs)
    # (1) anxious roots of unity
    for _ in range(budget):
        cls = _first_pole(cur, k, unity=True)
        if cls is None:
            break
        orbit = _pole_piece(cur, cls, k, cap)
        f = _unity_orbit_factor(cur, orbit, k, trace)
        if f.is_one():
            raise ConstructionFailed(f"no progress at {cls}")
        h = h * f
        cur = act(f, cur, k)
    # (2) all other anxious poles
    for _ in range(budget):
        cls = _first_pole(cur, k, unity=False)
        if cls is None:
            break
        orbit = _pole_piece(cur, cls, k, cap)
        alpha = orbit.start
        i0 = next(i for i, c in enumerate(cur, start=1) if valuation_at_class(c, alpha.poly) < 0)
        steps = [alpha]
        j0 = None
        for j in range(1, cap * max(1, len(cur)) + 1):
            while len(steps) <= i0 * j:
                steps.append(orbit_step(steps[-1], k))
            if valuation_at_class(cur[i0 - 1], steps[i0 * j].poly) > 0:
                j0 = j
                break
        if j0 is None:
            raise HorizonUncertified(f"no zero of c_{i0} along the orbit of {alpha}")
        f = ONE
        for i in range(1, j0 + 1):
            f = f * steps[i0 * i].poly
        f = squarefree_part(f)
        trace.log(stage="eliminate", cls=str(alpha), i0=i0, j0=j0, factor=str(f))
        h = h * f
        cur = act(f, cur, k)
    if _anxious_poles(cur, k):
        raise ConstructionFailed("witness left an anxious pole")
    return h.monic()


def precalm_witness(coeffs, k: int, cap: int = 64, trace: WitnessTrace | None = None) -> Poly:
    coeffs = _coerce_all(coeffs)
    verdict = is_precalm(coeffs, k, cap, witness=False)
    if not verdict.precalm:
        cls, spec, val = verdict.violation
        raise NotPrecalm(f"calmness {val} along {spec.entries} from {cls}")
    return _witness(coeffs, k, cap, trace if trace is not None else WitnessTrace())


def is_calm(coeffs, k: int) -> bool:
    coeffs = _coerce_all(coeffs)
    return not _anxious_poles(coeffs, k)


def prepolynomialize(calm_coeffs, k: int) -> Poly:
    coeffs = _coerce_all(calm_coeffs)
    if all(c.is_zero() for c in coeffs):
        return ONE
    sup = support_set(coeffs)
    if sup.anxious_pole_classes(k):
        raise NotCalm(f"anxious poles at {[str(c) for c in sup.anxious_pole_classes(k)]}")
    h = ONE
    for i in range(len(coeffs)):
        need: dict = {}
        for ci, cls in enumerate(sup.classes):
            v = sup.valuation(ci, i)
            if v >= 0:
                continue
            key = 0 if cls.kind == ZERO_KIND else cls.order
            need[key] = max(need.get(key, 0), -v)
        for b, e in sorted(need.items()):
            if b == 0:
                H = Z
            else:
                q = igcd(k, b)
                H = Poly.monomial(b // q) - ONE
            h = h * H ** e
    out = act(h, coeffs, k)
    if not all(c.is_poly() for c in out):
        raise ConstructionFailed("prepolynomial factor left a pole")
    return h


def polynomialize(coeffs, k: int, cap: int = 64) -> Poly:
    coeffs = _coerce_all(coeffs)
    w = precalm_witness(coeffs, k, cap)
    return (prepolynomialize(act(w, coeffs, k), k) * w).monic()
