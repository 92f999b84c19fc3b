"""Gaussian elimination over exact scalars (Fractions or cyclotomic elements)."""
from __future__ import annotations

from fractions import Fraction


def _inverse(x):
    # Fraction(1) keeps plain ints exact; 1 / int would be a float
    return x.inverse() if hasattr(x, "inverse") else Fraction(1) / x


def rref(rows):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = _inverse(M[r][c])
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int | None = None, zero=0, one=1):
    """Basis of {x : rows . x = 0}."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    M, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [zero] * ncols
        x[f] = one
        for i, p in enumerate(pivots):
            x[p] = -M[i][f]
        basis.append(x)
    return basis


class IncrementalSpan:
    """Echelon basis that tests whether a new vector enlarges the span."""

    def __init__(self):
        self.rows: list[tuple[int, list]] = []  # (pivot column, row with 1 at pivot)

    def reduce(self, v):
        v = list(v)
        for p, row in self.rows:
            if p < len(v) and v[p] != 0:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        p = next((i for i, x in enumerate(v) if x != 0), None)
        if p is None:
            return False
        inv = _inverse(v[p])
        v = [x * inv for x in v]
        self.rows.append((p, v))
        return True

    def __len__(self):
        return len(self.rows)
