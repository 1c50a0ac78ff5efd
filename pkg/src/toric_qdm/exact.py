"""Exact rational and integer linear algebra used across the engine.

Everything here works on ``fractions.Fraction`` or ``int`` so that no
floating point ever enters a certificate.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

Row = Dict[int, Fraction]

RHS = -1  # column key used for the augmented right-hand side


class SparseSystem:
    """Incremental sparse Gauss-Jordan elimination over Q.

    Rows are dicts ``{column: coefficient}``; the key ``RHS`` holds the
    right-hand side.  Pivot rows are kept fully reduced so a solution can be
    read off directly.
    """

    def __init__(self) -> None:
        self.pivots: Dict[int, Row] = {}
        self.inconsistent = False

    def _reduce(self, row: Row) -> Row:
        row = {k: v for k, v in row.items() if v}
        for col in [c for c in row if c in self.pivots]:
            coef = row.get(col)
            if not coef:
                continue
            for k, v in self.pivots[col].items():
                nv = row.get(k, 0) - coef * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: Row) -> bool:
        """Add an equation; returns False if it was dependent."""
        row = self._reduce(row)
        cols = [c for c in row if c != RHS]
        if not cols:
            if row.get(RHS):
                self.inconsistent = True
            return False
        p = min(cols)
        inv = 1 / Fraction(row[p])
        row = {k: Fraction(v) * inv for k, v in row.items()}
        for other in self.pivots.values():
            coef = other.get(p)
            if coef:
                for k, v in row.items():
                    nv = other.get(k, 0) - coef * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        self.pivots[p] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solution(self, ncols: Optional[int] = None) -> Optional[Dict[int, Fraction]]:
        """A particular solution with free variables set to zero."""
        if self.inconsistent:
            return None
        return {p: row.get(RHS, Fraction(0)) for p, row in self.pivots.items()
                if row.get(RHS)}


def rank(rows: Sequence[Sequence]) -> int:
    sys = SparseSystem()
    for r in rows:
        sys.add({j: Fraction(v) for j, v in enumerate(r) if v})
    return sys.rank


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """Solve A x = b exactly; returns one solution or None."""
    ncols = len(rows[0]) if rows else 0
    sys = SparseSystem()
    for r, b in zip(rows, rhs):
        row = {j: Fraction(v) for j, v in enumerate(r) if v}
        if b:
            row[RHS] = Fraction(b)
        sys.add(row)
    sol = sys.solution()
    if sol is None:
        return None
    return [sol.get(j, Fraction(0)) for j in range(ncols)]


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Rational basis of {x : A x = 0}."""
    sys = SparseSystem()
    for r in rows:
        sys.add({j: Fraction(v) for j, v in enumerate(r) if v})
    free = [j for j in range(ncols) if j not in sys.pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for p, row in sys.pivots.items():
            x[p] = -row.get(f, Fraction(0))
        basis.append(x)
    return basis


def det(mat: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(v) for v in r] for r in mat]
    n = len(m)
    out = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i]), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            out = -out
        out *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            if f:
                for c in range(i, n):
                    m[r][c] -= f * m[i][c]
    return out


def integer_kernel(mat: Sequence[Sequence[int]], ncols: int) -> List[Tuple[int, ...]]:
    """Z-basis of {d in Z^ncols : mat d = 0}.

    Column-style Hermite reduction of ``mat`` while tracking the unimodular
    column transform; columns of the transform that end up zero span the
    kernel lattice.  The result is then LLL-free but size-reduced so the
    vectors stay small and deterministic.
    """
    a = [list(map(int, r)) for r in mat]
    m = len(a)
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # columns

    def colop_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        u[i], u[j] = u[j], u[i]

    def colop_add(dst, src, f):  # col dst += f * col src
        for r in a:
            r[dst] += f * r[src]
        ud, us = u[dst], u[src]
        for k in range(ncols):
            ud[k] += f * us[k]

    piv_col = 0
    for row in range(m):
        if piv_col >= ncols:
            break
        while True:
            nz = [c for c in range(piv_col, ncols) if a[row][c]]
            if not nz:
                break
            c0 = min(nz, key=lambda c: abs(a[row][c]))
            if c0 != piv_col:
                colop_swap(c0, piv_col)
            done = True
            for c in range(piv_col + 1, ncols):
                if a[row][c]:
                    f = a[row][c] // a[row][piv_col]
                    colop_add(c, piv_col, -f)
                    if a[row][c]:
                        done = False
            if done:
                break
        if any(a[row][c] for c in range(piv_col, ncols)):
            piv_col += 1
    kernel = [tuple(u[c]) for c in range(piv_col, ncols)]
    return _size_reduce(kernel)


def _size_reduce(vecs: List[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    """Cheap pairwise reduction keeping a Z-basis; makes output small."""
    vecs = [list(v) for v in vecs]
    changed = True
    while changed:
        changed = False
        for i in range(len(vecs)):
            for j in range(len(vecs)):
                if i == j:
                    continue
                for s in (1, -1):
                    cand = [x - s * y for x, y in zip(vecs[i], vecs[j])]
                    if sum(map(abs, cand)) < sum(map(abs, vecs[i])):
                        vecs[i] = cand
                        changed = True
    out = []
    for v in vecs:
        lead = next((x for x in v if x), 0)
        out.append(tuple(-x for x in v) if lead < 0 else tuple(v))
    return sorted(out, key=lambda v: (sum(map(abs, v)), [-x for x in v]))


def unimodular_rank_check(vecs: Sequence[Sequence[int]], lattice: Sequence[Sequence[int]]) -> bool:
    """True iff ``vecs`` is a Z-basis of the lattice spanned by ``lattice``.

    Both are expressed in the same ambient coordinates.  We solve for the
    coordinates of ``vecs`` in the lattice basis and require an integer
    matrix with determinant +-1.
    """
    if len(vecs) != len(lattice):
        return False
    if not lattice:
        return True
    cols = list(zip(*lattice))  # ambient x r
    coords = []
    for v in vecs:
        x = solve(cols, v)
        if x is None or any(c.denominator != 1 for c in x):
            return False
        # verify exactness (solve may ignore dependent rows; check fully)
        if any(sum(cols[i][j] * x[j] for j in range(len(x))) != v[i]
               for i in range(len(v))):
            return False
        coords.append(x)
    return abs(det(coords)) == 1


def primitive_int(v: Sequence[int]) -> Tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(v)
    return tuple(int(x) // g for x in v)


# ---------------------------------------------------------------------------
# Fourier-Motzkin feasibility


def fm_point(ineqs: Sequence[Tuple[Sequence, object]], nvars: int) -> Optional[List[Fraction]]:
    """Find x with a.x >= b for every (a, b) in ``ineqs``, or None.

    Fourier-Motzkin elimination followed by back-substitution.  Each
    variable is set to the integer closest to zero inside its feasible
    interval when one exists, otherwise to the interval midpoint or the
    finite endpoint.
    """
    system = [([Fraction(c) for c in a], Fraction(b)) for a, b in ineqs]
    stages = []
    cur = system
    for var in reversed(range(nvars)):
        stages.append((var, cur))
        pos, neg, zero = [], [], []
        for a, b in cur:
            if a[var] > 0:
                pos.append((a, b))
            elif a[var] < 0:
                neg.append((a, b))
            else:
                zero.append((a, b))
        nxt = list(zero)
        seen = set()
        for ap, bp in pos:
            for an, bn in neg:
                fp, fn = ap[var], -an[var]
                a = [fn * x + fp * y for x, y in zip(ap, an)]
                b = fn * bp + fp * bn
                key = _norm_ineq(a, b)
                if key not in seen:
                    seen.add(key)
                    nxt.append((a, b))
        cur = nxt
    for a, b in cur:
        if b > 0:
            return None
    x = [Fraction(0)] * nvars
    for var, sysv in reversed(stages):
        lo, hi = None, None
        for a, b in sysv:
            if a[var] == 0:
                continue
            rest = sum(a[j] * x[j] for j in range(nvars) if j != var)
            bound = (b - rest) / a[var]
            if a[var] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        x[var] = _pick(lo, hi)
    return x


def _norm_ineq(a, b):
    g = [abs(c) for c in a if c]
    if not g:
        return (tuple(a), b)
    s = max(g)
    return (tuple(c / s for c in a), b / s)


def _pick(lo: Optional[Fraction], hi: Optional[Fraction]) -> Fraction:
    import math
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return Fraction(min(0, math.floor(hi)))
    if hi is None:
        return Fraction(max(0, math.ceil(lo)))
    if lo <= 0 <= hi:
        return Fraction(0)
    cand = math.ceil(lo) if lo > 0 else math.floor(hi)
    if lo <= cand <= hi:
        return Fraction(cand)
    return (lo + hi) / 2


def in_cone(target: Sequence, generators: Sequence[Sequence]) -> Optional[List[Fraction]]:
    """Nonnegative rational coefficients expressing ``target`` in ``generators``.

    Equalities are eliminated by Gauss-Jordan first; the remaining free
    parameters go through Fourier-Motzkin.
    """
    m = len(generators)
    if m == 0:
        return [] if all(t == 0 for t in target) else None
    dim = len(target)
    rows = [[generators[j][i] for j in range(m)] for i in range(dim)]
    sys = SparseSystem()
    for i in range(dim):
        row = {j: Fraction(rows[i][j]) for j in range(m) if rows[i][j]}
        if target[i]:
            row[RHS] = Fraction(target[i])
        sys.add(row)
    if sys.inconsistent:
        return None
    free = [j for j in range(m) if j not in sys.pivots]
    # x_p = rhs_p - sum_f row_p[f] x_f ; require x_p >= 0 and x_f >= 0
    ineqs = []
    for p, row in sys.pivots.items():
        a = [-row.get(f, Fraction(0)) for f in free]
        ineqs.append((a, -row.get(RHS, Fraction(0))))
    for i in range(len(free)):
        a = [Fraction(int(i == j)) for j in range(len(free))]
        ineqs.append((a, Fraction(0)))
    y = fm_point(ineqs, len(free))
    if y is None:
        return None
    x = [Fraction(0)] * m
    for i, f in enumerate(free):
        x[f] = y[i]
    for p, row in sys.pivots.items():
        x[p] = row.get(RHS, Fraction(0)) - sum(row.get(f, 0) * x[f] for f in free)
    return x
