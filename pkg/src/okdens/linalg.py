"""Exact integer matrices: Bareiss determinants, Hermite normal form, and
rank of O_K matrices over residue fields.

The HNF here is row-style: unimodular row operations only, pivots positive,
every entry above a pivot reduced into [0, pivot), zero rows dropped, rows
ordered by pivot column.  That makes hnf() a canonical form: two inputs span
the same row lattice iff their HNFs are identical, and the lattice index in
Z^n of a full-rank span is the product of the pivots.

All arithmetic is exact over Python big ints; growth inside the Bareiss
elimination is polynomial because every division is exact by construction.
"""

from dataclasses import dataclass

from .errors import BadShape
from .ffpoly import poly_invmod, poly_mod, poly_mul, poly_sub
from .splitting import PrimeSplit, reduce_elem


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise BadShape(f"entries do not form a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        ent = tuple(tuple(int(x) for x in r) for r in rows)
        ncols = len(ent[0]) if ent else 0
        return cls(rows=len(ent), cols=ncols, entries=ent)

    def row_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def bareiss_det(m) -> int:
    """Exact determinant of a square integer matrix (IntMatrix or rows)."""
    if isinstance(m, IntMatrix):
        if m.rows != m.cols:
            raise BadShape(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
        a = m.row_lists()
    else:
        a = [list(r) for r in m]
        if any(len(r) != len(a) for r in a):
            raise BadShape("determinant needs a square matrix")
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n - 1):
        if a[c][c] == 0:
            for r in range(c + 1, n):
                if a[r][c]:
                    a[c], a[r] = a[r], a[c]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(c + 1, n):
            for j in range(c + 1, n):
                a[r][j] = (a[r][j] * a[c][c] - a[r][c] * a[c][j]) // prev
            a[r][c] = 0
        prev = a[c][c]
    return sign * a[n - 1][n - 1]


def hnf(m) -> IntMatrix:
    """Canonical row-style Hermite normal form (zero rows dropped).

    Accepts an IntMatrix or any iterable of equal-length integer rows.
    Rows are folded into a triangular accumulator by Euclidean elimination
    (gcd via repeated floor-division steps and pivot swaps), then entries
    above each pivot are reduced into [0, pivot).
    """
    if isinstance(m, IntMatrix):
        rows, cols = m.row_lists(), m.cols
    else:
        rows = [list(r) for r in m]
        cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise BadShape("ragged rows")

    accum: list[list[int] | None] = [None] * cols
    for row in rows:
        r = [int(x) for x in row]
        j = 0
        while j < cols:
            if r[j] == 0:
                j += 1
                continue
            pivot = accum[j]
            if pivot is None:
                if r[j] < 0:
                    r = [-x for x in r]
                accum[j] = r
                break
            q = r[j] // pivot[j]
            if q:
                r = [a - q * b for a, b in zip(r, pivot)]
            if r[j]:
                # 0 < r[j] < pivot[j]: continue the gcd with roles swapped
                accum[j], r = r, pivot
            else:
                j += 1

    pivot_cols = [j for j in range(cols) if accum[j] is not None]
    # reduce above-pivot entries, left to right so finished columns stay put
    for jb in pivot_cols:
        below = accum[jb]
        for ja in pivot_cols:
            if ja >= jb:
                break
            upper = accum[ja]
            q = upper[jb] // below[jb]
            if q:
                accum[ja] = [a - q * b for a, b in zip(upper, below)]
    return IntMatrix.from_rows([accum[j] for j in pivot_cols])


def hnf_pivots(h: IntMatrix) -> list[tuple[int, int]]:
    """[(pivot column, pivot value)] for a matrix already in HNF."""
    out = []
    for row in h.entries:
        for j, v in enumerate(row):
            if v:
                out.append((j, v))
                break
    return out


def rank_over_residue_field(split: PrimeSplit, i: int, rows) -> int:
    """Rank of a matrix of O_K elements over the residue field F_p[x]/(g_i).

    `rows` is a sequence of rows of power-basis coordinate tuples; entries are
    reduced through the split and eliminated by Gaussian elimination with
    inverses from the extended Euclid in F_p[x].
    """
    p = split.p
    g = split.factors[i][0].coeffs
    mat = [[reduce_elem(split, i, e) for e in row] for row in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    if any(len(r) != ncols for r in mat):
        raise BadShape("ragged rows")

    def rmul(a, b):
        return poly_mod(poly_mul(a, b, p), g, p)

    rank = 0
    top = 0
    for col in range(ncols):
        sel = next((r for r in range(top, len(mat)) if mat[r][col]), None)
        if sel is None:
            continue
        mat[top], mat[sel] = mat[sel], mat[top]
        inv = poly_invmod(mat[top][col], g, p)
        for r in range(top + 1, len(mat)):
            if mat[r][col]:
                factor = rmul(mat[r][col], inv)
                mat[r] = [poly_sub(mat[r][c], rmul(factor, mat[top][c]), p)
                          for c in range(ncols)]
        rank += 1
        top += 1
        if top == len(mat):
            break
    return rank
