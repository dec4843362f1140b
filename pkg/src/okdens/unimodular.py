"""Deciding rectangular unimodularity over O_K = Z[theta].

An n x m matrix M (n <= m) with entries in O_K is unimodular when its n x n
minors generate the unit ideal.  Two independent routes decide this:

* the HNF route (`is_unimodular`): list all minors, stack the Z-module rows
  theta^t * minor for every minor, and compute the Hermite normal form of the
  resulting integer lattice inside Z^k.  The minor ideal is the unit ideal
  iff that lattice is all of Z^k, i.e. every HNF pivot equals 1; the product
  of pivots is the ideal's index (norm), reported exactly.

* the mod-p route (`is_unimodular_modp`): any obstruction lives over a prime
  p dividing gcd of the minor norms, so factor that gcd and check that M has
  full row rank over every residue field above each candidate p.

The HNF route carries a guarded int64 fast path (okdens.kernels) selected
when an exact worst-case growth bound fits comfortably inside int64; any
guard trip falls back to the exact big-int path, so results never depend on
which path ran.  The mod-p route is kept fully exact and shares no verdict
code with the fast path, which makes the two routes genuine cross-checks.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import BadShape, DegreeMismatch
from .fieldcore import AlgElem, Maximality, NumberField, parse_field
from .ffpoly import PolyModP
from .linalg import hnf, hnf_pivots, rank_over_residue_field
from .primes import factorize
from .splitting import split_prime

# static eligibility ceiling for the int64 fast path; dynamic guards inside
# the kernels cover everything this exact precomputation cannot see
STATIC_LIMIT = 1 << 59

METHOD_HNF = "MinorIdealHNF"
METHOD_MODP = "ModPRank"


class _Infinite:
    """Index of a rank-deficient minor lattice."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinite"


INFINITE = _Infinite()


@dataclass(frozen=True)
class MatrixOK:
    """An n x m matrix over O_K; entries are power-basis coordinate tuples."""
    field: NumberField
    n: int
    m: int
    entries: tuple[tuple[AlgElem, ...], ...]

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise BadShape(f"matrix must be at least 1x1, got {self.n}x{self.m}")
        if len(self.entries) != self.n or any(len(r) != self.m for r in self.entries):
            raise BadShape(f"entries do not form a {self.n}x{self.m} matrix")
        k = self.field.degree
        for row in self.entries:
            for e in row:
                if len(e) != k:
                    raise DegreeMismatch(
                        f"entry has {len(e)} coordinates, field degree is {k}")

    @classmethod
    def from_rows(cls, field: NumberField, rows) -> "MatrixOK":
        ent = tuple(tuple(field.elem(e) for e in row) for row in rows)
        n = len(ent)
        m = len(ent[0]) if ent else 0
        return cls(field=field, n=n, m=m, entries=ent)


@dataclass(frozen=True)
class UnimodReport:
    verdict: bool
    index: object            # int, INFINITE, or None when not computed
    witness: tuple[int, PolyModP] | None
    method: str
    warnings: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        if self.index is None:
            idx = None
        elif self.index is INFINITE:
            idx = "infinite"
        else:
            idx = int(self.index)
        wit = None
        if self.witness is not None:
            p, g = self.witness
            wit = {"p": p, "g": list(g.coeffs)}
        out = {"verdict": self.verdict, "index": idx, "witness": wit, "method": self.method}
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


# ---------------------------------------------------------------------------
# JSON matrix format
# ---------------------------------------------------------------------------

def matrix_from_json(obj: dict, *, assume_irreducible: bool = False,
                     allow_nonmaximal: bool = False) -> MatrixOK:
    """Parse {"field": [c0..ck], "n": .., "m": .., "entries": [[[coords]..]..]}."""
    try:
        coeffs = obj["field"]
        n = int(obj["n"])
        m = int(obj["m"])
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise BadShape(f"matrix JSON missing or malformed field: {exc}") from None
    field = parse_field(coeffs, assume_irreducible=assume_irreducible,
                        allow_nonmaximal=allow_nonmaximal)
    mat = MatrixOK.from_rows(field, entries)
    if mat.n != n or mat.m != m:
        raise BadShape(f"declared shape {n}x{m} does not match entries "
                       f"({mat.n}x{mat.m})")
    return mat


def matrix_to_json(mat: MatrixOK) -> dict:
    return {
        "field": list(mat.field.coeffs),
        "n": mat.n,
        "m": mat.m,
        "entries": [[list(e) for e in row] for row in mat.entries],
    }


# ---------------------------------------------------------------------------
# exact minors and the HNF route
# ---------------------------------------------------------------------------

def _det_ok(field: NumberField, mat) -> AlgElem:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    zero = field.zero()
    total = zero
    for j in range(n):
        a = mat[0][j]
        if a == zero:
            continue
        sub = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = field.mul(a, _det_ok(field, sub))
        total = field.add(total, term) if j % 2 == 0 else field.sub(total, term)
    return total


def minors(mat: MatrixOK) -> list[AlgElem]:
    """All n x n minors, column subsets in lexicographic order."""
    if mat.n > mat.m:
        raise BadShape(f"minors need n <= m, got {mat.n}x{mat.m}")
    out = []
    rows = [list(r) for r in mat.entries]
    for cols in itertools.combinations(range(mat.m), mat.n):
        sel = [[row[c] for c in cols] for row in rows]
        out.append(_det_ok(mat.field, sel))
    return out


def _index_from_minors(field: NumberField, mins) -> tuple[bool, object]:
    """(verdict, index) of the Z-lattice spanned by theta^t * minor rows."""
    k = field.degree
    zero = field.zero()
    rows = []
    for a in mins:
        if a == zero:
            continue
        cur = a
        for t in range(k):
            if t:
                cur = field.theta_mul(cur)
            rows.append(cur)
    if not rows:
        return False, INFINITE
    h = hnf(rows)
    piv = hnf_pivots(h)
    if len(piv) < k:
        return False, INFINITE
    index = 1
    for _, v in piv:
        index *= v
    return index == 1, index


def _find_witness(mat: MatrixOK, candidate_primes) -> tuple[int, PolyModP] | None:
    """First (p, g_i) whose residue field sees a rank drop, scanning in order."""
    allow = mat.field.maximality is Maximality.ASSUMED_BY_USER
    for p in sorted(candidate_primes):
        split = split_prime(mat.field, p, allow_unverified=allow)
        for i, (g, _) in enumerate(split.factors):
            if rank_over_residue_field(split, i, mat.entries) < mat.n:
                return (p, g)
    return None


def is_unimodular(mat: MatrixOK) -> UnimodReport:
    """HNF-route unimodularity report with exact index and witness.

    n = m is permitted (unimodular iff the determinant is a unit); n > m is
    rejected.  A non-unimodular matrix with finite index gets a witness prime
    ideal (p, g) at which the matrix loses rank mod p.
    """
    if mat.n > mat.m:
        raise BadShape(f"is_unimodular needs n <= m, got {mat.n}x{mat.m}")

    fast = _fast_verdict(mat)
    if fast is not None:
        verdict, index = fast
    else:
        verdict, index = _index_from_minors(mat.field, minors(mat))

    witness = None
    if not verdict and index is not INFINITE:
        witness = _find_witness(mat, factorize(index).keys())
    return UnimodReport(verdict=verdict, index=index, witness=witness,
                        method=METHOD_HNF, warnings=mat.field.warnings)


def is_unimodular_modp(mat: MatrixOK, *, with_index: bool = False) -> UnimodReport:
    """Mod-p-route report: norm gcd of the minors, then residue-field ranks.

    Requires n < m (the strict rectangular case).  The index is not part of
    this method; pass with_index=True to have it attached from the HNF route.
    """
    if mat.n >= mat.m:
        raise BadShape(f"is_unimodular_modp needs n < m, got {mat.n}x{mat.m}")
    field = mat.field
    mins = minors(mat)
    g = 0
    for a in mins:
        g = math.gcd(g, abs(field.norm(a)))
        if g == 1:
            break

    index = None
    witness = None
    if g == 0:
        # every minor is zero
        verdict = False
        index = INFINITE
    elif g == 1:
        verdict = True
    else:
        witness = _find_witness(mat, factorize(g).keys())
        verdict = witness is None
    if with_index and index is None:
        _, index = _index_from_minors(field, mins)
    return UnimodReport(verdict=verdict, index=index, witness=witness,
                        method=METHOD_MODP, warnings=field.warnings)


# ---------------------------------------------------------------------------
# int64 kernel fast path
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelPlan:
    """Precomputed arrays and exact growth bounds for the verdict kernels."""
    field: NumberField
    n: int
    m: int
    red: np.ndarray        # fold rows, shape (max(k-1, 1), k)
    combos: np.ndarray     # int64 (ncomb, n)
    perms: np.ndarray      # int64 (nperm, n)
    psigns: np.ndarray     # int64 (nperm,)
    cfmul: float
    cf0: float
    cf_int: int            # exact integer versions of the guard factors
    cf0_int: int

    def max_safe_bound(self) -> int:
        """Largest coordinate magnitude with statically safe int64 arithmetic."""
        lo, hi = 0, 1
        while self._worst(hi) <= STATIC_LIMIT:
            hi *= 2
            if hi > 1 << 62:
                break
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self._worst(mid) <= STATIC_LIMIT:
                lo = mid
            else:
                hi = mid
        return lo

    def safe_for(self, maxabs: int) -> bool:
        return 0 <= maxabs and self._worst(maxabs) <= STATIC_LIMIT

    def _worst(self, b: int) -> int:
        """Exact bound on any intermediate magnitude up to the HNF row stage."""
        if b == 0:
            return 0
        n, k = self.n, self.field.degree
        prod = b
        for _ in range(n - 1):
            prod = self.cf_int * prod * b
        minor = math.factorial(n) * prod
        return self.cf0_int ** (k - 1) * minor


@lru_cache(maxsize=256)
def get_plan(field: NumberField, n: int, m: int) -> KernelPlan | None:
    """Kernel plan for the shape, or None when the field data overflows int64."""
    k = field.degree
    rows = field.power_rows
    if any(abs(c) >= STATIC_LIMIT for row in rows for c in row):
        return None
    red = np.array(rows, dtype=np.int64).reshape(max(k - 1, 1), k)
    lex = list(itertools.combinations(range(m), n))
    # visit minors ends-inward: lexicographic neighbors share n-1 columns and
    # keep correlated determinants, which delays the unit-index early exit
    order = []
    lo, hi = 0, len(lex) - 1
    while lo <= hi:
        order.append(lex[lo])
        if lo != hi:
            order.append(lex[hi])
        lo += 1
        hi -= 1
    combos = np.array(order, dtype=np.int64)
    perm_list = []
    sign_list = []
    for perm in itertools.permutations(range(n)):
        perm_list.append(perm)
        sign_list.append(_perm_sign(perm))
    perms = np.array(perm_list, dtype=np.int64)
    psigns = np.array(sign_list, dtype=np.int64)
    if k == 1:
        cf_int = 1
    else:
        colsums = [sum(abs(rows[t][j]) for t in range(k - 1)) for j in range(k)]
        cf_int = k * (1 + max(colsums))
    cf0_int = 1 + max(abs(c) for c in rows[0])
    return KernelPlan(field=field, n=n, m=m, red=red, combos=combos, perms=perms,
                      psigns=psigns, cfmul=float(cf_int), cf0=float(cf0_int),
                      cf_int=cf_int, cf0_int=cf0_int)


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def flat_coords(mat: MatrixOK) -> np.ndarray | None:
    """Entries as one int64 row in kernel order, or None when they overflow."""
    k = mat.field.degree
    out = np.empty(mat.n * mat.m * k, dtype=np.int64)
    pos = 0
    for row in mat.entries:
        for e in row:
            for c in e:
                if abs(c) >= 1 << 62:
                    return None
                out[pos] = c
                pos += 1
    return out


def _fast_verdict(mat: MatrixOK) -> tuple[bool, object] | None:
    """Kernel verdict and exact index, or None to use the exact path."""
    plan = get_plan(mat.field, mat.n, mat.m)
    if plan is None:
        return None
    row = flat_coords(mat)
    if row is None:
        return None
    maxabs = int(np.max(np.abs(row))) if row.size else 0
    if not plan.safe_for(maxabs):
        return None
    k = mat.field.degree
    pivots = np.empty(k, dtype=np.int64)
    code = kernels.check_single(row, mat.m, k, plan.red, plan.combos, plan.perms,
                                plan.psigns, plan.cfmul, plan.cf0, pivots)
    if code == 2:
        return None
    if code == 1:
        return True, 1
    if np.any(pivots == 0):
        return False, INFINITE
    index = 1
    for v in pivots:
        index *= int(v)
    return False, index


def exact_verdict_from_flat(field: NumberField, n: int, m: int, row) -> bool:
    """Exact unimodularity verdict from a flat kernel-order coordinate row."""
    k = field.degree
    it = iter(int(v) for v in row)
    entries = tuple(tuple(tuple(next(it) for _ in range(k)) for _ in range(m))
                    for _ in range(n))
    mat = MatrixOK(field=field, n=n, m=m, entries=entries)
    verdict, _ = _index_from_minors(field, minors(mat))
    return verdict
