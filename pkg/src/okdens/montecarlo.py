"""Seeded Monte-Carlo experiments, bound sweeps and brute-force densities.

Sampling contract (reproducible across backends, platforms and worker
counts): a 64-bit master seed is split into per-batch child seeds
child_b = SplitMix64(master XOR b) for batch index b; each batch of up to
1024 samples runs its own xoshiro256** generator seeded from child_b by four
successive SplitMix64 outputs.  Every matrix consumes its n*m*k coordinates
row-major (entries left to right, top to bottom; within an entry the power
basis coordinate index runs fastest), each coordinate drawn uniformly from
[-B, B) by unbiased rejection of the raw 64-bit stream onto 2B residues.
Sweeps derive per-bound seeds as master XOR SplitMix64(B), so any single row
of a sweep can be reproduced by a standalone experiment run.

Batches execute on a thread pool; per-batch generators make hit counts
independent of the worker count.  The int64 verdict kernel is used whenever
the exact growth bound allows, with any guard bail-outs settled one sample
at a time by the exact big-int path from the stored coordinates.
"""

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import BadBound, BadShape, BudgetExceeded
from .fieldcore import NumberField
from .unimodular import (MatrixOK, _index_from_minors, exact_verdict_from_flat,
                         get_plan, minors)
from .zeta import DEFAULT_PRIME_BOUND, EulerProductResult, predicted_density

BATCH_SIZE = 1024
BRUTE_BUDGET = 10**7
_BAIL_CAP = 4096
_MASK64 = (1 << 64) - 1

_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MIX1 = 0xBF58476D1CE4E5B9
_SM_MIX2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    """Reference SplitMix64 output for input x; mirrors the kernel bit for bit."""
    z = (x + _SM_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * _SM_MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _SM_MIX2) & _MASK64
    return z ^ (z >> 31)


class CoordStream:
    """Pure big-int xoshiro256** stream, the reference for the sampling kernel."""

    def __init__(self, child_seed: int):
        x = child_seed & _MASK64
        state = []
        for _ in range(4):
            x = (x + _SM_GAMMA) & _MASK64
            z = x
            z = ((z ^ (z >> 30)) * _SM_MIX1) & _MASK64
            z = ((z ^ (z >> 27)) * _SM_MIX2) & _MASK64
            state.append(z ^ (z >> 31))
        self._s = state

    def next_u64(self) -> int:
        s = self._s
        r = (s[1] * 5) & _MASK64
        res = (((r << 7) | (r >> 57)) & _MASK64) * 9 & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = ((s[3] << 45) | (s[3] >> 19)) & _MASK64
        return res

    def next_coord(self, bound: int) -> int:
        """Uniform draw from [-bound, bound) by unbiased rejection."""
        r = 2 * bound
        thresh = (1 << 64) % r
        while True:
            v = self.next_u64()
            if v >= thresh:
                return v % r - bound


def sample_matrix(field: NumberField, n: int, m: int, bound: int,
                  stream: CoordStream) -> MatrixOK:
    """Next matrix from the stream: n*m*k coordinates in the documented order."""
    if bound < 1:
        raise BadBound(f"box half-width must be >= 1, got {bound}")
    k = field.degree
    entries = tuple(
        tuple(tuple(stream.next_coord(bound) for _ in range(k)) for _ in range(m))
        for _ in range(n))
    return MatrixOK(field=field, n=n, m=m, entries=entries)


@dataclass(frozen=True)
class ExperimentReport:
    field: NumberField
    n: int
    m: int
    bound: int
    samples: int
    seed: int
    hits: int
    empirical: float
    predicted: EulerProductResult
    ci_half_width: float
    wall_time: float

    def to_json_dict(self) -> dict:
        out = {
            "field": list(self.field.coeffs),
            "n": self.n,
            "m": self.m,
            "B": self.bound,
            "samples": self.samples,
            "seed": self.seed,
            "hits": self.hits,
            "empirical": self.empirical,
            "predicted": self.predicted.to_json_dict(),
            "ci_half_width": self.ci_half_width,
            "wall_time": self.wall_time,
        }
        if self.field.warnings:
            out["warnings"] = list(self.field.warnings)
        return out


def _batch_hits_kernel(field, n, m, bound, child_seed, ns, plan) -> int:
    k = field.degree
    nc = n * m * k
    coords = np.empty((ns, nc), dtype=np.int64)
    kernels.sample_coords(np.uint64(child_seed), np.uint64(2 * bound), bound, coords)
    codes = np.empty(ns, dtype=np.int8)
    kernels.verdict_batch(coords, m, k, plan.red, plan.combos, plan.perms,
                          plan.psigns, plan.cfmul, plan.cf0, codes)
    hits = int(np.count_nonzero(codes == 1))
    if np.any(codes == 2):
        for idx in np.nonzero(codes == 2)[0]:
            if exact_verdict_from_flat(field, n, m, coords[idx]):
                hits += 1
    return hits


def _batch_hits_exact(field, n, m, bound, child_seed, ns) -> int:
    stream = CoordStream(child_seed)
    hits = 0
    for _ in range(ns):
        mat = sample_matrix(field, n, m, bound, stream)
        verdict, _ = _index_from_minors(field, minors(mat))
        hits += verdict
    return hits


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


def run_experiment(field: NumberField, n: int, m: int, bound: int, samples: int,
                   seed: int, *, workers: int | None = None,
                   prime_bound: int = DEFAULT_PRIME_BOUND) -> ExperimentReport:
    """Seeded Monte-Carlo estimate of the unimodular density, with prediction.

    Identical (field, n, m, bound, samples, seed) always produce identical
    hit counts, whatever the backend or worker count.
    """
    if bound < 1:
        raise BadBound(f"box half-width must be >= 1, got {bound}")
    if samples < 1:
        raise BadBound(f"sample count must be >= 1, got {samples}")
    if n < 1 or n >= m:
        raise BadShape(f"experiments need 1 <= n < m, got n={n}, m={m}")
    seed &= _MASK64
    t0 = time.perf_counter()
    predicted = predicted_density(field, n, m, prime_bound)

    plan = get_plan(field, n, m)
    use_kernel = plan is not None and plan.safe_for(bound)
    nbatches = (samples + BATCH_SIZE - 1) // BATCH_SIZE

    def one_batch(b: int) -> int:
        child = splitmix64(seed ^ b)
        ns = min(BATCH_SIZE, samples - b * BATCH_SIZE)
        if use_kernel:
            return _batch_hits_kernel(field, n, m, bound, child, ns, plan)
        return _batch_hits_exact(field, n, m, bound, child, ns)

    nworkers = workers if workers else default_workers()
    if nworkers == 1 or nbatches == 1:
        hits = sum(one_batch(b) for b in range(nbatches))
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            hits = sum(pool.map(one_batch, range(nbatches)))

    empirical = hits / samples
    ci = 3.0 * (empirical * (1.0 - empirical) / samples) ** 0.5
    return ExperimentReport(field=field, n=n, m=m, bound=bound, samples=samples,
                            seed=seed, hits=hits, empirical=empirical,
                            predicted=predicted, ci_half_width=ci,
                            wall_time=time.perf_counter() - t0)


def sweep_bounds(field: NumberField, n: int, m: int, bounds, samples: int,
                 seed: int, *, workers: int | None = None,
                 prime_bound: int = DEFAULT_PRIME_BOUND) -> list[ExperimentReport]:
    """One experiment per bound, each with its derived seed master XOR SplitMix64(B)."""
    seed &= _MASK64
    out = []
    for b in bounds:
        row_seed = seed ^ splitmix64(b)
        out.append(run_experiment(field, n, m, b, samples, row_seed,
                                  workers=workers, prime_bound=prime_bound))
    return out


SWEEP_CSV_HEADER = "field,n,m,B,N,seed,hits,empirical,predicted,tail_bound,ci_half_width"


def write_sweep_csv(reports, fh) -> None:
    """Write sweep rows in the documented CSV schema to an open text file."""
    import csv
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_CSV_HEADER.split(","))
    for r in reports:
        w.writerow([r.field.label(), r.n, r.m, r.bound, r.samples, r.seed, r.hits,
                    repr(r.empirical), repr(r.predicted.value),
                    repr(r.predicted.tail_bound), repr(r.ci_half_width)])


def brute_force_density(field: NumberField, n: int, m: int, bound: int) -> Fraction:
    """Exact unimodular fraction over the whole coordinate box [-B, B)^(n*m*k).

    Raises BudgetExceeded when the box holds more than BRUTE_BUDGET matrices.
    """
    if bound < 1:
        raise BadBound(f"box half-width must be >= 1, got {bound}")
    if n > m:
        raise BadShape(f"brute force needs n <= m, got {n}x{m}")
    k = field.degree
    nc = n * m * k
    total = (2 * bound) ** nc
    if total > BRUTE_BUDGET:
        raise BudgetExceeded(
            f"(2B)^(n*m*k) = {total} exceeds the enumeration budget {BRUTE_BUDGET}")

    plan = get_plan(field, n, m)
    if plan is not None and plan.safe_for(bound):
        bailed = np.empty(_BAIL_CAP, dtype=np.int64)
        hits, nb = kernels.brute_count(total, 2 * bound, bound, n, m, k,
                                       plan.red, plan.combos, plan.perms,
                                       plan.psigns, plan.cfmul, plan.cf0, bailed)
        hits = int(hits)
        if nb == 0:
            return Fraction(hits, total)
        if nb <= _BAIL_CAP:
            for idx in bailed[:nb]:
                if exact_verdict_from_flat(field, n, m, _decode_box(int(idx), nc, bound)):
                    hits += 1
            return Fraction(hits, total)
        # overflow of the bail buffer: fall through to the exact loop

    hits = 0
    for idx in range(total):
        if exact_verdict_from_flat(field, n, m, _decode_box(idx, nc, bound)):
            hits += 1
    return Fraction(hits, total)


def _decode_box(idx: int, nc: int, bound: int):
    """Base-2B digits of idx as coordinates, last coordinate fastest."""
    row = [0] * nc
    two_b = 2 * bound
    for c in range(nc - 1, -1, -1):
        idx, digit = divmod(idx, two_b)
        row[c] = digit - bound
    return row
