"""Accelerated kernels against the exact big-int reference paths."""

import os
import subprocess
import sys

import numpy as np
import pytest

from okdens import kernels
from okdens._accel import HAS_NUMBA, NUMBA_ENV_FLAG
from okdens.montecarlo import CoordStream, sample_matrix, splitmix64
from okdens.unimodular import (MatrixOK, exact_verdict_from_flat, flat_coords,
                               get_plan, is_unimodular)
from okdens.splitting import split_prime


def test_verdict_batch_matches_exact(all_fields):
    shapes = {"Q": (2, 4), "Q(sqrt2)": (2, 3), "x^3+x+1": (1, 3),
              "x^5-13x-7": (1, 2)}
    for fname, field in all_fields.items():
        n, m = shapes[fname]
        plan = get_plan(field, n, m)
        assert plan is not None
        k = field.degree
        rows = 256
        coords = np.empty((rows, n * m * k), dtype=np.int64)
        kernels.sample_coords(np.uint64(splitmix64(5)), np.uint64(6),
                              np.int64(3), coords)
        out = np.empty(rows, dtype=np.int8)
        kernels.verdict_batch(coords, plan.m, plan.field.degree, plan.red,
                              plan.combos, plan.perms, plan.psigns,
                              plan.cfmul, plan.cf0, out)
        for r in range(rows):
            want = exact_verdict_from_flat(field, n, m, coords[r])
            got = out[r]
            if got == 2:
                continue  # guarded bail; the driver re-checks these exactly
            assert bool(got) == want, f"{fname} row {r}"


def test_check_single_matches_is_unimodular(field_sqrt2):
    plan = get_plan(field_sqrt2, 2, 3)
    stream = CoordStream(31337)
    for _ in range(200):
        mat = sample_matrix(field_sqrt2, 2, 3, 4, stream)
        flat = flat_coords(mat)
        assert flat is not None
        pivots = np.empty(2, dtype=np.int64)
        code = kernels.check_single(flat, plan.m, plan.field.degree, plan.red,
                                    plan.combos, plan.perms, plan.psigns,
                                    plan.cfmul, plan.cf0, pivots)
        rep = is_unimodular(mat)
        if code != 2:
            assert bool(code) == rep.verdict
            if code == 1:
                assert int(pivots.prod()) == 1


def test_plan_safety_bounds(field_quintic, field_q):
    plan = get_plan(field_quintic, 4, 5)
    assert plan is not None
    b = plan.max_safe_bound()
    assert b >= 3
    assert plan.safe_for(b)
    assert not plan.safe_for(b + 1)
    # integers have huge headroom
    pz = get_plan(field_q, 1, 2)
    assert pz.max_safe_bound() > 10**6


def test_split_degree_counts_matches_splitting(all_fields):
    from okdens.primes import sieve_primes
    for field in all_fields.values():
        k = field.degree
        primes = [int(p) for p in sieve_primes(2000) if field.disc % int(p)]
        parr = np.array(primes, dtype=np.int64)
        counts = np.zeros((len(primes), k), dtype=np.uint8)
        redc = np.empty((len(primes), k + 1), dtype=np.int64)
        for i, c in enumerate(field.coeffs):
            redc[:, i] = np.mod(c, parr)
        kernels.split_degree_counts(parr, redc, np.int64(k), counts)
        for idx, p in enumerate(primes):
            split = split_prime(field, p)
            want = [0] * k
            for d in split.residue_degrees():
                want[d - 1] += 1
            assert counts[idx].tolist() == want, f"{field.label()} p={p}"


def test_dd_arithmetic_precision():
    hi, lo = kernels.dd_div(1.0, 0.0, 3.0, 0.0)
    # hi + lo approximates 1/3 to ~2^-106
    from fractions import Fraction
    err = abs(Fraction(hi) + Fraction(lo) - Fraction(1, 3))
    assert err < Fraction(1, 10**30)
    ph, pl = kernels.dd_powi(*kernels.dd_div(1.0, 0.0, 7.0, 0.0), 11)
    err2 = abs(Fraction(ph) + Fraction(pl) - Fraction(1, 7**11))
    assert err2 < Fraction(1, 7**11) * Fraction(1, 10**30)


def test_dd_mul_exactness_small_ints():
    h, l = kernels.dd_mul(3.0, 0.0, 5.0, 0.0)
    assert h == 15.0 and l == 0.0
    h, l = kernels.dd_add(2.0**53, 0.0, 1.0, 0.0)
    # the unit lost by double rounding is carried in the low word
    assert h + l == 2.0**53 + 1 and l != 0.0


def test_backend_flag_reports():
    # whichever way this process was started, the flag and module agree
    disabled = os.environ.get(NUMBA_ENV_FLAG, "") not in ("", "0")
    if disabled:
        assert not HAS_NUMBA


@pytest.mark.skipif(not HAS_NUMBA, reason="jit backend unavailable")
def test_pure_backend_subprocess_equality(tmp_path):
    """The numpy fallback must reproduce jit results bit for bit."""
    script = tmp_path / "probe.py"
    script.write_text(
        "import json, sys\n"
        "from okdens import parse_field, run_experiment, predicted_density\n"
        "field = parse_field('x^3+x+1')\n"
        "rep = run_experiment(field, 2, 3, 3, 3000, 424242, workers=2)\n"
        "r = predicted_density(field, 2, 3, 10**4)\n"
        "print(json.dumps([rep.hits, r.value_hi, r.value_lo]))\n")
    outs = []
    for mode in ("0", "1"):
        env = dict(os.environ, **{NUMBA_ENV_FLAG: mode})
        res = subprocess.run([sys.executable, str(script)], env=env,
                             capture_output=True, text=True, check=True)
        outs.append(res.stdout.strip().split("\n")[-1])
    assert outs[0] == outs[1]
