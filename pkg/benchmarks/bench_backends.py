"""Compare the compiled and pure-python kernel backends.

Runs the same four workloads under the jit backend and under
OKDENS_NO_NUMBA=1, checks that both produce identical outputs, and prints a
timing table.  The backend is chosen at import time, so each measurement runs
in a fresh subprocess of this script.

    python3 benchmarks/bench_backends.py            # full comparison
    python3 benchmarks/bench_backends.py --quick    # smaller sizes
"""

import argparse
import hashlib
import json
import os
import subprocess
import sys
import time

SIZES = {"samples": 20000, "prime_bound": 20000, "experiment_samples": 10000}
QUICK = {"samples": 4000, "prime_bound": 5000, "experiment_samples": 2000}


def _workloads(sizes):
    import numpy as np

    from okdens import parse_field, run_experiment
    from okdens import kernels
    from okdens.primes import sieve_primes
    from okdens.unimodular import get_plan

    field = parse_field("Q(sqrt2)")
    quintic = parse_field("x^5-13x-7")
    n, m, bound = 2, 3, 3
    k = field.degree
    plan = get_plan(field, n, m)
    ns = sizes["samples"]

    def bench(fn, warm):
        warm()
        t0 = time.perf_counter()
        out = fn()
        return time.perf_counter() - t0, out

    results = {}

    # coordinate sampling
    coords = np.empty((ns, n * m * k), dtype=np.int64)
    warm_buf = np.empty((8, n * m * k), dtype=np.int64)
    secs, _ = bench(
        lambda: kernels.sample_coords(np.uint64(42), np.uint64(2 * bound), bound, coords),
        lambda: kernels.sample_coords(np.uint64(42), np.uint64(2 * bound), bound, warm_buf))
    results["sampling"] = {"seconds": secs,
                           "checksum": int(np.sum(coords, dtype=np.int64))}

    # verdict kernel on those samples
    codes = np.empty(ns, dtype=np.int8)
    warm_codes = np.empty(8, dtype=np.int8)

    def verdicts(buf, out):
        kernels.verdict_batch(buf, m, k, plan.red, plan.combos, plan.perms,
                              plan.psigns, plan.cfmul, plan.cf0, out)

    secs, _ = bench(lambda: verdicts(coords, codes),
                    lambda: verdicts(coords[:8], warm_codes))
    results["verdict"] = {"seconds": secs,
                          "checksum": [int(np.count_nonzero(codes == c))
                                       for c in (0, 1, 2)]}

    # distinct-degree splitting counts for the quintic
    primes = sieve_primes(sizes["prime_bound"])
    primes = primes[np.mod(quintic.disc, primes) != 0]
    kq = quintic.degree
    redc = np.empty((primes.size, kq + 1), dtype=np.int64)
    for j, c in enumerate(quintic.coeffs):
        redc[:, j] = np.mod(c, primes)
    counts = np.zeros((primes.size, kq), dtype=np.uint8)
    warm_counts = np.zeros((4, kq), dtype=np.uint8)
    secs, _ = bench(
        lambda: kernels.split_degree_counts(primes, redc, kq, counts),
        lambda: kernels.split_degree_counts(primes[:4], redc[:4], kq, warm_counts))
    results["splitting"] = {
        "seconds": secs,
        "checksum": [int(counts.sum(dtype=np.int64)),
                     hashlib.sha1(counts.tobytes()).hexdigest()]}

    # one full experiment cell, sampling through prediction
    t0 = time.perf_counter()
    rep = run_experiment(field, n, m, bound, sizes["experiment_samples"], 7,
                         prime_bound=sizes["prime_bound"])
    results["experiment"] = {"seconds": time.perf_counter() - t0,
                             "checksum": rep.hits}
    return results


def _child(sizes) -> int:
    from okdens._accel import HAS_NUMBA
    payload = {"backend": "jit" if HAS_NUMBA else "pure",
               "has_numba": HAS_NUMBA,
               "results": _workloads(sizes)}
    json.dump(payload, sys.stdout)
    return 0


def _spawn(flag_value: str, quick: bool) -> dict:
    env = dict(os.environ)
    env["OKDENS_NO_NUMBA"] = flag_value
    cmd = [sys.executable, os.path.abspath(__file__), "--child"]
    if quick:
        cmd.append("--quick")
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise RuntimeError(f"child with OKDENS_NO_NUMBA={flag_value} failed")
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    sizes = QUICK if args.quick else SIZES

    if args.child:
        return _child(sizes)

    jit = _spawn("0", args.quick)
    pure = _spawn("1", args.quick)

    if not jit["has_numba"]:
        print("numba is not importable here; both runs used the pure backend")

    mismatch = False
    print(f"{'workload':<12} {'jit (s)':>10} {'pure (s)':>10} {'speedup':>9}   output")
    for name in jit["results"]:
        a, b = jit["results"][name], pure["results"][name]
        same = a["checksum"] == b["checksum"]
        mismatch |= not same
        ratio = b["seconds"] / a["seconds"] if a["seconds"] > 0 else float("inf")
        print(f"{name:<12} {a['seconds']:>10.4f} {b['seconds']:>10.4f} "
              f"{ratio:>8.1f}x   {'identical' if same else 'MISMATCH'}")
    if mismatch:
        print("backend outputs differ", file=sys.stderr)
        return 1
    print("all workload outputs identical across backends")
    return 0


if __name__ == "__main__":
    sys.exit(main())
