"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--instances 50] [--json out.json]
"""

import argparse
import json
import statistics
import time

import numpy as np

from sdpdegree import kernels
from sdpdegree.experiment import generate_instance, trial_seed

CELLS = [(3, 3), (6, 4), (9, 5), (9, 6)]


def _time(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def bench_backend(mod, instances, matrices, repeat):
    def solve_all():
        for inst in instances:
            mod.hkm_solve(inst.C, inst.A, inst.b)

    def eig_all():
        for M in matrices:
            mod.jacobi_eigh(M)

    return {
        "hkm_solve_ms": 1e3 * _time(solve_all, repeat) / len(instances),
        "jacobi_eigh_us": 1e6 * _time(eig_all, repeat) / len(matrices),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--instances", type=int, default=50, help="instances per (m, n) cell")
    p.add_argument("--json", help="also write results to this file")
    args = p.parse_args(argv)

    backends = kernels.available_backends()
    rng = np.random.default_rng(0)
    matrices = [(lambda G: G + G.T)(rng.standard_normal((n, n))) for n in (3, 4, 5, 6, 8, 10)
                for _ in range(20)]
    results = {}
    for m, n in CELLS:
        instances = [generate_instance(m, n, trial_seed(0, m, n, t)) for t in range(args.instances)]
        for name, mod in backends.items():
            results[f"{name} m={m} n={n}"] = bench_backend(mod, instances, matrices, args.repeat)

    print(f"{'backend / cell':<24} {'solve (ms)':>12} {'eig (us)':>10}")
    for key, r in results.items():
        print(f"{key:<24} {r['hkm_solve_ms']:>12.3f} {r['jacobi_eigh_us']:>10.1f}")
    if "compiled" in backends:
        for m, n in CELLS:
            py, c = results[f"python m={m} n={n}"], results[f"compiled m={m} n={n}"]
            print(f"speedup m={m} n={n}: solve x{py['hkm_solve_ms'] / c['hkm_solve_ms']:.1f}, "
                  f"eig x{py['jacobi_eigh_us'] / c['jacobi_eigh_us']:.1f}")
    else:
        print("compiled extension not available; only the Python backend was timed")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
