"""Compiled vs pure-Python kernels.

Times the polynomial kernels directly on products of the kind the planner
builds, then runs one end-to-end fuzz workload under each backend in a
subprocess (the backend is chosen at import time).

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import os
import random
import subprocess
import sys
import time
import timeit

from hodgemod import _kernels_py

try:
    from hodgemod import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def random_terms(rng, n_vars, n_terms, max_deg):
    names = [f"node:{i}/x/h{i % 7}{i % 5}" for i in range(n_vars)]
    terms = {}
    for _ in range(n_terms):
        mono = tuple(sorted(rng.choice(names) for _ in range(rng.randint(0, max_deg))))
        terms[mono] = terms.get(mono, 0) + rng.randint(-9, 9) or 1
    return {k: v for k, v in terms.items() if v}


def kernel_cases(seed=0):
    rng = random.Random(seed)
    a = random_terms(rng, 12, 60, 3)
    b = random_terms(rng, 12, 60, 3)
    xs = [random_terms(rng, 10, 20, 2) for _ in range(16)]
    ys = [random_terms(rng, 10, 20, 2) for _ in range(16)]
    values = {f"node:{i}/x/h{i % 7}{i % 5}": rng.randint(0, 10) for i in range(12)}
    return {
        "add": lambda k: k.add(a, b),
        "mul": lambda k: k.mul(a, b),
        "dot": lambda k: k.dot(xs, ys),
        "evaluate": lambda k: k.evaluate(k.mul(a, b), values),
    }


END_TO_END = """
import time
from hodgemod.cli import _fuzz_trial
t = time.perf_counter()
for n, m in ((3, 6), (4, 6), (5, 6)):
    for i in range(6):
        assert _fuzz_trial((n, m, 7, 10, i))["pass"]
print(time.perf_counter() - t)
"""


def end_to_end(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["HODGEMOD_PURE_PYTHON"] = "1"
    else:
        env.pop("HODGEMOD_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, check=True,
                         capture_output=True, text=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _kernels_c is None:
        print("compiled extension not built; only the pure-Python kernels are available")
    print(f"{'kernel':10s} {'python us':>12s} {'compiled us':>12s} {'speedup':>8s}")
    for name, fn in kernel_cases().items():
        reps = 200
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=reps, repeat=args.repeat)) / reps
        if _kernels_c is None:
            print(f"{name:10s} {t_py * 1e6:12.1f} {'-':>12s} {'-':>8s}")
            continue
        t_c = min(timeit.repeat(lambda: fn(_kernels_c), number=reps, repeat=args.repeat)) / reps
        print(f"{name:10s} {t_py * 1e6:12.1f} {t_c * 1e6:12.1f} {t_py / t_c:7.2f}x")

    t0 = time.perf_counter()
    pure = end_to_end(True)
    comp = end_to_end(False)
    print(f"\nend-to-end solve+verify (18 trials, n=3..5, m=6): "
          f"python {pure:.2f} s, default backend {comp:.2f} s, speedup {pure / comp:.2f}x")
    print(f"(benchmark wall time {time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
