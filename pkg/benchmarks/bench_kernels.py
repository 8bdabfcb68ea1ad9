"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--n 7]

Kernel timings run both implementations in this process on the same
inputs.  The census timing runs once per backend in a subprocess, since
the backend is fixed at import (``POSETKIT_PURE=1`` forces Python).
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from posetkit import _kernels_py as py
from posetkit.census import enumerate_posets, random_poset

try:
    from posetkit import _ckernels as cy
except ImportError:
    cy = None

CENSUS_SNIPPET = (
    "import time; from posetkit import kernels; from posetkit.census import _classes;"
    "t = time.perf_counter(); _classes({n}); "
    "print(kernels.BACKEND, time.perf_counter() - t)"
)


def inputs(seed, count):
    rng = random.Random(seed)
    posets = [random_poset(rng, n=rng.randint(5, 8)) for _ in range(count)]
    raw = []
    for p in posets:
        # strip the closure back to a random generating set
        rows = [row & ~(1 << i) for i, row in enumerate(p.up)]
        raw.append((p.n, [r if rng.random() < 0.7 else 0 for r in rows]))
    return posets, raw


def kernel_cases(posets, raw):
    return {
        "closure": lambda k: [k.closure(n, rows) for n, rows in raw],
        "reduction": lambda k: [k.reduction(p.n, list(p.up)) for p in posets],
        "heights": lambda k: [
            k.heights(p.n, list(p.up), k.reduction(p.n, list(p.up))) for p in posets
        ],
        "canonical_form": lambda k: [k.canonical_form(p.n, list(p.up)) for p in posets],
    }


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def census_time(n, pure):
    env = dict(os.environ)
    env.pop("POSETKIT_PURE", None)
    if pure:
        env["POSETKIT_PURE"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", CENSUS_SNIPPET.format(n=n)],
        env=env, capture_output=True, text=True, check=True,
    ).stdout.split()
    return out[0], float(out[1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--count", type=int, default=2000, help="random posets per kernel")
    ap.add_argument("--n", type=int, default=7, help="enumeration size for the census timing")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    if cy is None:
        print("compiled kernels not built; only the pure backend is available")
    posets, raw = inputs(args.seed, args.count)
    print(f"{'kernel':<16}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, fn in kernel_cases(posets, raw).items():
        t_py = bench(lambda: fn(py), args.repeat)
        if cy is not None:
            assert fn(py) == fn(cy), f"{name}: backends disagree"
            t_cy = bench(lambda: fn(cy), args.repeat)
            print(f"{name:<16}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>9.1f}x")
        else:
            print(f"{name:<16}{t_py:>12.4f}{'-':>12}{'-':>10}")

    timings = {}
    for pure in (True, False):
        backend, t = census_time(args.n, pure)
        timings[backend] = t
    line = ", ".join(f"{b} {t:.2f} s" for b, t in sorted(timings.items()))
    print(f"enumerate {sum(1 for _ in enumerate_posets(args.n))} classes on {args.n} nodes: {line}")


if __name__ == "__main__":
    main()
