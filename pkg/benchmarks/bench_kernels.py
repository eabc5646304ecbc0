"""Compare the compiled and pure-Python polynomial kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--json]

Each kernel runs on the same random integer polynomials in both backends;
results are checked for equality before timings are reported.  A final row
times an end-to-end exact computation with each backend in a subprocess.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from tqlab import _kernels_py

try:
    from tqlab import _kernels
except ImportError:
    _kernels = None


def rand_poly(rng, deg, bits=40):
    p = [rng.randint(-(2**bits), 2**bits) for _ in range(deg + 1)]
    p[-1] = p[-1] or 1
    return p


def cases(rng):
    a, b = rand_poly(rng, 60), rand_poly(rng, 60)
    g = rand_poly(rng, 12, 8)
    f1 = _kernels_py.mul(g, rand_poly(rng, 20, 8))
    f2 = _kernels_py.mul(g, rand_poly(rng, 20, 8))
    prod = _kernels_py.mul(a, b)
    return {
        "mul": ("mul", (a, b)),
        "add": ("add", (a, b)),
        "divexact": ("divexact", (prod, b)),
        "primitive": ("primitive", (_kernels_py.scale(a, 6),)),
        "gcd": ("gcd", (f1, f2)),
        "eval_complex": ("eval_complex", (a, complex(0.9, 0.3))),
    }


def bench_kernels(repeat):
    rng = random.Random(0)
    rows = []
    for name, (fn, args) in cases(rng).items():
        py = getattr(_kernels_py, fn)
        row = {"kernel": name}
        n = 200 if name != "gcd" else 20
        row["python_us"] = min(timeit.repeat(lambda: py(*args), number=n, repeat=repeat)) / n * 1e6
        if _kernels is not None:
            cy = getattr(_kernels, fn)
            if cy(*args) != py(*args):
                raise AssertionError(f"backends disagree on {name}")
            row["compiled_us"] = min(timeit.repeat(lambda: cy(*args), number=n, repeat=repeat)) / n * 1e6
            row["speedup"] = row["python_us"] / row["compiled_us"]
        rows.append(row)
    return rows


END_TO_END = (
    "import time; from tqlab.sl2lab import transfer_sl2; t=time.perf_counter(); "
    "transfer_sl2(2, 10).reconstruct(); print(time.perf_counter()-t)"
)


def bench_end_to_end():
    out = {}
    for label, pure in (("python", "1"), ("compiled", "0")):
        if label == "compiled" and _kernels is None:
            continue
        env = dict(os.environ, TQLAB_PURE_PYTHON=pure)
        res = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        out[label] = float(res.stdout.strip())
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rows = bench_kernels(args.repeat)
    e2e = bench_end_to_end()
    if args.json:
        print(json.dumps({"kernels": rows, "transfer_sl2_N2_s": e2e}, indent=2))
        return
    print(f"{'kernel':<14}{'python us':>12}{'compiled us':>14}{'speedup':>9}")
    for r in rows:
        cy = f"{r['compiled_us']:14.2f}{r['speedup']:9.2f}" if "compiled_us" in r else f"{'n/a':>14}{'':>9}"
        print(f"{r['kernel']:<14}{r['python_us']:12.2f}{cy}")
    print("transfer_sl2(2) + reconstruct, seconds:", ", ".join(f"{k} {v:.2f}" for k, v in e2e.items()))


if __name__ == "__main__":
    main()
