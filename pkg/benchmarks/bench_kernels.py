"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N] [--json]

Times the two hot kernels on corpus inputs (face counting for validation,
exhaustive separator search) and one end-to-end untangle of the corpus
slice with each backend, the latter in fresh interpreters so the backend
switch takes effect.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import timeit
from itertools import islice

from untangle import _pykernels
from untangle.corpus import corpus
from untangle.drawing import _kernel_arrays
from untangle.geometry import ingest
from untangle.separator import string_graph

try:
    from untangle import _ckernels
except ImportError:
    _ckernels = None

_E2E = """
import time
from itertools import islice
from untangle import kernels
from untangle.corpus import corpus
from untangle.geometry import ingest
from untangle.untangler import untangle
items = [(ingest(it.drawing), it.seed) for it in islice(corpus(), 0, None, {step})]
t = time.perf_counter()
for d, seed in items:
    untangle(d, seed=seed)
print(kernels.BACKEND, time.perf_counter() - t)
"""


def _separator_inputs(count: int):
    rng = random.Random(7)
    out = []
    for _ in range(count):
        n = rng.randint(10, 14)
        adj = [0] * n
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.3:
                    adj[u] |= 1 << v
                    adj[v] |= 1 << u
        out.append(adj)
    for it in islice(corpus(), 0, None, 5):
        h = string_graph(ingest(it.drawing))
        if 0 < h.n <= 14:
            index = {v: i for i, v in enumerate(h.vertices)}
            adj = [0] * h.n
            for v in h.vertices:
                for w in h.adj[v]:
                    adj[index[v]] |= 1 << index[w]
            out.append(adj)
    return out


def _time(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--json", action="store_true")
    p.add_argument("--e2e-step", type=int, default=4, help="use every N-th corpus drawing")
    args = p.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; run `pip install -e .` first", file=sys.stderr)
        return 1

    euler_args = [_kernel_arrays(ingest(it.drawing))[0] for it in islice(corpus(), 0, None, 3)]
    sep_args = _separator_inputs(30)
    rows = []
    for name, cases, py, cy in [
        ("euler_counts", euler_args,
         lambda: [_pykernels.euler_counts(*a) for a in euler_args],
         lambda: [_ckernels.euler_counts(*a) for a in euler_args]),
        ("min_separator_mask", sep_args,
         lambda: [_pykernels.min_separator_mask(a, 2 * len(a) // 3) for a in sep_args],
         lambda: [_ckernels.min_separator_mask(a, 2 * len(a) // 3) for a in sep_args]),
    ]:
        assert py() == cy(), f"{name}: backends disagree"
        t_py, t_cy = _time(py, args.repeat), _time(cy, args.repeat)
        rows.append({"kernel": name, "cases": len(cases), "python_s": t_py, "cython_s": t_cy,
                     "speedup": t_py / t_cy if t_cy else float("inf")})

    e2e = {}
    for flag in (None, "1"):
        env = dict(os.environ)
        env.pop("UNTANGLE_PURE_PYTHON", None)
        if flag:
            env["UNTANGLE_PURE_PYTHON"] = flag
        out = subprocess.run([sys.executable, "-c", _E2E.format(step=args.e2e_step)], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        e2e[out[0]] = float(out[1])
    rows.append({"kernel": "untangle (end to end)",
                 "cases": len(range(0, 224, args.e2e_step)),
                 "python_s": e2e["python"], "cython_s": e2e["cython"],
                 "speedup": e2e["python"] / e2e["cython"]})

    if args.json:
        print(json.dumps(rows, indent=1))
    else:
        print(f"{'kernel':<24}{'cases':>6}{'python s':>12}{'cython s':>12}{'speedup':>9}")
        for r in rows:
            print(f"{r['kernel']:<24}{r['cases']:>6}{r['python_s']:>12.4f}"
                  f"{r['cython_s']:>12.4f}{r['speedup']:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
