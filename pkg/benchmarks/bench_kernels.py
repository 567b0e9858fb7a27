"""Compare the compiled and pure-Python toggle kernels.

Times the kernels in isolation on random dense neighbourhoods, then a full
Clifford+T self-check series in a subprocess per backend.

    python3 benchmarks/bench_kernels.py [--sizes 16,64,256] [--repeat 5]
"""

from __future__ import annotations

import argparse
import copy
import os
import random
import statistics
import subprocess
import sys
import time

from zxcheck import _kernels_py

try:
    from zxcheck import _ckernels
except ImportError:
    _ckernels = None

END_TO_END = """
import time
from zxcheck import kernels
from zxcheck.bench import BenchSpec, Family, suite_pair
from zxcheck.equiv import CheckOptions, check_equivalence
opts = CheckOptions(oracle_fallback_max_qubits=0)
pairs = [suite_pair(BenchSpec(Family.CLIFFORD_T, 16, 2000, s)) for s in range(5)]
t0 = time.perf_counter()
for a, b in pairs:
    check_equivalence(a, b, opts)
print(kernels.BACKEND, (time.perf_counter() - t0) * 1000)
"""


def rand_adj(rng: random.Random, n: int, p: float = 0.5) -> dict:
    adj = {v: {} for v in range(n)}
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p:
                adj[a][b] = adj[b][a] = 2
    return adj


def time_kernel(fn, adj: dict, args, repeat: int) -> float:
    runs = []
    for _ in range(repeat):
        work = copy.deepcopy(adj)
        t0 = time.perf_counter()
        fn(work, *args)
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs) * 1e6


def end_to_end(pure: bool) -> tuple[str, float]:
    env = dict(os.environ, ZXCHECK_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    return out[0], float(out[1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="16,64,256")
    ap.add_argument("--repeat", type=int, default=5)
    ns = ap.parse_args()
    if _ckernels is None:
        sys.exit("compiled kernels are not built; reinstall with Cython available")
    rng = random.Random(0)
    print(f"{'kernel':<10} {'n':>5} {'python us':>11} {'cython us':>11} {'speedup':>8}")
    for n in (int(x) for x in ns.sizes.split(",")):
        adj = rand_adj(rng, n)
        vs = list(range(n))
        half = n // 2
        cases = [("clique", (vs,)), ("bipartite", (vs[:half], vs[half:]))]
        for name, args in cases:
            py = time_kernel(getattr(_kernels_py, f"toggle_{name}"), adj, args, ns.repeat)
            cy = time_kernel(getattr(_ckernels, f"toggle_{name}"), adj, args, ns.repeat)
            print(f"{name:<10} {n:>5} {py:>11.1f} {cy:>11.1f} {py / cy:>7.2f}x")
    (b1, t_py), (b2, t_cy) = end_to_end(True), end_to_end(False)
    print("\nend to end, 5 Clifford+T self-checks at 16 qubits x 2000 gates:")
    print(f"  {b1}: {t_py:.0f} ms   {b2}: {t_cy:.0f} ms   speedup {t_py / t_cy:.2f}x")


if __name__ == "__main__":
    main()
