"""Timing comparison of the JIT and plain-numpy kernel paths.

Runs the same workload twice in subprocesses — once as installed, once
with DRIVEJJ_NO_NUMBA=1 — so each process imports a single kernel build.

    python3 benchmarks/bench_kernels.py [--cases 300] [--s-max 40]
"""

import argparse
import json
import os
import subprocess
import sys

_WORKER = """\
import json, math, sys, time
from drivejj.circuits import SnailArray, SquidArray, mode_frame
from drivejj.supercoef import ScIndex, sc_closed, sc_series
from drivejj import _kernels

cases, s_max = json.loads(sys.argv[1])
snail = SnailArray(M=1, N=3, alpha_s=0.12, e_j=2*math.pi*90.0, phi_e=2*math.pi*0.35)
squid = SquidArray(M=2, alpha_s=0.4, e_j=2*math.pi*75.0, phi_dc=2*math.pi*0.18)
frames = [(snail, mode_frame(snail, e_c=2*math.pi*0.18)),
          (squid, mode_frame(squid, e_c=2*math.pi*0.19))]
indices = [ScIndex(n, l, p) for n in range(3) for l in range(5) for p in range(4)
           if 2 * n + l + p <= 6]

# one pass off the clock: JIT compilation (or numpy warm cache)
for model, frame in frames:
    for idx in indices:
        sc_series(frame, 0.7, idx, s_max=s_max)
        sc_closed(model, frame, 0.7, idx)

t0 = time.perf_counter()
for k in range(cases):
    pi_t = 0.01 + 1.99 * (k / max(cases - 1, 1))
    for model, frame in frames:
        for idx in indices:
            sc_series(frame, pi_t, idx, s_max=s_max)
t_series = time.perf_counter() - t0

t0 = time.perf_counter()
for k in range(cases):
    pi_t = 0.01 + 1.99 * (k / max(cases - 1, 1))
    for model, frame in frames:
        for idx in indices:
            sc_closed(model, frame, pi_t, idx)
t_closed = time.perf_counter() - t0

n_evals = cases * len(frames) * len(indices)
print(json.dumps({"jit": _kernels.USE_NUMBA, "evals": n_evals,
                  "series_s": t_series, "closed_s": t_closed}))
"""


def _run(no_numba: bool, cases: int, s_max: int) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["DRIVEJJ_NO_NUMBA"] = "1"
    else:
        env.pop("DRIVEJJ_NO_NUMBA", None)
    out = subprocess.run(
        [sys.executable, "-c", _WORKER, json.dumps([cases, s_max])],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cases", type=int, default=300)
    parser.add_argument("--s-max", type=int, default=40)
    args = parser.parse_args()

    fast = _run(False, args.cases, args.s_max)
    slow = _run(True, args.cases, args.s_max)
    if not fast["jit"]:
        print("note: numba unavailable; both runs use the numpy path")

    n = fast["evals"]
    print(f"{n} evaluations per engine, s_max={args.s_max}")
    print(f"{'engine':<8} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for key, label in (("series_s", "series"), ("closed_s", "closed")):
        per_fast = fast[key] / n * 1e6
        per_slow = slow[key] / n * 1e6
        print(f"{label:<8} {per_fast:>10.2f}us {per_slow:>10.2f}us {per_slow / per_fast:>8.1f}x")


if __name__ == "__main__":
    main()
