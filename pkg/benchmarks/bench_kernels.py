"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--samples 512] [--n 8]

Each backend runs in a fresh interpreter because the backend is chosen
from LOEWNER_LAB_NUMBA at call time and numba compilation is cached.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
import numpy as np
from loewner_lab import _kernels
samples, n_max, dp_n = int(sys.argv[1]), int(sys.argv[2]), int(sys.argv[3])
dt = 2.0 ** -9
steps = int((n_max + 12) / dt)
rng = np.random.default_rng(0)
L = np.zeros((samples, steps + 1))
L[:, 1:] = np.cumsum(rng.standard_normal((samples, steps)) * np.sqrt(6 * dt), axis=1)
etas = 3.0 * np.arange(dp_n + 1) ** 2
# warm-up (includes JIT compilation or cache load)
_kernels.integrate_coefficients(L[:2, :100], dt, n_max, True)
_kernels.level_dp(True, etas, 4)
def best(fn, reps=3):
    out = []
    for _ in range(reps):
        t = time.perf_counter(); fn(); out.append(time.perf_counter() - t)
    return min(out)
res = {
    "backend": _kernels.backend_name(),
    "integrate_s": best(lambda: _kernels.integrate_coefficients(L, dt, n_max, True), 1),
    "level_dp_s": best(lambda: _kernels.level_dp(True, etas, dp_n)),
}
print(json.dumps(res))
"""


def run(backend: str, samples: int, n_max: int, dp_n: int) -> dict:
    env = dict(os.environ, LOEWNER_LAB_NUMBA="1" if backend == "numba" else "0")
    proc = subprocess.run([sys.executable, "-c", CHILD, str(samples), str(n_max), str(dp_n)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=256)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--dp-n", type=int, default=64)
    args = ap.parse_args()
    rows = [run(b, args.samples, args.n, args.dp_n) for b in ("numba", "numpy")]
    print(f"{'backend':8} {'integrate (s)':>14} {'per sample (ms)':>16} {'level DP n=' + str(args.dp_n) + ' (s)':>20}")
    for r in rows:
        print(f"{r['backend']:8} {r['integrate_s']:14.3f} {1e3 * r['integrate_s'] / args.samples:16.3f} {r['level_dp_s']:20.4f}")
    nb, py = rows
    print(f"speedup: integrate x{py['integrate_s'] / nb['integrate_s']:.1f}, level DP x{py['level_dp_s'] / nb['level_dp_s']:.1f}")


if __name__ == "__main__":
    main()
