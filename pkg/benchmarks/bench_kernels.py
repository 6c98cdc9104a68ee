"""Compare the numba kernels with the pure-Python fallback.

Each backend runs in its own interpreter (the switch is read at import).
Timings exclude JIT compilation: every workload is run once to warm up and
then timed as the best of ``--repeat`` runs.

    python benchmarks/bench_kernels.py [--points 400] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, math, sys, time
import numpy as np
import jnbellman
from jnbellman import construct, thresholds, bellman_many, build_optimizer, a_infty_characteristic
from jnbellman.cup import solve_v

n, repeat = int(sys.argv[1]), int(sys.argv[2])
p = 3.0
params, tc = construct(p, 2 * thresholds(p)[1])
rng = np.random.default_rng(0)
x1 = rng.uniform(-3, 3, n)
x2 = np.exp(x1 + rng.uniform(0, math.log(params.C), n))
s = np.linspace(tc.v_bar, tc.w_bar, 64)
chord_x2 = np.exp(s) * (1 + 0.5 * np.array([
    (tc.w_bar - a) * (a - tc.v_bar) / 2 for a in s]))
phi = build_optimizer(params, tc, (0.0, params.C))
ws = np.linspace(1e-3, 0.1, 50)

def timed(fn):
    fn()
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best

out = {
    "numba": jnbellman.USING_NUMBA,
    "bellman_many (%d random points)" % n: timed(lambda: bellman_many(params, tc, x1, x2)),
    "bellman_many (64 points in R4)": timed(lambda: bellman_many(params, tc, s, chord_x2)),
    "solve_v (50 values of w)": timed(lambda: [solve_v(p, w) for w in ws]),
    "a_infty_characteristic (R3 optimizer)": timed(lambda: a_infty_characteristic(phi)),
    "construct (p=3, C=2 C0)": timed(lambda: construct(p, 2 * thresholds(p)[1])),
}
print(json.dumps(out))
"""


def run(disabled, points, repeat):
    env = dict(os.environ, JNB_DISABLE_NUMBA="1" if disabled else "0")
    res = subprocess.run([sys.executable, "-c", WORKER, str(points), str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    jit = run(False, args.points, args.repeat)
    py = run(True, args.points, args.repeat)
    width = max(len(k) for k in jit if k != "numba")
    print(f"{'workload':<{width}}  {'numba [s]':>10}  {'python [s]':>10}  {'speedup':>8}")
    for key in jit:
        if key == "numba":
            continue
        print(f"{key:<{width}}  {jit[key]:>10.4f}  {py[key]:>10.4f}  {py[key] / jit[key]:>7.1f}x")


if __name__ == "__main__":
    main()
