"""Time the numba path against the pure numpy/Python fallback.

Run: python benchmarks/bench_kernels.py [--energies 16]

The fallback numbers come from a child process started with
LAMESL2_DISABLE_NUMBA=1, so both columns go through the same public calls
(jacobi_sn_cn_dn_am and band_scan) and only the kernel selection differs.
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

SIZES = (100, 10_000, 1_000_000)


def best_of(fn, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def measure(n_energies, k2):
    from lamesl2 import LameParameters
    from lamesl2.elliptic import EllipticModulus, jacobi_sn_cn_dn_am
    from lamesl2.verify import band_scan

    mod = EllipticModulus(k2)
    res = {"jacobi": {}, "checksum": {}}
    jacobi_sn_cn_dn_am(np.zeros(4), mod)  # warm-up / compile
    for size in SIZES:
        x = np.linspace(-20.0, 20.0, size)
        t, out = best_of(lambda: jacobi_sn_cn_dn_am(x, mod), 5 if size < 10**6 else 2)
        res["jacobi"][str(size)] = t
        res["checksum"][str(size)] = float(np.sum(out[0]) + np.sum(out[3]))

    params = LameParameters(1, 0)
    energies = np.linspace(0.1, 6.0, n_energies)
    band_scan(energies[:1], params, mod)
    t, out = best_of(lambda: band_scan(energies, params, mod), 1)
    res["scan"] = t
    res["deltas"] = [s.delta for s in out]
    return res


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--energies", type=int, default=16)
    p.add_argument("--k2", type=float, default=0.5)
    p.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = p.parse_args()

    if args.child:
        print(json.dumps(measure(args.energies, args.k2)))
        return

    from lamesl2._accel import USE_NUMBA
    if not USE_NUMBA:
        sys.exit("run without LAMESL2_DISABLE_NUMBA to compare both paths")
    fast = measure(args.energies, args.k2)
    env = dict(os.environ, LAMESL2_DISABLE_NUMBA="1")
    cmd = [sys.executable, __file__, "--child", "--energies", str(args.energies), "--k2", str(args.k2)]
    slow = json.loads(subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout)

    print(f"{'kernel':<28}{'numba ms':>12}{'fallback ms':>14}{'speedup':>10}")
    for size in SIZES:
        a, b = fast["jacobi"][str(size)], slow["jacobi"][str(size)]
        print(f"{'sn/cn/dn/am, n=' + str(size):<28}{a * 1e3:12.3f}{b * 1e3:14.3f}{b / a:9.1f}x")
    a, b = fast["scan"], slow["scan"]
    print(f"{'discriminant, ' + str(args.energies) + ' energies':<28}{a * 1e3:12.3f}{b * 1e3:14.3f}{b / a:9.1f}x")
    diff = max(abs(u - v) for u, v in zip(fast["deltas"], slow["deltas"]))
    print(f"max |delta difference| between paths: {diff:.1e}")


if __name__ == "__main__":
    main()
