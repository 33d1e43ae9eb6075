"""Compare the compiled and numpy summation backends.

Usage: python3 benchmarks/bench_kernels.py [--sizes 8 50 200 400] [--repeat 3]
"""

import argparse
import math
import time

from xlirs import kernels
from xlirs.channel import Scenario, exact_max_snr
from xlirs.geometry import IrsPanel, Placement
from xlirs.pattern import GainPattern

LAM = 0.125


def scenario(length):
    return Scenario(LAM, 1e9, IrsPanel.from_size(length, length, LAM / 3), GainPattern(0.5),
                    Placement.from_angles(10, math.pi / 2, 0), Placement.from_angles(100, math.pi / 2, 0))


def best_of(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return best, value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=float, nargs="+", default=[8, 50, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}; threads: {kernels.worker_count()}")
    print(f"{'L [m]':>7} {'elements':>11} " + " ".join(f"{b + ' [s]':>14}" for b in backends) + "  rel.diff")
    for length in args.sizes:
        scn = scenario(length)
        times, values = [], []
        for b in backends:
            t, v = best_of(lambda: exact_max_snr(scn, backend=b), args.repeat)
            times.append(t)
            values.append(v)
        diff = abs(values[0] - values[-1]) / abs(values[-1])
        print(f"{length:7g} {scn.panel.count:11d} " + " ".join(f"{t:14.4f}" for t in times) + f"  {diff:.1e}")


if __name__ == "__main__":
    main()
