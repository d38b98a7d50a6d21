"""Compare the compiled and numpy trial kernels on identical workloads.

Usage: python benchmarks/bench_kernels.py [--trials N] [--repeat R] [--workers W]
"""

import argparse
import time

from coopnoma import kernels
from coopnoma.model import NetworkConfig
from coopnoma.simulator import RngPolicy, estimate_outage

CASES = {
    "rnrf alpha=2 30dB": (NetworkConfig(alpha=2.0, r1=1.0, r2=0.5, rho=1000.0), "rnrf"),
    "nnff alpha=3 40dB": (NetworkConfig(alpha=3.0, r1=0.3, rho=10_000.0), "nnff"),
}


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=2_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}; trials={args.trials} workers={args.workers}")
    print(f"{'case':<22}{'backend':<9}{'seconds':>9}{'Mtrials/s':>11}{'speedup':>9}  counts")
    for name, (cfg, scheme) in CASES.items():
        results = {}
        for b in backends:
            t, est = best_time(
                lambda: estimate_outage(cfg, scheme, args.trials, RngPolicy(1), backend=b, workers=args.workers),
                args.repeat,
            )
            results[b] = (t, est)
        ref = results["python"][0]
        counts = {b: (e.near.probability, e.far_coop.probability, e.far_noncoop.probability) for b, (_, e) in results.items()}
        for b, (t, _) in results.items():
            print(f"{name:<22}{b:<9}{t:>9.3f}{args.trials / t / 1e6:>11.2f}{ref / t:>9.2f}  {counts[b]}")
        if len(set(counts.values())) != 1:
            print("  WARNING: backends disagree")


if __name__ == "__main__":
    main()
