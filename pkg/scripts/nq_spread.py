#!/usr/bin/env python3
"""How fast does log2 n(q) / n forget q?

For each n prints the rate at every q and the max-min spread, alongside the
normal approximation 2 * z * sigma / sqrt(n) where sigma is the standard
deviation of -log2 p(X) for one symbol.
"""
import argparse
import math
from statistics import NormalDist

from entropybounds.bounds_lab import shannon_nq
from entropybounds.source_models import IidSource


def cli():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--q", type=float, nargs="+", default=[0.1, 0.5, 0.9])
    ap.add_argument("--n", type=int, nargs="+", default=[512, 1024, 2048, 4096, 6144, 8192])
    args = ap.parse_args()

    src = IidSource([1 - args.p, args.p])
    h = src.entropy_rate()
    lp = [-math.log2(p) for p in src.probs]
    sigma = math.sqrt(sum(p * (l - h) ** 2 for p, l in zip(src.probs, lp)))
    z = NormalDist().inv_cdf(max(args.q)) - NormalDist().inv_cdf(min(args.q))
    print(f"H = {h:.6f}  sigma = {sigma:.4f}")
    print("    n  " + "  ".join(f"rate({q})" for q in args.q) + "    spread  approx")
    for n in args.n:
        rates = [shannon_nq(src, n, q).rate for q in args.q]
        spread = max(rates) - min(rates)
        print(f"{n:5d}  " + "  ".join(f"{r:9.6f}" for r in rates) + f"  {spread:8.5f}  {z * sigma / math.sqrt(n):.5f}")


if __name__ == "__main__":
    cli()
