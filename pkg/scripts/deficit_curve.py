#!/usr/bin/env python3
"""Exact H - E[l_n]/n for the optimal one-to-one code and for Huffman blocks."""
import argparse

from entropybounds.bounds_lab import average_curve
from entropybounds.codes import huffman_block, optimal_one_to_one
from entropybounds.source_models import IidSource


def cli():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--n-max", type=int, default=1024)
    args = ap.parse_args()

    src = IidSource([1 - args.p, args.p])
    ns = [1 << j for j in range(args.n_max.bit_length())]
    rows = average_curve(src, optimal_one_to_one(src), ns)
    print(f"H = {src.entropy_rate():.6f}")
    print("    n  E/n (one-to-one)   deficit   E/n (Huffman)")
    for r in rows:
        huff = f"{huffman_block(src, r.n).expected_length() / r.n:.6f}" if r.n <= 16 else "-"
        print(f"{r.n:5d}  {r.expected_length_per_symbol:16.6f}  {r.deficit:8.4f}   {huff}")


if __name__ == "__main__":
    cli()
