#!/usr/bin/env python3
"""Run every config in configs/ and print one status line per experiment."""
import argparse
import sys
import time
from pathlib import Path

from entropybounds.cli import main

STATUS = {0: "ok", 1: "bound check failed", 2: "error"}


def cli():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--configs", default=Path(__file__).resolve().parent.parent / "configs", type=Path)
    ap.add_argument("--out", default="reports", type=Path)
    ap.add_argument("--workers", default="1")
    args = ap.parse_args()

    worst = 0
    for cfg in sorted(args.configs.glob("*.toml")):
        t0 = time.perf_counter()
        code = main(["run", "--config", str(cfg), "--out", str(args.out / cfg.stem), "--workers", args.workers])
        print(f"{cfg.stem:20s} exit={code} ({STATUS[code]}) {time.perf_counter() - t0:6.1f}s")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(cli())
