"""Command-line front end.

    entropybounds run --config exp.toml [--seed S] [--workers N] [--out DIR] [--format csv|json|both]
    entropybounds encode --probs 0.8,0.2 11

``run`` writes ``<experiment>.csv`` and ``<experiment>.summary.json`` and
exits 0 when every verdict in the summary is true, 1 when a bound check
failed, and 2 on usage, config or capacity errors.

Config files are TOML::

    experiment = "cset"            # entropy | aep | encode | average | pointwise | nq | cset
    code = "optimal"               # optimal | identity | huffman:B | prefix | prefix:<code>

    [source]
    kind = "iid"
    probs = [0.7, 0.3]             # or kind = "markov", transition = [[...], ...]

    [grid]
    n = [8, 12, 16]
    epsilon = [0.05, 0.1, 0.2]
    q = [0.1, 0.5, 0.9]
    checkpoints = [256, 512, 1024, 2048, 4096]
    trials = 1000
    burn_in = 256

    [verdict]
    tolerance = 0.05               # pointwise: l_n/n >= H - tolerance ...
    min_fraction = 0.99            # ... for at least this fraction of trials
    mean_tolerance = 0.01          # pointwise: mean l_n/n >= H - mean_tolerance
    rate_tolerance = 0.05          # nq: |log2 n(q)/n - H|
    spread_tolerance = 0.02        # nq: max-min of the rate over q at fixed n

    [run]
    seed = 0
    workers = 1
    out = "reports"
    format = "both"
"""
from __future__ import annotations

import argparse
import itertools
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import bounds_lab, reports
from .codes import build_code, is_prefix_free, kraft_sum
from .codes.families import PREFIX, OptimalOneToOneCode
from .errors import CapacityError, EntropyBoundsError, InputError
from .source_models import (
    IidSource,
    SourceModel,
    as_symbols,
    load_source,
    load_toml,
    source_from_mapping,
)
from .typical_sets import TypicalReport, aep_curve, sustained_from

EXPERIMENTS = ("entropy", "aep", "encode", "average", "pointwise", "nq", "cset")
FORMATS = ("csv", "json", "both")
MAX_DUMP = 1 << 16

DEFAULT_EPSILONS = [0.05, 0.1, 0.2]
DEFAULT_CHECKPOINTS = [256, 512, 1024, 2048, 4096]


class ConfigError(InputError):
    """Bad config value; ``key`` names the offending TOML key when known."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


@dataclass
class ExperimentConfig:
    source: SourceModel
    experiment: str
    code: str = "optimal"
    n_values: list[int] = field(default_factory=lambda: [16])
    epsilons: list[float] = field(default_factory=lambda: list(DEFAULT_EPSILONS))
    q_values: list[float] = field(default_factory=lambda: [0.1, 0.5, 0.9])
    checkpoints: list[int] = field(default_factory=lambda: list(DEFAULT_CHECKPOINTS))
    trials: int = 100
    burn_in: int = 256
    seed: int = 0
    workers: int = 1
    out: Path = Path("reports")
    format: str = "both"
    tolerance: float = 0.05
    min_fraction: float = 0.99
    mean_tolerance: float = 0.01
    rate_tolerance: float = 0.05
    spread_tolerance: float = 0.02

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}",
                "experiment",
            )
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}", "format")
        for key, attr in _KEYS.items():
            if attr in _LISTS and not getattr(self, attr):
                raise ConfigError(f"grid '{key}' must be nonempty", key)
        if any(not isinstance(n, int) or n < 1 for n in self.n_values):
            raise ConfigError("n values must be integers >= 1", "n")
        if any(not isinstance(n, int) or n < 1 for n in self.checkpoints):
            raise ConfigError("checkpoints must be integers >= 1", "checkpoints")
        if any(not e > 0 for e in self.epsilons):
            raise ConfigError("epsilon must be > 0", "epsilon")
        if any(not 0 < q < 1 for q in self.q_values):
            raise ConfigError("q must lie in (0, 1)", "q")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1", "trials")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1", "workers")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer", "seed")
        iid_only = self.experiment in ("aep", "average", "nq", "cset")
        if iid_only and not isinstance(self.source, IidSource):
            raise ConfigError(f"experiment {self.experiment!r} needs an i.i.d. source", "kind")
        if self.experiment in ("encode", "average", "pointwise", "cset"):
            try:
                build_code(self.code, self.source)
            except EntropyBoundsError as exc:
                raise ConfigError(str(exc), "code") from None


_KEYS = {
    "n": "n_values",
    "epsilon": "epsilons",
    "q": "q_values",
    "checkpoints": "checkpoints",
    "trials": "trials",
    "burn_in": "burn_in",
    "tolerance": "tolerance",
    "min_fraction": "min_fraction",
    "mean_tolerance": "mean_tolerance",
    "rate_tolerance": "rate_tolerance",
    "spread_tolerance": "spread_tolerance",
    "seed": "seed",
    "workers": "workers",
    "out": "out",
    "format": "format",
}
_LISTS = {"n_values", "epsilons", "q_values", "checkpoints"}


def _line_of(text: str, key: str) -> int | None:
    for i, line in enumerate(text.splitlines(), 1):
        if re.match(rf"\s*{re.escape(key)}\s*=", line):
            return i
    return None


def config_from_mapping(data: dict[str, Any]) -> ExperimentConfig:
    if "source" not in data:
        raise ConfigError("missing [source] table")
    if "experiment" not in data:
        raise ConfigError("missing 'experiment'")
    try:
        source = source_from_mapping(data["source"])
    except EntropyBoundsError as exc:
        spec = data["source"]
        key = "transition" if isinstance(spec, dict) and "transition" in spec else "probs"
        raise ConfigError(str(exc), key) from None
    cfg = ExperimentConfig(
        source=source,
        experiment=str(data["experiment"]),
        code=str(data.get("code", "optimal")),
    )
    for table in ("grid", "verdict", "run"):
        section = data.get(table, {})
        if not isinstance(section, dict):
            raise ConfigError(f"[{table}] must be a table")
        for key, value in section.items():
            if key not in _KEYS:
                raise ConfigError(f"unknown key {key!r} in [{table}]", key)
            attr = _KEYS[key]
            if attr in _LISTS and not isinstance(value, list):
                value = [value]
            if attr == "out":
                value = Path(value)
            setattr(cfg, attr, value)
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    try:
        data = load_toml(path)
    except Exception as exc:  # tomllib.TOMLDecodeError message carries "(at line L, column C)"
        raise ConfigError(f"{path}: {exc}") from None
    try:
        cfg = config_from_mapping(data)
        cfg.validate()
    except ConfigError as exc:
        line = _line_of(text, exc.key) if exc.key else None
        where = f"{path}:{line}" if line else str(path)
        raise ConfigError(f"{where}: {exc}", exc.key) from None
    return cfg


# ---------------------------------------------------------------- runners


def _entropy(cfg: ExperimentConfig):
    h = cfg.source.entropy_rate()
    kind = "iid" if isinstance(cfg.source, IidSource) else "markov"
    rows = [(kind, cfg.source.k, h)]
    ok = -1e-12 <= h <= math.log2(cfg.source.k) + 1e-12
    return ("kind", "k", "entropy_rate"), rows, {"entropy_rate": h, "verdicts": {"in_range": ok}}


def _aep(cfg: ExperimentConfig):
    rows, per_eps = [], {}
    upper_all, joint_all = True, True
    for eps in cfg.epsilons:
        reps = aep_curve(cfg.source, cfg.n_values, eps)
        rows += [r.csv_row() for r in reps]
        upper_all &= all(r.upper_ok for r in reps)
        joint_all &= all(r.lower_ok for r in reps if r.mass_ok)
        per_eps[repr(eps)] = {
            "n_star": sustained_from(reps, "mass_ok"),
            "n_star_lower": sustained_from(reps, "lower_ok"),
        }
    summary = {
        "entropy_rate": cfg.source.entropy_rate(),
        "per_epsilon": per_eps,
        "verdicts": {"upper_ok_all": upper_all, "lower_ok_when_mass_ok": joint_all},
    }
    return TypicalReport.csv_header, rows, summary


def _encode(cfg: ExperimentConfig):
    code = build_code(cfg.code, cfg.source)
    rows = []
    injective = roundtrip = prefix_free = kraft_ok = True
    for n in cfg.n_values:
        if cfg.source.k**n > MAX_DUMP:
            raise CapacityError(f"encode dumps at most {MAX_DUMP} sequences per n (K^n = {cfg.source.k}^{n})")
        words = []
        for index, seq in enumerate(itertools.product(range(cfg.source.k), repeat=n)):
            bits = code.encode(n, seq)
            words.append(bits)
            roundtrip &= code.decode(n, bits) == seq
            label = code.rank(n, seq) if isinstance(code, OptimalOneToOneCode) else index
            rows.append((n, label, reports.sequence_literal(seq, cfg.source.k), bits, len(bits)))
        injective &= len(set(words)) == len(words)
        if code.kind == PREFIX:
            prefix_free &= is_prefix_free(words)
            kraft_ok &= kraft_sum(len(w) for w in words).ok
    verdicts = {"injective": injective, "roundtrip": roundtrip}
    if code.kind == PREFIX:
        verdicts.update(prefix_free=prefix_free, kraft_ok=kraft_ok)
    summary = {"code": code.name, "kind": code.kind, "verdicts": verdicts}
    return ("n", "index", "sequence", "codeword", "length"), rows, summary


def _average(cfg: ExperimentConfig):
    code = build_code(cfg.code, cfg.source)
    rows = bounds_lab.average_curve(cfg.source, code, cfg.n_values)
    verdicts = {"nonnegative": all(r.expected_length_per_symbol >= 0 for r in rows)}
    if code.kind == PREFIX:
        verdicts["prefix_bound_ok"] = all(r.deficit <= 1e-12 for r in rows)
    summary = {
        "code": code.name,
        "entropy_rate": cfg.source.entropy_rate(),
        "deficits": {str(r.n): r.deficit for r in rows},
        "verdicts": verdicts,
    }
    return bounds_lab.AverageRow.csv_header, [r.csv_row() for r in rows], summary


def _pointwise(cfg: ExperimentConfig):
    code = build_code(cfg.code, cfg.source)
    recs = bounds_lab.pointwise_trajectories(
        cfg.source, code, cfg.checkpoints, cfg.trials, cfg.seed, workers=cfg.workers
    )
    summary = bounds_lab.summarize_trajectories(
        recs,
        cfg.source.entropy_rate(),
        tolerance=cfg.tolerance,
        min_fraction=cfg.min_fraction,
        mean_tolerance=cfg.mean_tolerance,
        burn_in=cfg.burn_in,
    )
    summary.update(code=code.name, seed=cfg.seed)
    rows = [row for r in recs for row in r.csv_rows()]
    return bounds_lab.TrajectoryRecord.csv_header, rows, summary


def _nq(cfg: ExperimentConfig):
    h = cfg.source.entropy_rate()
    rows, monotone, rate_ok, spread_ok, spreads = [], True, True, True, {}
    for n in cfg.n_values:
        got = [bounds_lab.shannon_nq(cfg.source, n, q) for q in sorted(cfg.q_values)]
        rows += [r.csv_row() for r in got]
        monotone &= all(a.n_of_q <= b.n_of_q for a, b in zip(got, got[1:]))
        rate_ok &= all(abs(r.rate - h) <= cfg.rate_tolerance for r in got)
        spread = max(r.rate for r in got) - min(r.rate for r in got)
        spreads[str(n)] = spread
        spread_ok &= spread <= cfg.spread_tolerance
    summary = {
        "entropy_rate": h,
        "spread": spreads,
        "verdicts": {"monotone_in_q": monotone, "rate_ok": rate_ok, "spread_ok": spread_ok},
    }
    return bounds_lab.NqRow.csv_header, rows, summary


def _cset(cfg: ExperimentConfig):
    code = build_code(cfg.code, cfg.source)
    rows, sums, holds = [], {}, True
    for eps in cfg.epsilons:
        reps = [bounds_lab.c_set_report(cfg.source, code, n, eps) for n in cfg.n_values]
        rows += [r.csv_row() for r in reps]
        holds &= all(r.holds for r in reps)
        sums[repr(eps)] = {
            "sum_c_mass": math.fsum(r.c_mass for r in reps),
            "sum_bound": math.fsum(r.bound for r in reps),
        }
    summary = {"code": code.name, "partial_sums": sums, "verdicts": {"all_hold": holds}}
    return bounds_lab.CSetReport.csv_header, rows, summary


RUNNERS = {
    "entropy": _entropy,
    "aep": _aep,
    "encode": _encode,
    "average": _average,
    "pointwise": _pointwise,
    "nq": _nq,
    "cset": _cset,
}


def run(cfg: ExperimentConfig) -> int:
    """Run one experiment, write its reports, and return the exit status."""
    cfg.validate()
    header, rows, summary = RUNNERS[cfg.experiment](cfg)
    summary = {"experiment": cfg.experiment, "rows": len(rows), **summary}
    cfg.out.mkdir(parents=True, exist_ok=True)
    if cfg.format in ("csv", "both"):
        reports.write_csv(cfg.out / f"{cfg.experiment}.csv", header, rows)
    if cfg.format in ("json", "both"):
        reports.write_json(cfg.out / f"{cfg.experiment}.summary.json", summary)
    return 0 if all(summary["verdicts"].values()) else 1


# ------------------------------------------------------------------ main


def parse_sequence(text: str, k: int) -> tuple[int, ...]:
    text = text.strip()
    parts = re.split(r"[,\s]+", text) if re.search(r"[,\s]", text) else list(text)
    try:
        symbols = [int(p) for p in parts if p != ""]
    except ValueError:
        raise InputError(f"bad sequence literal {text!r}") from None
    return as_symbols(symbols, k)


def _encode_main(args) -> int:
    if args.config:
        source = load_source(args.config)
    elif args.probs:
        try:
            probs = [float(p) for p in args.probs.split(",")]
        except ValueError:
            raise InputError(f"bad --probs {args.probs!r}") from None
        source = IidSource(probs)
    else:
        raise InputError("encode needs --probs or --config")
    code = OptimalOneToOneCode(source)
    seq = parse_sequence(args.sequence, source.k)
    rank = code.rank(len(seq), seq)
    bits = code.encode(len(seq), seq)
    print(f"rank={rank} codeword={bits} length={len(bits)}")
    return 0


def _run_main(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.workers is not None:
        cfg.workers = args.workers
    if args.out is not None:
        cfg.out = Path(args.out)
    if args.format is not None:
        cfg.format = args.format
    return run(cfg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entropybounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment from a TOML config")
    p.add_argument("--config", required=True, help="experiment config (TOML)")
    p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    p.add_argument("--workers", type=int, help="worker processes; never changes output")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=FORMATS)
    p.set_defaults(func=_run_main)

    p = sub.add_parser("encode", help="encode one sequence with the optimal one-to-one code")
    p.add_argument("--probs", help="comma-separated i.i.d. symbol probabilities")
    p.add_argument("--config", help="TOML file with a [source] table")
    p.add_argument("sequence", help='symbols, e.g. "0110" or "0,1,1,0"')
    p.set_defaults(func=_encode_main)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EntropyBoundsError, OSError) as exc:
        print(f"entropybounds: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
