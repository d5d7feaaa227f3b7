"""Command-line experiment runner.

Usage::

    fairga run --algorithm both --objective schwefel --replicates 5 --out results/
    fairga compare --objective schwefel --replicates 20 --out results/
    fairga sustainability --recy-r 0.3 --res-rec 0.8 --life-r 1.5

Settings come from built-in defaults, then an optional ``--config`` file of
``key = value`` lines, then command-line flags. Exit status is 0 on success,
1 on a configuration error and 2 on an I/O error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import ConfigError, FairGaConfig, RunTrace, validate_config
from .engine import run_baseline_ga, run_fairga
from .objectives import OBJECTIVES, get_objective
from .sustainability import FlowModelParams, InvalidParams, compare_scenarios

logger = logging.getLogger(__name__)

TRACE_HEADER = ("iteration", "stage", "pop_size", "best_fitness", "mean_fitness", "cum_au")
SUMMARY_HEADER = ("iteration", "median_best", "q25_best", "q75_best")
COMPARE_HEADER = ("algorithm", "replicate", "seed", "iterations_to_threshold",
                  "au_to_threshold", "final_best")
NOT_REACHED = "n/a"

ENGINES = {"fairga": run_fairga, "ga": run_baseline_ga}

_CFG_FIELDS = {f.name: f.type for f in dataclasses.fields(FairGaConfig)}
_FLOW_FIELDS = {f.name for f in dataclasses.fields(FlowModelParams)}
_INT_KEYS = {"s_max", "l_min", "s_dispose", "n_max", "tournament_size",
             "elitism_count", "replicates", "seed"}
_FLOAT_KEYS = {"r_rampup", "crossover_rate", "mutation_rate",
               "mutation_sigma_fraction", "tolerance"} | _FLOW_FIELDS
_STR_KEYS = {"algorithm", "objective", "out", "mutation_mode"}
KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS


class UsageError(ConfigError):
    pass


def _key(name: str) -> str:
    return name.strip().lower().replace("-", "_")


def _coerce(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
    except ValueError:
        raise UsageError(f"{key}: cannot parse {raw!r} as a number") from None
    return raw


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = _key(key)
        if key not in KNOWN_KEYS:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


def load_config_file(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text)


@dataclass
class ExperimentSpec:
    algorithm: str = "fairga"
    objective: str = "schwefel"
    config: FairGaConfig = field(default_factory=FairGaConfig)
    replicates: int = 1
    seed_base: int = 0
    output_dir: Path = Path("results")
    tolerance: float = 0.01

    @property
    def algorithms(self) -> list[str]:
        return ["fairga", "ga"] if self.algorithm == "both" else [self.algorithm]

    def seeds(self) -> list[int]:
        return [self.seed_base + i for i in range(self.replicates)]

    def config_for(self, seed: int) -> FairGaConfig:
        return self.config.replace(rng_seed=seed, objective_id=self.objective)

    def validate(self) -> "ExperimentSpec":
        if self.algorithm not in ("fairga", "ga", "both"):
            raise UsageError(f"unknown algorithm {self.algorithm!r}")
        if self.objective not in OBJECTIVES:
            raise UsageError(f"unknown objective {self.objective!r}; "
                             f"choose from {sorted(OBJECTIVES)}")
        if self.replicates < 1:
            raise UsageError(f"replicates must be positive, got {self.replicates}")
        if not self.tolerance >= 0:
            raise UsageError(f"tolerance must be non-negative, got {self.tolerance}")
        if "fairga" in self.algorithms:
            validate_config(self.config)
        if "ga" in self.algorithms:
            c = self.config
            validate_config(c.replace(l_min=0, s_dispose=c.s_max, r_rampup=1.0,
                                      n_max=max(c.n_max, 1)))
        return self

    @classmethod
    def from_settings(cls, settings: dict) -> "ExperimentSpec":
        cfg_kwargs = {k: v for k, v in settings.items() if k in _CFG_FIELDS}
        spec = cls(config=FairGaConfig(**cfg_kwargs))
        for key, attr in (("algorithm", "algorithm"), ("objective", "objective"),
                          ("replicates", "replicates"), ("seed", "seed_base"),
                          ("tolerance", "tolerance")):
            if key in settings:
                setattr(spec, attr, settings[key])
        if "out" in settings:
            spec.output_dir = Path(settings["out"])
        spec.objective = str(spec.objective).lower()
        return spec


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def trace_to_csv(trace: RunTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for r in trace.rows:
        w.writerow([_fmt(getattr(r, name)) for name in TRACE_HEADER])
    return buf.getvalue()


def summarize_trace_files(paths: Sequence[Path]) -> str:
    """Per-iteration median and quartiles of best fitness across trace files."""
    columns = []
    iterations = None
    for path in paths:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        its = [int(r["iteration"]) for r in rows]
        if iterations is None:
            iterations = its
        elif its != iterations:
            raise ValueError(f"{path} has a different iteration column")
        columns.append([float(r["best_fitness"]) for r in rows])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    if iterations:
        best = np.array(columns)
        q25, med, q75 = np.percentile(best, [25, 50, 75], axis=0)
        for i, t in enumerate(iterations):
            w.writerow([t, repr(float(med[i])), repr(float(q25[i])), repr(float(q75[i]))])
    return buf.getvalue()


def threshold_hit(trace: RunTrace, optimum: float, tolerance: float):
    """First row whose best fitness is within tolerance of the optimum, or None.

    The tolerance is relative: ``|best - optimum| <= tolerance * (1 + |optimum|)``.
    """
    band = tolerance * (1.0 + abs(optimum))
    for row in trace.rows:
        if abs(row.best_fitness - optimum) <= band:
            return row
    return None


def _median_or_na(values) -> str:
    vals = [math.inf if v is None else v for v in values]
    med = float(np.median(vals))
    if math.isinf(med):
        return NOT_REACHED
    return f"{med:g}"


def execute_run(spec: ExperimentSpec) -> list[Path]:
    """Run every replicate of every requested engine and write the CSV files."""
    out = spec.output_dir
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for algo in spec.algorithms:
        paths = []
        for seed in spec.seeds():
            trace = ENGINES[algo](spec.config_for(seed), spec.objective)
            path = out / f"{algo}_{spec.objective}_{seed}.csv"
            path.write_text(trace_to_csv(trace))
            logger.info("wrote %s", path)
            paths.append(path)
        summary = out / f"{algo}_{spec.objective}_summary.csv"
        summary.write_text(summarize_trace_files(paths))
        written.extend(paths + [summary])
    return written


@dataclass
class ReplicateResult:
    algorithm: str
    replicate: int
    seed: int
    iterations_to_threshold: Optional[int]
    au_to_threshold: Optional[int]
    final_best: float


def execute_compare(spec: ExperimentSpec) -> tuple[list[ReplicateResult], str]:
    obj = get_objective(spec.objective)
    results = []
    for algo in ("fairga", "ga"):
        for i, seed in enumerate(spec.seeds()):
            trace = ENGINES[algo](spec.config_for(seed), obj)
            hit = threshold_hit(trace, obj.optimum, spec.tolerance)
            results.append(ReplicateResult(
                algo, i, seed,
                hit.iteration if hit else None,
                hit.cum_au if hit else None,
                trace.rows[-1].best_fitness if trace.rows else math.nan))
    return results, compare_report(spec, results)


def compare_report(spec: ExperimentSpec, results: list[ReplicateResult]) -> str:
    obj = get_objective(spec.objective)
    lines = [f"objective {spec.objective}: optimum {obj.optimum:.6f}, "
             f"tolerance {spec.tolerance:g} (relative), {spec.replicates} replicates",
             f"{'algorithm':<10}{'replicate':>10}{'seed':>8}{'iters':>8}{'a.u.':>8}{'final best':>16}"]
    na = lambda v: NOT_REACHED if v is None else str(v)
    for r in results:
        lines.append(f"{r.algorithm:<10}{r.replicate:>10}{r.seed:>8}"
                     f"{na(r.iterations_to_threshold):>8}{na(r.au_to_threshold):>8}"
                     f"{r.final_best:>16.6f}")
    lines.append("medians")
    for algo in ("fairga", "ga"):
        mine = [r for r in results if r.algorithm == algo]
        lines.append(
            f"{algo:<10}{'':>18}"
            f"{_median_or_na([r.iterations_to_threshold for r in mine]):>8}"
            f"{_median_or_na([r.au_to_threshold for r in mine]):>8}"
            f"{float(np.median([r.final_best for r in mine])):>16.6f}")
    return "\n".join(lines) + "\n"


def compare_to_csv(results: list[ReplicateResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COMPARE_HEADER)
    for r in results:
        w.writerow([r.algorithm, r.replicate, r.seed,
                    NOT_REACHED if r.iterations_to_threshold is None else r.iterations_to_threshold,
                    NOT_REACHED if r.au_to_threshold is None else r.au_to_threshold,
                    repr(r.final_best)])
    return buf.getvalue()


def _add_common(p: argparse.ArgumentParser) -> None:
    a = p.add_argument
    a("--config", help="key = value settings file")
    a("--out", help="output directory")
    a("--csv", action="store_true", default=None, help="emit CSV")


def _add_experiment(p: argparse.ArgumentParser) -> None:
    a = p.add_argument
    a("--algorithm", choices=["fairga", "ga", "both"])
    a("--objective", choices=sorted(OBJECTIVES))
    a("--s-max", type=int)
    a("--l-min", type=int)
    a("--s-dispose", type=int)
    a("--r-rampup", type=float)
    a("--n-max", type=int)
    a("--crossover-rate", type=float)
    a("--mutation-rate", type=float)
    a("--mutation-sigma-fraction", type=float)
    a("--tournament-size", type=int)
    a("--elitism-count", type=int)
    a("--mutation-mode", choices=["gene", "chromosome"])
    a("--replicates", type=int)
    a("--seed", type=int, help="seed of replicate 0; replicate i uses seed + i")
    a("--tolerance", type=float, help="relative threshold for reaching the optimum")


def _add_flow(p: argparse.ArgumentParser) -> None:
    for name in sorted(_FLOW_FIELDS):
        p.add_argument("--" + name.replace("_", "-"), type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairga", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "run seeded experiments and write traces"),
                        ("compare", "compare FairGA and GA on identical seeds")):
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        _add_experiment(p)
    p = sub.add_parser("sustainability", help="resource-flow scenario report")
    _add_common(p)
    _add_flow(p)
    return parser


def _settings(args: argparse.Namespace) -> dict:
    settings = load_config_file(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key in KNOWN_KEYS and value is not None:
            settings[key] = value
    return settings


def cmd_run(spec: ExperimentSpec) -> int:
    spec.validate()
    execute_run(spec)
    return 0


def cmd_compare(spec: ExperimentSpec, stdout=None) -> int:
    stdout = stdout or sys.stdout
    spec.validate()
    results, report = execute_compare(spec)
    out = spec.output_dir
    out.mkdir(parents=True, exist_ok=True)
    (out / f"compare_{spec.objective}.csv").write_text(compare_to_csv(results))
    (out / f"compare_{spec.objective}_report.txt").write_text(report)
    stdout.write(report)
    return 0


def cmd_sustainability(params: FlowModelParams, as_csv: bool = False,
                       out_dir: Optional[Path] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    report = compare_scenarios(params)
    text = report.to_csv() if as_csv else report.to_text()
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        name = "sustainability.csv" if as_csv else "sustainability.txt"
        (out_dir / name).write_text(text)
    stdout.write(text)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        settings = _settings(args)
        if args.command == "sustainability":
            params = FlowModelParams(**{k: v for k, v in settings.items()
                                        if k in _FLOW_FIELDS}).validate()
            out = Path(settings["out"]) if "out" in settings else None
            return cmd_sustainability(params, bool(args.csv), out)
        spec = ExperimentSpec.from_settings(settings)
        if args.command == "run":
            return cmd_run(spec)
        return cmd_compare(spec)
    except (ConfigError, InvalidParams) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
