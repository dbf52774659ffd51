"""Verification sweep driver: runs theorem checks over a parameter grid and
writes deterministic CSV/JSON reports.

One CSV row per (theorem, q, alpha, window, sample).  Row order is the
lexicographic generation order and every float is written with
shortest-roundtrip formatting, so a fixed seed and config reproduce the
file byte for byte (the first line carries the report format version).
Counterexamples — hypothesis-satisfying samples whose conclusion fails —
are additionally persisted as standalone JSON files for replay.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .core import DEFAULT_POWER_CONFIG
from .errors import ConfigError, HypothesisError, SandwichViolationError
from .grid import GridFunction, QParams
from .monotone import (
    DecreasingMode,
    verify_converse,
    verify_corollary,
    verify_decreasing,
    verify_thm1,
)
from .mvt import composition_residual, mvt_witnesses
from .oracle import Distribution, generate_thm1_instance, sample_random_grid_function
from .rng import derive_seed

ALL_THEOREMS = ("thm1", "converse", "strict", "corollary", "dec1", "dec2", "tool", "mvt")

CSV_COLUMNS = (
    "theorem_id",
    "q",
    "alpha",
    "n0",
    "window",
    "seed",
    "hypotheses_hold",
    "conclusion_holds",
    "worst_margin",
    "witness_exponent",
    "residual",
    "min_ratio",
    "quotient",
    "max_ratio",
)


@dataclass(frozen=True)
class SweepConfig:
    q_values: tuple[float, ...] = (0.3, 0.5, 0.9)
    alpha_values: tuple[float, ...] = (0.25, 0.5, 0.75)
    window_sizes: tuple[int, ...] = (5,)
    samples_per_cell: int = 40
    seed: int = 42
    residual_tol: float = 1e-9
    n0: int = 0

    def __post_init__(self):
        if not self.q_values:
            raise ConfigError("q_values", "must be non-empty")
        for v in self.q_values:
            if not (0.0 < v < 1.0):
                raise ConfigError("q_values", f"every q must lie in (0,1), got {v}")
        if not self.alpha_values:
            raise ConfigError("alpha_values", "must be non-empty")
        for v in self.alpha_values:
            if not (0.0 < v <= 1.0):
                raise ConfigError("alpha_values", f"every alpha must lie in (0,1], got {v}")
        if not self.window_sizes:
            raise ConfigError("window_sizes", "must be non-empty")
        for w in self.window_sizes:
            if w < 2:
                raise ConfigError("window_sizes", f"window sizes must be >= 2, got {w}")
        if self.samples_per_cell < 1:
            raise ConfigError("samples_per_cell", f"must be >= 1, got {self.samples_per_cell}")
        if self.residual_tol <= 0.0:
            raise ConfigError("residual_tol", f"must be > 0, got {self.residual_tol}")

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {
            "q_values",
            "alpha_values",
            "window_sizes",
            "samples_per_cell",
            "seed",
            "residual_tol",
            "n0",
        }
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown field")
        kwargs = {}
        for key in ("q_values", "alpha_values", "window_sizes"):
            if key in data:
                if not isinstance(data[key], (list, tuple)):
                    raise ConfigError(key, "must be a list")
                kwargs[key] = tuple(data[key])
        for key in ("samples_per_cell", "seed", "n0"):
            if key in data:
                if not isinstance(data[key], int) or isinstance(data[key], bool):
                    raise ConfigError(key, "must be an integer")
                kwargs[key] = data[key]
        if "residual_tol" in data:
            if not isinstance(data["residual_tol"], (int, float)):
                raise ConfigError("residual_tol", "must be a number")
            kwargs["residual_tol"] = float(data["residual_tol"])
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path: str | Path) -> "SweepConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config", "top-level JSON value must be an object")
        return cls.from_dict(data)


@dataclass
class SweepResult:
    rows: list[dict]
    summary: dict
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 1 if self.counterexamples else 0


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _report_row(theorem, q, alpha, n0, window, seed, report) -> dict:
    return {
        "theorem_id": theorem,
        "q": q,
        "alpha": alpha,
        "n0": n0,
        "window": window,
        "seed": seed,
        "hypotheses_hold": report.hypotheses_hold,
        "conclusion_holds": report.conclusion_holds,
        "worst_margin": report.worst_margin,
        "witness_exponent": report.witness_exponent,
        "residual": report.residual,
        "min_ratio": None,
        "quotient": None,
        "max_ratio": None,
    }


def _cex_payload(row: dict, y: GridFunction, extra: dict | None = None) -> dict:
    payload = {
        "row": {k: row[k] for k in CSV_COLUMNS},
        "function": {"n_lo": y.n_lo, "values": list(y.values)},
    }
    if extra:
        payload.update(extra)
    return payload


def run_sweep(config: SweepConfig, theorems: tuple[str, ...] = ALL_THEOREMS) -> SweepResult:
    """Run the selected theorem suites over the config grid."""
    for name in theorems:
        if name not in ALL_THEOREMS:
            raise ConfigError("theorem", f"unknown theorem '{name}' (choose from {ALL_THEOREMS})")
    cfg = DEFAULT_POWER_CONFIG
    rows: list[dict] = []
    counterexamples: list[dict] = []
    n0 = config.n0
    n_generated = max(2, config.samples_per_cell // 5)

    def note_counterexample(row, y, extra=None):
        counterexamples.append(_cex_payload(row, y, extra))

    for theorem in theorems:
        for q in config.q_values:
            params = QParams(q)
            for alpha in config.alpha_values:
                for wsize in config.window_sizes:
                    n_min = n0 - wsize
                    cell_key = (theorem, repr(q), repr(alpha), wsize)

                    if theorem in ("thm1", "dec1"):
                        if alpha == 1.0:
                            continue  # generator needs alpha < 1
                        for k in range(config.samples_per_cell):
                            seed = derive_seed(config.seed, *cell_key, "rand", k)
                            y = sample_random_grid_function((n_min, n0), Distribution.UNIFORM, seed)
                            if theorem == "dec1":
                                y = y.negated()
                                rep = verify_decreasing(
                                    y, n0, alpha, params, cfg, DecreasingMode.FROM_DERIVATIVE
                                )
                            else:
                                rep = verify_thm1(y, n0, alpha, params, cfg)
                            row = _report_row(theorem, q, alpha, n0, wsize, seed, rep)
                            rows.append(row)
                            if rep.counterexample:
                                note_counterexample(row, y)
                        for k in range(n_generated):
                            seed = derive_seed(config.seed, *cell_key, "gen", k)
                            y = generate_thm1_instance(n0, n_min, alpha, params, seed, cfg)
                            if theorem == "dec1":
                                y = y.negated()
                                rep = verify_decreasing(
                                    y, n0, alpha, params, cfg, DecreasingMode.FROM_DERIVATIVE
                                )
                            else:
                                rep = verify_thm1(y, n0, alpha, params, cfg)
                            row = _report_row(theorem, q, alpha, n0, wsize, seed, rep)
                            rows.append(row)
                            if rep.counterexample:
                                note_counterexample(row, y)

                    elif theorem in ("converse", "strict"):
                        strict = theorem == "strict"
                        for k in range(config.samples_per_cell):
                            seed = derive_seed(config.seed, *cell_key, "inc", k)
                            y = sample_random_grid_function(
                                (n_min, n0), Distribution.INCREASING, seed
                            )
                            rep = verify_converse(y, n0, alpha, params, cfg, strict=strict)
                            row = _report_row(theorem, q, alpha, n0, wsize, seed, rep)
                            rows.append(row)
                            if rep.counterexample:
                                note_counterexample(row, y)

                    elif theorem == "dec2":
                        for k in range(config.samples_per_cell):
                            seed = derive_seed(config.seed, *cell_key, "dec", k)
                            y = sample_random_grid_function(
                                (n_min, n0), Distribution.DECREASING, seed
                            )
                            rep = verify_decreasing(
                                y, n0, alpha, params, cfg, DecreasingMode.FROM_MONOTONE
                            )
                            row = _report_row(theorem, q, alpha, n0, wsize, seed, rep)
                            rows.append(row)
                            if rep.counterexample:
                                note_counterexample(row, y)

                    elif theorem == "corollary":
                        if alpha == 1.0:
                            continue  # relation form needs alpha < 1
                        for k in range(config.samples_per_cell):
                            seed = derive_seed(config.seed, *cell_key, "rand", k)
                            y = sample_random_grid_function(
                                (n_min, n0 + 1), Distribution.UNIFORM, seed
                            )
                            rep = verify_corollary(y, n0, alpha, params, cfg)
                            row = _report_row(theorem, q, alpha, n0, wsize, seed, rep)
                            rows.append(row)
                            if rep.counterexample or rep.residual > config.residual_tol:
                                note_counterexample(row, y)
                        for k in range(n_generated):
                            seed = derive_seed(config.seed, *cell_key, "gen", k)
                            base = generate_thm1_instance(n0, n_min, alpha, params, seed, cfg)
                            # The hypothesis is invariant in y(q*a); any extension works.
                            extra = sample_random_grid_function(
                                (n0 + 1, n0 + 1), Distribution.UNIFORM, derive_seed(seed, "ext")
                            )
                            y = GridFunction(
                                n_min, n0 + 1, base.values + (extra.value_at(n0 + 1),)
                            )
                            rep = verify_corollary(y, n0, alpha, params, cfg)
                            row = _report_row(theorem, q, alpha, n0, wsize, seed, rep)
                            rows.append(row)
                            if rep.counterexample or rep.residual > config.residual_tol:
                                note_counterexample(row, y)

                    elif theorem == "tool":
                        if alpha == 1.0:
                            continue  # identity stated for 0 < alpha < 1
                        for k in range(config.samples_per_cell):
                            seed = derive_seed(config.seed, *cell_key, "rand", k)
                            f = sample_random_grid_function((n_min, n0), Distribution.UNIFORM, seed)
                            res = composition_residual(f, n0, alpha, n_min, params, cfg)
                            ok = res < config.residual_tol
                            row = {
                                "theorem_id": theorem,
                                "q": q,
                                "alpha": alpha,
                                "n0": n0,
                                "window": wsize,
                                "seed": seed,
                                "hypotheses_hold": True,
                                "conclusion_holds": ok,
                                "worst_margin": config.residual_tol - res,
                                "witness_exponent": None,
                                "residual": res,
                                "min_ratio": None,
                                "quotient": None,
                                "max_ratio": None,
                            }
                            rows.append(row)
                            if not ok:
                                note_counterexample(row, f)

                    elif theorem == "mvt":
                        if alpha == 1.0:
                            continue
                        for k in range(config.samples_per_cell):
                            seed = derive_seed(config.seed, *cell_key, "mvt", k)
                            f = sample_random_grid_function(
                                (n_min, n0), Distribution.UNIFORM, derive_seed(seed, "f")
                            )
                            g = sample_random_grid_function(
                                (n_min, n0), Distribution.INCREASING, derive_seed(seed, "g")
                            )
                            row = {
                                "theorem_id": theorem,
                                "q": q,
                                "alpha": alpha,
                                "n0": n0,
                                "window": wsize,
                                "seed": seed,
                                "hypotheses_hold": True,
                                "conclusion_holds": True,
                                "worst_margin": None,
                                "witness_exponent": None,
                                "residual": 0.0,
                                "min_ratio": None,
                                "quotient": None,
                                "max_ratio": None,
                            }
                            try:
                                wit = mvt_witnesses(f, g, n0, n_min, alpha, params, cfg)
                                row["min_ratio"] = wit.min_ratio
                                row["quotient"] = wit.quotient
                                row["max_ratio"] = wit.max_ratio
                                row["worst_margin"] = min(
                                    wit.quotient - wit.min_ratio, wit.max_ratio - wit.quotient
                                )
                                row["witness_exponent"] = wit.r1_exponent
                            except SandwichViolationError as exc:
                                row["conclusion_holds"] = False
                                rows.append(row)
                                counterexamples.append(
                                    {"row": {c: row[c] for c in CSV_COLUMNS}, **exc.context}
                                )
                                continue
                            except HypothesisError:
                                row["hypotheses_hold"] = False
                                row["conclusion_holds"] = False
                            rows.append(row)

    summary = _summarize(rows, config, counterexamples)
    return SweepResult(rows=rows, summary=summary, counterexamples=counterexamples)


def _summarize(rows: list[dict], config: SweepConfig, counterexamples: list[dict]) -> dict:
    per_theorem: dict[str, dict] = {}
    for row in rows:
        agg = per_theorem.setdefault(
            row["theorem_id"],
            {
                "rows": 0,
                "non_vacuous": 0,
                "conclusion_failures": 0,
                "worst_margin": None,
                "max_residual": 0.0,
            },
        )
        agg["rows"] += 1
        if row["hypotheses_hold"]:
            agg["non_vacuous"] += 1
            if not row["conclusion_holds"]:
                agg["conclusion_failures"] += 1
        margin = row["worst_margin"]
        if margin is not None and (agg["worst_margin"] is None or margin < agg["worst_margin"]):
            agg["worst_margin"] = margin
        if row["residual"] is not None:
            agg["max_residual"] = max(agg["max_residual"], row["residual"])
    return {
        "version": __version__,
        "config": {
            "q_values": list(config.q_values),
            "alpha_values": list(config.alpha_values),
            "window_sizes": list(config.window_sizes),
            "samples_per_cell": config.samples_per_cell,
            "seed": config.seed,
            "residual_tol": config.residual_tol,
            "n0": config.n0,
        },
        "theorems": dict(sorted(per_theorem.items())),
        "total_rows": len(rows),
        "counterexamples": len(counterexamples),
    }


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"# qnabla-report {__version__}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def write_reports(result: SweepResult, out_dir: str | Path) -> dict[str, Path]:
    """Write report.csv, summary.json, and counterexample files; return paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"csv": out / "report.csv", "summary": out / "summary.json"}
    paths["csv"].write_text(render_csv(result.rows))
    paths["summary"].write_text(json.dumps(result.summary, indent=2, sort_keys=True) + "\n")
    for idx, cex in enumerate(result.counterexamples):
        p = out / f"counterexample_{idx:03d}.json"
        p.write_text(json.dumps(cex, indent=2, sort_keys=True) + "\n")
        paths[f"counterexample_{idx}"] = p
    return paths
