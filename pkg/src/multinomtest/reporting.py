"""Deterministic serialization of configs, reports, and curve data.

All floats are written with 10 significant digits and keys are emitted in
sorted order, so re-parsing any emitted JSON document and re-serializing it
reproduces the bytes exactly, and output files are byte-identical across
runs and thread counts.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .core import TestOutcome
from .errors import ConfigError
from .simlab import ExperimentConfig, ExperimentReport, ScenarioSpec

__all__ = [
    "round10",
    "fmt10",
    "to_json",
    "write_text",
    "scenario_to_dict",
    "scenario_from_dict",
    "config_to_dict",
    "config_from_dict",
    "report_to_dict",
    "outcome_to_dict",
    "report_csv_text",
    "curve_csv_text",
    "read_counts_csv",
]


def round10(x: float) -> float:
    """Round a float to 10 significant decimal digits.

    Idempotent: parsing the printed value and rounding again returns the
    same double, which makes JSON round-trips byte-stable.
    """
    return float(f"{float(x):.10g}")


def fmt10(x: float) -> str:
    """Format a float with 10 significant digits for CSV cells."""
    return f"{float(x):.10g}"


def _normalize(obj: Any) -> Any:
    if isinstance(obj, Mapping):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [_normalize(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round10(float(obj))
    return obj


def to_json(obj: Any) -> str:
    """Serialize with sorted keys, 2-space indent, and rounded floats."""
    return json.dumps(_normalize(obj), sort_keys=True, indent=2) + "\n"


def write_text(path: str | Path, text: str) -> None:
    """Write with fixed newline handling regardless of platform."""
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def scenario_to_dict(spec: ScenarioSpec) -> dict:
    out = asdict(spec)
    return {k: v for k, v in out.items() if v is not None}


def scenario_from_dict(data: Mapping[str, Any]) -> ScenarioSpec:
    allowed = {"generator", "k", "n1", "n2", "gamma", "b", "swap_i", "swap_j"}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown scenario fields: {sorted(unknown)}")
    try:
        return ScenarioSpec(**data)
    except TypeError as exc:
        raise ConfigError(f"bad scenario: {exc}") from exc


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {
        "scenario_null": scenario_to_dict(cfg.scenario_null),
        "scenario_alt": (
            scenario_to_dict(cfg.scenario_alt)
            if cfg.scenario_alt is not None
            else None
        ),
        "methods": list(cfg.methods),
        "reps": cfg.reps,
        "alpha": cfg.alpha,
        "seed": cfg.seed,
        "threads": cfg.threads,
        "n_permutations": cfg.n_permutations,
        "zelterman_mode": cfg.zelterman_mode,
        "cell_rule": cfg.cell_rule,
    }


def config_from_dict(data: Mapping[str, Any]) -> ExperimentConfig:
    data = dict(data)
    null_raw = data.pop("scenario_null", None)
    if null_raw is None:
        raise ConfigError("config is missing scenario_null")
    alt_raw = data.pop("scenario_alt", None)
    allowed = {
        "methods",
        "reps",
        "alpha",
        "seed",
        "threads",
        "n_permutations",
        "zelterman_mode",
        "cell_rule",
    }
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    if "methods" in data:
        data["methods"] = tuple(data["methods"])
    if "reps" not in data:
        raise ConfigError("config is missing reps")
    try:
        return ExperimentConfig(
            scenario_null=scenario_from_dict(null_raw),
            scenario_alt=(
                scenario_from_dict(alt_raw) if alt_raw is not None else None
            ),
            **data,
        )
    except TypeError as exc:
        raise ConfigError(f"bad config: {exc}") from exc


def report_to_dict(report: ExperimentReport) -> dict:
    """JSON-ready view of a report.

    ``wall_time`` and raw statistics are deliberately omitted so the
    serialized form depends only on (config, seed).
    """
    return {
        "config": config_to_dict(report.config),
        "reps_completed": report.reps_completed,
        "results": {
            m: {
                "rate": r.rate,
                "mc_standard_error": r.mc_standard_error,
                "rejections": r.rejections,
                "degenerate": r.degenerate,
            }
            for m, r in report.results.items()
        },
    }


def outcome_to_dict(outcome: TestOutcome) -> dict:
    return {
        "method": outcome.method,
        "statistic": outcome.statistic,
        "p_value": outcome.p_value,
        "reject": outcome.reject,
        "alpha": outcome.alpha,
        "diagnostics": dict(outcome.diagnostics),
    }


def report_csv_text(
    reports: Sequence[tuple[str, ExperimentReport]] | ExperimentReport,
) -> str:
    """CSV rows (method, rate, se, reps), with a label column when several
    labeled reports are combined into one table."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if isinstance(reports, ExperimentReport):
        writer.writerow(["method", "rate", "se", "reps"])
        for m in reports.config.methods:
            r = reports.results[m]
            writer.writerow(
                [m, fmt10(r.rate), fmt10(r.mc_standard_error), reports.reps_completed]
            )
        return buf.getvalue()
    writer.writerow(["label", "method", "rate", "se", "reps"])
    for label, report in reports:
        for m in report.config.methods:
            r = report.results[m]
            writer.writerow(
                [
                    label,
                    m,
                    fmt10(r.rate),
                    fmt10(r.mc_standard_error),
                    report.reps_completed,
                ]
            )
    return buf.getvalue()


def curve_csv_text(header: Sequence[str], columns: Sequence[np.ndarray]) -> str:
    """Delimited curve data; one row per grid point."""
    arrays = [np.asarray(c) for c in columns]
    if len({a.size for a in arrays}) != 1:
        raise ValueError("curve columns must have equal length")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in zip(*arrays):
        writer.writerow([fmt10(v) for v in row])
    return buf.getvalue()


def read_counts_csv(path: str | Path) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Parse a counts file: header ``category,count1,count2``, one row per
    category, counts nonnegative integers, categories unique.

    Returns (categories, counts1, counts2).

    Raises:
        ConfigError: any malformation (missing/garbled header, non-integer
            or negative counts, duplicate categories, no data rows).
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows or [c.strip() for c in rows[0]] != ["category", "count1", "count2"]:
        raise ConfigError(
            f"{path}: expected header 'category,count1,count2'"
        )
    categories: list[str] = []
    seen: set[str] = set()
    c1: list[int] = []
    c2: list[int] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ConfigError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
        name = row[0].strip()
        if name in seen:
            raise ConfigError(f"{path}:{lineno}: duplicate category {name!r}")
        seen.add(name)
        values = []
        for cell in row[1:]:
            cell = cell.strip()
            try:
                value = int(cell)
            except ValueError as exc:
                raise ConfigError(
                    f"{path}:{lineno}: count {cell!r} is not an integer"
                ) from exc
            if value < 0:
                raise ConfigError(f"{path}:{lineno}: negative count {value}")
            values.append(value)
        categories.append(name)
        c1.append(values[0])
        c2.append(values[1])
    if not categories:
        raise ConfigError(f"{path}: no data rows")
    return categories, np.asarray(c1, dtype=np.int64), np.asarray(c2, dtype=np.int64)
