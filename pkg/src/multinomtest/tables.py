"""Ready-made experiment configurations for the seven comparison tables.

Tables 1-2 are size studies (no alternative scenario); tables 3-7 sweep an
alternative parameter. Rows marked as the null (m=1 or b=0) carry no
alternative scenario. These builders are the single source of truth for
the JSON config files shipped under ``configs/``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .errors import ConfigError
from .reporting import config_from_dict, config_to_dict
from .simlab import ExperimentConfig, ExperimentReport, ScenarioSpec, run_experiment

__all__ = [
    "TableRow",
    "TableSpec",
    "paper_table",
    "all_paper_tables",
    "table_to_dict",
    "table_from_dict",
    "run_table",
    "PAPER_TABLE_NUMBERS",
]

PAPER_TABLE_NUMBERS = (1, 2, 3, 4, 5, 6, 7)

_METHODS = ("proposed", "bs", "zelterman")

ZIPF_GAMMA = 0.45


@dataclass(frozen=True)
class TableRow:
    label: str
    config: ExperimentConfig


@dataclass(frozen=True)
class TableSpec:
    name: str
    rows: tuple[TableRow, ...]


def _cfg(
    null: ScenarioSpec,
    alt: ScenarioSpec | None,
    reps: int,
    seed: int,
    alpha: float,
    threads: int,
) -> ExperimentConfig:
    return ExperimentConfig(
        scenario_null=null,
        scenario_alt=alt,
        methods=_METHODS,
        reps=reps,
        alpha=alpha,
        seed=seed,
        threads=threads,
    )


def paper_table(
    number: int,
    reps: int = 10_000,
    seed: int = 0,
    alpha: float = 0.05,
    threads: int = 1,
) -> TableSpec:
    """Build the row set of one comparison table.

    Tables 1-2: empirical sizes on zipf(0.45) and uniform nulls, with
    k/n_c = 10 (table 1) or n_c = 10^3 fixed (table 2). Tables 3-5 sweep
    the alternative parameter at (n=500, k=10^3) and (n=2000, k=10^4).
    Tables 6-7 sweep k with n_c = 4k and k = 4 n_c respectively.
    """
    rows: list[TableRow] = []

    def add(label: str, null: ScenarioSpec, alt: ScenarioSpec | None) -> None:
        rows.append(TableRow(label, _cfg(null, alt, reps, seed, alpha, threads)))

    if number in (1, 2):
        ks = (1_000, 10_000, 20_000, 30_000, 100_000)
        for k in ks:
            n = k // 10 if number == 1 else 1_000
            add(
                f"zipf_k{k}",
                ScenarioSpec("zipf", k=k, n1=n, n2=n, gamma=ZIPF_GAMMA),
                None,
            )
        for k in ks:
            n = k // 10 if number == 1 else 1_000
            add(f"uniform_k{k}", ScenarioSpec("uniform", k=k, n1=n, n2=n), None)
    elif number == 3:
        for n, k, ms in ((500, 1_000, (1, 2, 10, 100, 1_000)),
                         (2_000, 10_000, (1, 10, 100, 1_000, 10_000))):
            null = ScenarioSpec("zipf", k=k, n1=n, n2=n, gamma=ZIPF_GAMMA)
            for m in ms:
                alt = (
                    None
                    if m == 1
                    else ScenarioSpec(
                        "swap", k=k, n1=n, n2=n, gamma=ZIPF_GAMMA, swap_i=1, swap_j=m
                    )
                )
                add(f"n{n}_m{m}", null, alt)
    elif number in (4, 5):
        generator = "spike_merge" if number == 4 else "zero_renorm"
        sweeps = (
            ((500, 1_000, (0, 10, 20, 25, 30)), (2_000, 10_000, (0, 20, 50, 70, 100)))
            if number == 4
            else (
                (500, 1_000, (0, 100, 200, 300, 400)),
                (2_000, 10_000, (0, 1_000, 2_000, 3_000, 4_000)),
            )
        )
        for n, k, bs in sweeps:
            null = ScenarioSpec("uniform", k=k, n1=n, n2=n)
            for b in bs:
                alt = (
                    None
                    if b == 0
                    else ScenarioSpec(generator, k=k, n1=n, n2=n, b=b)
                )
                add(f"n{n}_b{b}", null, alt)
    elif number in (6, 7):
        ks = (100, 1_000, 2_000, 3_000, 10_000) if number == 6 else (
            1_000,
            2_000,
            3_000,
            10_000,
        )
        for k in ks:
            n = 4 * k if number == 6 else k // 4
            b = 50 if number == 6 else 500
            add(
                f"zero_renorm_b{b}_k{k}",
                ScenarioSpec("uniform", k=k, n1=n, n2=n),
                ScenarioSpec("zero_renorm", k=k, n1=n, n2=n, b=b),
            )
        for k in ks:
            n = 4 * k if number == 6 else k // 4
            j = 5 if number == 6 else 500
            add(
                f"swap_1_{j}_k{k}",
                ScenarioSpec("zipf", k=k, n1=n, n2=n, gamma=ZIPF_GAMMA),
                ScenarioSpec(
                    "swap", k=k, n1=n, n2=n, gamma=ZIPF_GAMMA, swap_i=1, swap_j=j
                ),
            )
    else:
        raise ConfigError(f"no table {number}; expected 1..7")
    return TableSpec(name=f"table{number}", rows=tuple(rows))


def all_paper_tables(**kwargs: Any) -> list[TableSpec]:
    return [paper_table(n, **kwargs) for n in PAPER_TABLE_NUMBERS]


def table_to_dict(spec: TableSpec) -> dict:
    return {
        "name": spec.name,
        "rows": [
            {"label": row.label, "config": config_to_dict(row.config)}
            for row in spec.rows
        ],
    }


def table_from_dict(data: Mapping[str, Any]) -> TableSpec:
    if "rows" not in data:
        raise ConfigError("table document needs a 'rows' list")
    rows = []
    labels: set[str] = set()
    for i, raw in enumerate(data["rows"]):
        if "config" not in raw:
            raise ConfigError(f"row {i} is missing 'config'")
        label = str(raw.get("label", f"row{i}"))
        if label in labels:
            raise ConfigError(f"duplicate row label {label!r}")
        labels.add(label)
        rows.append(TableRow(label=label, config=config_from_dict(raw["config"])))
    if not rows:
        raise ConfigError("table document has no rows")
    return TableSpec(name=str(data.get("name", "table")), rows=tuple(rows))


def run_table(
    spec: TableSpec, collect_statistics: bool = False
) -> list[tuple[str, ExperimentReport]]:
    """Run every row of a table in order."""
    return [
        (row.label, run_experiment(row.config, collect_statistics))
        for row in spec.rows
    ]
