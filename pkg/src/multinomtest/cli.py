"""Command-line frontend: test, simulate, neighborhood, and corpus.

All subcommands are deterministic given their flags and seed. Exit codes:
0 success, 2 input or configuration error, 3 internal numeric failure.
JSON goes to standard output with sorted keys and 10-significant-digit
floats, so emitted documents re-serialize byte-identically.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .core import make_two_sample
from .corpus import corpus_neighborhood_study, load_document_group
from .errors import (
    DegeneratePermutationError,
    DegenerateVarianceError,
    MultinomTestError,
)
from .neighborhood import delta_grid, neighborhood_curve
from .reporting import (
    curve_csv_text,
    outcome_to_dict,
    read_counts_csv,
    report_csv_text,
    report_to_dict,
    to_json,
    write_text,
)
from .stats import (
    bai_saranadasa_test,
    pearson_chi2,
    proposed_test,
    zelterman_test,
)
from .tables import TableRow, TableSpec, run_table, table_from_dict

__all__ = ["main"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3

_METHOD_ORDER = ("proposed", "chi2", "zelterman", "bs")
_CELL_RULES = {"expected": "expected_positive", "observed": "observed_positive"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multinomtest",
        description="Two-sample tests for sparse high-dimensional multinomial counts.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run tests on one counts file")
    p_test.add_argument("--input", required=True, help="CSV: category,count1,count2")
    p_test.add_argument(
        "--method",
        default="proposed",
        choices=[*_METHOD_ORDER, "all"],
    )
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--seed", type=int, default=0)
    p_test.add_argument("--permutations", type=int, default=2000)
    p_test.add_argument("--cell-rule", default="expected", choices=sorted(_CELL_RULES))
    p_test.add_argument(
        "--zelterman-mode", default="permutation", choices=["permutation", "exact"]
    )

    p_sim = sub.add_parser("simulate", help="run a Monte Carlo experiment config")
    p_sim.add_argument("--config", required=True, help="experiment JSON document")
    p_sim.add_argument("--reps", type=int, default=None, help="override replicates")
    p_sim.add_argument("--seed", type=int, default=None, help="override seed")
    p_sim.add_argument("--threads", type=int, default=None, help="override threads")
    p_sim.add_argument("--out", default=None, help="write rate CSV here")
    p_sim.add_argument("--json-out", default=None, help="write JSON report here")
    p_sim.add_argument(
        "--plot", action="store_true", help="render a rates figure next to --out"
    )

    p_nbr = sub.add_parser("neighborhood", help="shifted p-value curve for one file")
    p_nbr.add_argument("--input", required=True)
    p_nbr.add_argument("--alpha", type=float, default=0.05)
    p_nbr.add_argument(
        "--delta-max", type=float, default=None, help="default: statistic + 4"
    )
    p_nbr.add_argument("--step", type=float, default=0.01)
    p_nbr.add_argument("--out", default=None, help="write curve CSV here")
    p_nbr.add_argument(
        "--plot", action="store_true", help="render the curve next to --out"
    )

    p_cor = sub.add_parser("corpus", help="two-group document study")
    p_cor.add_argument("--group1", required=True, help="directory of text files")
    p_cor.add_argument("--group2", required=True, help="directory of text files")
    p_cor.add_argument("--sample", type=int, default=50)
    p_cor.add_argument("--replications", type=int, default=100)
    p_cor.add_argument("--alpha", type=float, default=0.05)
    p_cor.add_argument("--seed", type=int, default=0)
    p_cor.add_argument("--threads", type=int, default=1)
    p_cor.add_argument("--delta-max", type=float, default=25.0)
    p_cor.add_argument("--step", type=float, default=0.25)
    p_cor.add_argument("--out", default=None, help="write mean-curve CSV here")
    p_cor.add_argument(
        "--detail-out", default=None, help="write per-replication CSV here"
    )
    p_cor.add_argument(
        "--plot", action="store_true", help="render mean curves next to --out"
    )
    return parser


def _cmd_test(args: argparse.Namespace) -> int:
    _, c1, c2 = read_counts_csv(args.input)
    ts = make_two_sample(c1, c2)
    methods = list(_METHOD_ORDER) if args.method == "all" else [args.method]
    results = []
    for m in methods:
        try:
            if m == "proposed":
                outcome = proposed_test(ts, args.alpha)
            elif m == "chi2":
                outcome = pearson_chi2(
                    ts, args.alpha, cell_rule=_CELL_RULES[args.cell_rule]
                )
            elif m == "zelterman":
                outcome = zelterman_test(
                    ts,
                    args.alpha,
                    n_permutations=args.permutations,
                    seed=args.seed,
                    standardization=args.zelterman_mode,
                )
            else:
                outcome = bai_saranadasa_test(ts, args.alpha)
        except (DegenerateVarianceError, DegeneratePermutationError):
            results.append(
                {
                    "method": m,
                    "statistic": None,
                    "p_value": None,
                    "reject": False,
                    "alpha": args.alpha,
                    "degenerate_variance": True,
                    "diagnostics": {},
                }
            )
            continue
        results.append(outcome_to_dict(outcome))
    sys.stdout.write(to_json(results))
    return EXIT_OK


def _load_table_document(path: str) -> TableSpec:
    from .errors import ConfigError
    from .reporting import config_from_dict

    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {p}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p} is not valid JSON: {exc}") from exc
    if isinstance(data, dict) and "rows" in data:
        return table_from_dict(data)
    if isinstance(data, dict):
        return TableSpec(name=p.stem, rows=(TableRow("config", config_from_dict(data)),))
    raise ConfigError(f"{p}: expected a JSON object")


def _cmd_simulate(args: argparse.Namespace) -> int:
    spec = _load_table_document(args.config)
    overrides = {}
    if args.reps is not None:
        overrides["reps"] = args.reps
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    if overrides:
        spec = TableSpec(
            name=spec.name,
            rows=tuple(
                TableRow(r.label, replace(r.config, **overrides)) for r in spec.rows
            ),
        )
    outcomes = run_table(spec)
    document = {
        "name": spec.name,
        "rows": [
            {"label": label, "report": report_to_dict(report)}
            for label, report in outcomes
        ],
    }
    text = to_json(document)
    sys.stdout.write(text)
    if args.json_out:
        write_text(args.json_out, text)
    if args.out:
        if len(outcomes) == 1 and outcomes[0][0] == "config":
            csv_text = report_csv_text(outcomes[0][1])
        else:
            csv_text = report_csv_text(outcomes)
        write_text(args.out, csv_text)
        if args.plot:
            from .plots import figure_path_for, save_rates_figure

            rows = [
                (label, {m: res.rate for m, res in report.results.items()})
                for label, report in outcomes
            ]
            save_rates_figure(rows, figure_path_for(args.out), title=spec.name)
    return EXIT_OK


def _cmd_neighborhood(args: argparse.Namespace) -> int:
    _, c1, c2 = read_counts_csv(args.input)
    ts = make_two_sample(c1, c2)
    curve = neighborhood_curve(
        ts, delta_max=args.delta_max, step=args.step, alpha=args.alpha
    )
    summary = {
        "statistic": curve.statistic,
        "delta_star": curve.delta_star,
        "alpha": curve.alpha,
        "p_value": float(curve.p_values[0]),
    }
    sys.stdout.write(to_json(summary))
    if args.out:
        write_text(
            args.out, curve_csv_text(["delta", "p_delta"], [curve.deltas, curve.p_values])
        )
        if args.plot:
            from .plots import figure_path_for, save_curve_figure

            save_curve_figure(
                curve.deltas,
                {"p_delta": curve.p_values},
                figure_path_for(args.out),
                alpha=curve.alpha,
            )
    return EXIT_OK


def _cmd_corpus(args: argparse.Namespace) -> int:
    g1 = load_document_group(args.group1)
    g2 = load_document_group(args.group2)
    deltas = delta_grid(args.delta_max, args.step)
    study = corpus_neighborhood_study(
        g1,
        g2,
        sample_size=args.sample,
        replications=args.replications,
        alpha=args.alpha,
        deltas=deltas,
        seed=args.seed,
        threads=args.threads,
    )

    def mode_summary(stats: np.ndarray, dstar: np.ndarray, curves: np.ndarray):
        valid = ~np.isnan(stats)
        n_valid = int(valid.sum())
        if n_valid == 0:
            return {"replications_used": 0}
        return {
            "replications_used": n_valid,
            "mean_statistic": float(np.mean(stats[valid])),
            "mean_delta_star": float(np.mean(dstar[valid])),
            "rejection_rate_at_zero": float(
                np.mean(curves[valid, 0] < args.alpha)
            ),
        }

    summary = {
        "group1": g1.label,
        "group2": g2.label,
        "sample_size": args.sample,
        "replications": args.replications,
        "alpha": args.alpha,
        "power_mode": mode_summary(
            study.power_statistics, study.power_delta_star, study.power_curves
        ),
        "size_mode": mode_summary(
            study.size_statistics, study.size_delta_star, study.size_curves
        ),
    }
    sys.stdout.write(to_json(summary))
    if args.out:
        write_text(
            args.out,
            curve_csv_text(
                ["delta", "p_power_mean", "p_size_mean"],
                [study.deltas, study.power_mean, study.size_mean],
            ),
        )
        if args.plot:
            from .plots import figure_path_for, save_curve_figure

            save_curve_figure(
                study.deltas,
                {"power": study.power_mean, "size": study.size_mean},
                figure_path_for(args.out),
                alpha=args.alpha,
            )
    if args.detail_out:
        from .reporting import fmt10

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["replication", "mode", "delta", "p_value"])
        for mode, curves in (("power", study.power_curves), ("size", study.size_curves)):
            for r in range(args.replications):
                for j, d in enumerate(study.deltas):
                    writer.writerow([r, mode, fmt10(d), fmt10(curves[r, j])])
        write_text(args.detail_out, buf.getvalue())
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "test": _cmd_test,
        "simulate": _cmd_simulate,
        "neighborhood": _cmd_neighborhood,
        "corpus": _cmd_corpus,
    }
    try:
        return handlers[args.command](args)
    except (DegenerateVarianceError, DegeneratePermutationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except MultinomTestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (FloatingPointError, ZeroDivisionError, OverflowError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
