"""Command-line surface: population, estimate, compare, simulate, curve.

Exit codes: 0 success, 2 usage/parse error, 3 data error (bad column,
degenerate scale), 4 simulation failure-rate breach.  Results go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .distributions import parse_distribution
from .errors import SkewkitError
from .inference import difference_interval, interval, point_estimate
from .quantiles import DEFAULT_BANDWIDTH, SortedSample
from .simulation import SimConfig, run_coverage
from .skewness import (
    Direction,
    MeasureKind,
    SkewMeasure,
    parse_measure,
    population_grid,
    population_measure,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_SIMULATION = 4

STANDARD_PS = (0.05, 0.1, 0.15, 0.2, 0.25)
_AUC_KINDS = (
    MeasureKind.AUC_GAMMA,
    MeasureKind.AUC_LAMBDA,
    MeasureKind.AUC_GAMMA_STAR,
    MeasureKind.AUC_LAMBDA_STAR,
)


class DataError(SkewkitError):
    """Input-data problem surfaced by the CLI (bad column, too few rows)."""


def _fmt(x) -> str:
    if x is None:
        return "-"
    return f"{x:.6g}"


def expand_measures(
    text: str,
    direction: Direction = Direction.RIGHT,
    j_points: int = 100,
    include_b3: bool = True,
) -> list[SkewMeasure]:
    """Expand a comma-separated measure list; ``all`` is the standard set:
    gamma and lambda at p = 0.05..0.25, the four AUCs, and (where it makes
    sense) b3."""
    measures: list[SkewMeasure] = []
    for token in (t.strip() for t in text.split(",")):
        if not token:
            continue
        if token.lower() == "all":
            for p in STANDARD_PS:
                measures.append(SkewMeasure(MeasureKind.GAMMA, p=p, direction=direction))
            for p in STANDARD_PS:
                measures.append(SkewMeasure(MeasureKind.LAMBDA, p=p, direction=direction))
            for kind in _AUC_KINDS:
                measures.append(SkewMeasure(kind, direction=direction, j_points=j_points))
            if include_b3:
                measures.append(SkewMeasure(MeasureKind.B3))
        else:
            measures.append(parse_measure(token, direction=direction, j_points=j_points))
    seen: dict[str, SkewMeasure] = {}
    for m in measures:
        seen.setdefault(m.label(), m)
    if not seen:
        raise ValueError("no measures given")
    return list(seen.values())


def read_numeric_column(path: str, column: str) -> np.ndarray:
    """Load one numeric CSV column, dropping non-finite rows with a count.

    The first line is treated as a header whenever any of its fields is
    non-numeric.  ``column`` is a 0-based index if it parses as an integer,
    otherwise a header name.
    """
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from exc
    if not rows:
        raise DataError(f"{path}: file is empty")

    def numeric(cell: str) -> bool:
        try:
            float(cell)
        except ValueError:
            return False
        return True

    has_header = not all(numeric(c) for c in rows[0])
    header = [c.strip() for c in rows[0]] if has_header else None
    body = rows[1:] if has_header else rows

    try:
        idx = int(column)
    except ValueError:
        if header is None:
            raise DataError(f"{path}: no header row, select the column by index") from None
        try:
            idx = header.index(column)
        except ValueError:
            raise DataError(f"{path}: no column named {column!r}") from None
    if body and not (0 <= idx < max(len(r) for r in body)):
        raise DataError(f"{path}: column index {idx} out of range")

    values = []
    dropped = 0
    for row in body:
        cell = row[idx].strip() if idx < len(row) else ""
        try:
            v = float(cell)
        except ValueError:
            dropped += 1
            continue
        if not np.isfinite(v):
            dropped += 1
            continue
        values.append(v)
    if dropped:
        print(f"{path}: dropped {dropped} non-finite row(s)", file=sys.stderr)
    if len(values) < 10:
        raise DataError(f"{path}: need at least 10 finite rows, got {len(values)}")
    return np.asarray(values)


def _emit_table(header: list[str], rows: list[list[str]]) -> None:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for row in rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())


def _emit_csv(header: list[str], rows: list[list[str]]) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


# --------------------------------------------------------------------------
# subcommands


def cmd_population(args) -> int:
    dist = args.dist
    measures = expand_measures(args.measures, args.direction, args.j, include_b3=True)
    values = [(m, population_measure(dist, m)) for m in measures]
    if args.format == "json":
        _emit_json({
            "command": "population",
            "dist": repr(dist),
            "j": args.j,
            "values": [{"measure": m.label(), "value": v} for m, v in values],
        })
    else:
        header = ["measure", "value"]
        rows = [[m.label(), _fmt(v)] for m, v in values]
        (_emit_csv if args.format == "csv" else _emit_table)(header, rows)
    return EXIT_OK


def _estimate_rows(sample: SortedSample, measures, level, rule):
    rows = []
    for m in measures:
        if m.kind is MeasureKind.B3:
            est = point_estimate(sample, m, rule)
            rows.append((m, est.value, None, None))
        else:
            iv = interval(sample, m, level, rule)
            rows.append((m, iv.estimate, iv.lower, iv.upper))
    return rows


def cmd_estimate(args) -> int:
    data = read_numeric_column(args.input, args.column)
    sample = SortedSample.from_data(data)
    measures = expand_measures(args.measures, args.direction, include_b3=True)
    rows = _estimate_rows(sample, measures, args.level, DEFAULT_BANDWIDTH)
    if args.format == "json":
        _emit_json({
            "command": "estimate",
            "input": args.input,
            "n": sample.n,
            "level": args.level,
            "estimates": [
                {"measure": m.label(), "estimate": est, "lower": lo, "upper": hi}
                for m, est, lo, hi in rows
            ],
        })
    else:
        header = ["measure", "estimate", "lower", "upper"]
        body = [[m.label(), _fmt(est), _fmt(lo), _fmt(hi)] for m, est, lo, hi in rows]
        (_emit_csv if args.format == "csv" else _emit_table)(header, body)
    return EXIT_OK


def cmd_compare(args) -> int:
    col_a = args.column
    col_b = args.column_b if args.column_b is not None else args.column
    sample_a = SortedSample.from_data(read_numeric_column(args.input_a, col_a))
    sample_b = SortedSample.from_data(read_numeric_column(args.input_b, col_b))
    measures = expand_measures(args.measures, args.direction, include_b3=False)
    if any(m.kind is MeasureKind.B3 for m in measures):
        raise ValueError("b3 has no standard error and cannot be compared")
    diffs = [
        difference_interval(sample_a, sample_b, m, args.level, DEFAULT_BANDWIDTH)
        for m in measures
    ]
    if args.format == "json":
        _emit_json({
            "command": "compare",
            "input_a": args.input_a,
            "input_b": args.input_b,
            "level": args.level,
            "differences": [d.to_dict() for d in diffs],
        })
    else:
        header = [
            "measure", "estimate_a", "ci_a", "estimate_b", "ci_b",
            "difference", "ci_diff",
        ]
        body = []
        for d in diffs:
            body.append([
                d.measure.label(),
                _fmt(d.a.estimate), f"({_fmt(d.a.lower)}, {_fmt(d.a.upper)})",
                _fmt(d.b.estimate), f"({_fmt(d.b.lower)}, {_fmt(d.b.upper)})",
                _fmt(d.difference), f"({_fmt(d.lower)}, {_fmt(d.upper)})",
            ])
        if args.format == "csv":
            flat_header = [
                "measure", "estimate_a", "lower_a", "upper_a",
                "estimate_b", "lower_b", "upper_b",
                "difference", "lower", "upper",
            ]
            flat = [
                [d.measure.label(), _fmt(d.a.estimate), _fmt(d.a.lower), _fmt(d.a.upper),
                 _fmt(d.b.estimate), _fmt(d.b.lower), _fmt(d.b.upper),
                 _fmt(d.difference), _fmt(d.lower), _fmt(d.upper)]
                for d in diffs
            ]
            _emit_csv(flat_header, flat)
        else:
            _emit_table(header, body)
    return EXIT_OK


def cmd_simulate(args) -> int:
    doc = {}
    if args.config:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise UsageError(f"{args.config}: {exc.strerror or exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.config}: invalid JSON ({exc})") from exc
    for key in ("dist", "n", "trials", "seed", "level", "threads", "bandwidth", "direction"):
        value = getattr(args, key, None)
        if value is not None:
            doc[key] = value
    if args.measures is not None:
        doc["measures"] = [t.strip() for t in args.measures.split(",") if t.strip()]
    if "threads" not in doc:
        env = os.environ.get("SKEWKIT_THREADS")
        if env:
            doc["threads"] = env
    if isinstance(doc.get("threads"), str) and doc["threads"] != "auto":
        doc["threads"] = int(doc["threads"])
    try:
        cfg = SimConfig.from_dict(doc)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc

    report = run_coverage(cfg)
    if args.format == "json":
        print(report.to_json())
    elif args.format == "csv":
        header = ["measure", "truth", "coverage", "mean_width", "failures"]
        rows = [
            [r.measure.label(), _fmt(r.truth), f"{r.coverage:.4f}",
             _fmt(r.mean_width), str(r.failures)]
            for r in report.results
        ]
        _emit_csv(header, rows)
    else:
        print(report.render_text())
    print(f"elapsed: {report.elapsed_seconds:.2f}s", file=sys.stderr)
    if report.failure_reasons:
        print(f"trial failures: {report.failure_reasons}", file=sys.stderr)
    if report.failure_rate_exceeded:
        print("failure rate above 1%; coverage estimates are unreliable", file=sys.stderr)
        return EXIT_SIMULATION
    return EXIT_OK


_CURVE_FAMILIES = {
    "gamma": MeasureKind.GAMMA,
    "lambda": MeasureKind.LAMBDA,
    "gamma_star": MeasureKind.GAMMA_STAR,
    "lambda_star": MeasureKind.LAMBDA_STAR,
}


def cmd_curve(args) -> int:
    kind = _CURVE_FAMILIES[args.family]
    grid = population_grid(args.dist, j_points=args.points)
    numer = grid.s_values()
    if kind in (MeasureKind.LAMBDA, MeasureKind.LAMBDA_STAR):
        denom = grid.r2_values(args.direction)
    else:
        denom = grid.r1_values()
    curve = numer / denom
    if kind in (MeasureKind.GAMMA_STAR, MeasureKind.LAMBDA_STAR):
        curve = grid.base_probs * curve
    points = list(zip(grid.base_probs, curve))
    if args.format == "json":
        _emit_json({
            "command": "curve",
            "dist": repr(args.dist),
            "family": args.family,
            "points": [{"p": float(p), "value": float(v)} for p, v in points],
        })
    else:
        header = ["p", "value"]
        rows = [[_fmt(float(p)), _fmt(float(v))] for p, v in points]
        (_emit_csv if args.format == "csv" else _emit_table)(header, rows)
    return EXIT_OK


# --------------------------------------------------------------------------
# argument plumbing


class UsageError(Exception):
    """Maps to exit code 2."""


def _direction(text: str) -> Direction:
    try:
        return Direction(text.lower())
    except ValueError:
        raise argparse.ArgumentTypeError("direction must be 'right' or 'left'") from None


def _add_format(parser):
    parser.add_argument(
        "--format", choices=("text", "json", "csv"), default="text",
        help="output format (default: text)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewkit",
        description="Quantile-based skewness measures with delta-method confidence intervals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("population", help="population values of skewness measures")
    p.add_argument("--dist", required=True, type=parse_distribution,
                   help="distribution, e.g. 'lognormal(0,1)' or 'exp(1)'")
    p.add_argument("--measures", required=True,
                   help="comma list: gamma@0.25, lambda@0.05, auc_gamma, ..., b3, or 'all'")
    p.add_argument("--j", type=int, default=100, help="midpoint grid size for AUC kinds")
    p.add_argument("--direction", type=_direction, default=Direction.RIGHT)
    _add_format(p)
    p.set_defaults(func=cmd_population)

    p = sub.add_parser("estimate", help="estimates and confidence intervals from a CSV column")
    p.add_argument("input", help="CSV file")
    p.add_argument("--column", required=True, help="column name or 0-based index")
    p.add_argument("--measures", required=True)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--direction", type=_direction, default=Direction.RIGHT)
    _add_format(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("compare", help="difference of measures between two samples")
    p.add_argument("input_a", help="CSV file for group A")
    p.add_argument("input_b", help="CSV file for group B")
    p.add_argument("--column", required=True, help="column (both files unless --column-b)")
    p.add_argument("--column-b", default=None, help="column for group B")
    p.add_argument("--measures", required=True)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--direction", type=_direction, default=Direction.RIGHT)
    _add_format(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", help="Monte Carlo coverage study from a JSON config")
    p.add_argument("config", nargs="?", default=None, help="JSON config path")
    p.add_argument("--dist", default=None, help="override: distribution string")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--level", type=float, default=None)
    p.add_argument("--threads", default=None, help="positive integer or 'auto'")
    p.add_argument("--bandwidth", default=None, help="'default' or a fixed value in (0,0.5)")
    p.add_argument("--direction", default=None, choices=("right", "left"))
    p.add_argument("--measures", default=None, help="override: comma list of measures")
    _add_format(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("curve", help="population skewness curve data for plotting")
    p.add_argument("--dist", required=True, type=parse_distribution)
    p.add_argument("--family", required=True, choices=sorted(_CURVE_FAMILIES))
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--direction", type=_direction, default=Direction.RIGHT)
    _add_format(p)
    p.set_defaults(func=cmd_curve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"skewkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # bad measure grammar, bad parameters: caller-side mistakes
        print(f"skewkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SkewkitError as exc:
        print(f"skewkit: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
