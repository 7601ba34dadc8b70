"""Command-line interface.

Subcommands: validate, table, fit, lvalues, qseries, export-dot.  Data
written to --out (or stdout) is deterministic: fixed orderings, no
timestamps; per-layer wall times go to stderr only.

Exit codes: 0 success, 1 domain failure (validation, disconnection, route
mismatch), 2 usage or parse failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass

from .fit import (
    RouteMismatchError,
    ValuationSequence,
    SequenceEntry,
    fit_window,
    format_fit,
    leading_coefficients_integral,
    monomial_basis,
    sequence_entry,
    verify_fit,
)
from .graphs import GraphInputError, validate_base
from .lfunctions import TowerCalculator, VanishingLValueError, orbit_records
from .series import q_series
from .voltage import (
    BudgetExceededError,
    DisconnectedCoverError,
    SpecFormatError,
    check_tower_connectivity,
    derived_graph,
    derived_to_dot,
    load_tower_spec_file,
)

DEFAULT_BUDGET = 3000
BUDGET_ENV = "ELLTOWERS_BUDGET"


def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_BUDGET


@dataclass(frozen=True)
class RunConfig:
    spec_path: str
    n_max: int | None = None
    budget: int = DEFAULT_BUDGET
    trunc: int | None = None
    fmt: str = "csv"
    out: str | None = None
    jobs: int = 1
    level: int | None = None
    layer: int | None = None
    digit_limit: int = 0

    def __post_init__(self):
        if self.n_max is not None and self.n_max < 0:
            raise ValueError("--n-max must be nonnegative")
        if self.budget < 0:
            raise ValueError("--budget must be nonnegative")
        if self.jobs < 1:
            raise ValueError("--jobs must be positive")


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        spec_path=args.spec,
        n_max=getattr(args, "n_max", None),
        budget=getattr(args, "budget", DEFAULT_BUDGET),
        trunc=getattr(args, "trunc", None),
        fmt=getattr(args, "format", "csv"),
        out=getattr(args, "out", None),
        jobs=getattr(args, "jobs", 1),
        level=getattr(args, "level", None),
        layer=getattr(args, "layer", None),
        digit_limit=getattr(args, "digit_limit", 0),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elltowers", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_max=False, output=False, budget=False, jobs=False):
        p.add_argument("--spec", required=True, help="tower spec JSON file")
        if n_max:
            p.add_argument("--n-max", type=int, required=True, help="deepest layer to compute")
        if budget:
            p.add_argument(
                "--budget",
                type=int,
                default=_default_budget(),
                help=f"vertex budget for the matrix-tree cross-check (env {BUDGET_ENV})",
            )
        if jobs:
            p.add_argument("--jobs", type=int, default=1, help="parallel workers for orbit evaluation")
        if output:
            p.add_argument("--format", choices=("csv", "json"), default="csv")
            p.add_argument("--out", default=None, help="output path (default: stdout)")

    common(sub.add_parser("validate", help="check the spec and tower connectivity"))

    p = sub.add_parser("table", help="per-layer valuations of the tree numbers")
    common(p, n_max=True, output=True, budget=True, jobs=True)

    p = sub.add_parser("fit", help="candidate growth polynomial from the deepest window")
    common(p, n_max=True, output=True, budget=True, jobs=True)

    p = sub.add_parser("lvalues", help="per-orbit special values at one layer")
    common(p, output=True, jobs=True)
    p.add_argument("--level", type=int, required=True, help="layer n >= 1")
    p.add_argument(
        "--digit-limit",
        type=int,
        default=0,
        help="suppress integer values predicted to exceed this many digits (0 = no limit)",
    )

    p = sub.add_parser("qseries", help="coefficients of the determinant series Q(T)")
    common(p)
    p.add_argument("--trunc", type=int, default=None, help="total-degree truncation")
    p.add_argument("--out", default=None)

    p = sub.add_parser("export-dot", help="DOT rendering of one layer, fiber-colored")
    common(p)
    p.add_argument("--layer", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--budget", type=int, default=_default_budget())

    return parser


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _monomial_label(k: int, j: int) -> str:
    parts = []
    if k == 1:
        parts.append("X")
    elif k > 1:
        parts.append(f"X^{k}")
    if j == 1:
        parts.append("Y")
    return "*".join(parts) if parts else "1"


# subcommands -------------------------------------------------------------------


def _cmd_validate(config: RunConfig) -> int:
    spec = load_tower_spec_file(config.spec_path)
    report = validate_base(spec.base)
    conn = check_tower_connectivity(spec)
    for reason in report.reasons + conn.reasons:
        print(f"FAIL: {reason}")
    if report.ok:
        print(
            f"base: connected, min valency {report.min_valency}, "
            f"euler characteristic {report.euler_characteristic}"
        )
    if conn.ok:
        print(f"tower: connected at every layer (mod-{spec.ell} rank {conn.rank})")
    return 0 if report.ok and conn.ok else 1


def _sequence_rows(seq: ValuationSequence):
    return [{"n": e.n, "ord": e.ord_ell, "route": e.route} for e in seq.entries]


def _render_rows(rows, fmt: str, meta=None) -> str:
    if fmt == "json":
        doc = {"rows": rows}
        if meta:
            doc.update(meta)
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if rows:
        header = list(rows[0])
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[h] for h in header])
    return buf.getvalue()


def _compute_sequence(config: RunConfig, spec) -> ValuationSequence:
    calc = TowerCalculator(spec, jobs=config.jobs)
    if config.n_max == 0:
        base = calc.base_tree_count()
        return ValuationSequence(spec.ell, spec.d, (SequenceEntry(0, base.ord_ell, "matrix-tree"),))
    entries = []
    t_prev = time.perf_counter()
    for n in range(1, config.n_max + 1):
        entries.append(sequence_entry(calc, n, config.budget))
        now = time.perf_counter()
        print(f"# layer {n}: {now - t_prev:.2f}s", file=sys.stderr)
        t_prev = now
    return ValuationSequence(spec.ell, spec.d, tuple(entries))


def _cmd_table(config: RunConfig) -> int:
    spec = load_tower_spec_file(config.spec_path)
    seq = _compute_sequence(config, spec)
    meta = {"ell": spec.ell, "d": spec.d}
    _emit(_render_rows(_sequence_rows(seq), config.fmt, meta), config.out)
    return 0


def _cmd_fit(config: RunConfig) -> int:
    spec = load_tower_spec_file(config.spec_path)
    unknowns = len(monomial_basis(spec.d))
    if config.n_max < unknowns:
        print(f"need at least {unknowns} layers to fit (got {config.n_max})", file=sys.stderr)
        return 1
    seq = _compute_sequence(config, spec)
    window = (config.n_max - unknowns + 1, config.n_max)
    fit = fit_window(seq, window)
    if fit is None:
        _emit("singular\n", config.out)
        return 1
    verified, residuals = verify_fit(fit, seq)
    stable = None
    if window[0] > 1:
        earlier = fit_window(seq, (window[0] - 1, window[1] - 1))
        stable = earlier is not None and earlier.coefficients == fit.coefficients
    doc = {
        "ell": spec.ell,
        "d": spec.d,
        "formula": format_fit(fit),
        "coefficients": {
            _monomial_label(k, j): f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)
            for (k, j), c in fit.coefficients.items()
        },
        "window": list(fit.window),
        "verified_range": list(verified) if verified else None,
        "stable": stable,
        "leading_coefficients_integral": leading_coefficients_integral(fit),
        "rows": _sequence_rows(seq),
    }
    if config.fmt == "json":
        _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", config.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["monomial", "coefficient"])
        for (k, j), c in fit.coefficients.items():
            writer.writerow([_monomial_label(k, j), f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)])
        writer.writerow(["window", f"{fit.window[0]}..{fit.window[1]}"])
        writer.writerow(["verified_range", f"{verified[0]}..{verified[1]}" if verified else "none"])
        writer.writerow(["stable", stable])
        writer.writerow(["formula", format_fit(fit)])
        _emit(buf.getvalue(), config.out)
    suspicious = not leading_coefficients_integral(fit)
    if suspicious and stable:
        print("warning: stable fit with non-integral leading coefficients", file=sys.stderr)
    if residuals and verified is None:
        print("warning: fitted polynomial does not reproduce the deepest layer", file=sys.stderr)
    return 0


def _cmd_lvalues(config: RunConfig) -> int:
    spec = load_tower_spec_file(config.spec_path)
    records = orbit_records(spec, config.level, digit_limit=config.digit_limit)
    rows = []
    for rec in records:
        rows.append(
            {
                "representative": " ".join(map(str, rec.orbit.representative.vector)),
                "size": rec.orbit.size,
                "value": str(rec.integer_value) if rec.integer_value is not None else "",
                "ord": rec.ord_ell,
            }
        )
    _emit(_render_rows(rows, config.fmt, {"ell": spec.ell, "level": config.level}), config.out)
    return 0


def _cmd_qseries(config: RunConfig) -> int:
    spec = load_tower_spec_file(config.spec_path)
    series = q_series(spec, config.trunc)
    doc = {
        "variables": spec.d,
        "truncation": series.cap,
        "coefficients": {
            ",".join(map(str, expo)): str(c) for expo, c in sorted(series.coeffs.items())
        },
    }
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", config.out)
    return 0


def _cmd_export_dot(config: RunConfig) -> int:
    spec = load_tower_spec_file(config.spec_path)
    layer = derived_graph(spec, config.layer, vertex_budget=config.budget)
    _emit(derived_to_dot(layer), config.out)
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "table": _cmd_table,
    "fit": _cmd_fit,
    "lvalues": _cmd_lvalues,
    "qseries": _cmd_qseries,
    "export-dot": _cmd_export_dot,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        return _COMMANDS[args.command](config)
    except (SpecFormatError, GraphInputError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except RouteMismatchError as err:
        print(f"error: {err}", file=sys.stderr)
        for rec in err.records:
            print(
                f"  orbit {rec.orbit.representative.vector}: ord {rec.ord_ell}, value {rec.integer_value}",
                file=sys.stderr,
            )
        return 1
    except (DisconnectedCoverError, VanishingLValueError, BudgetExceededError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
