"""``gaussbound`` command-line interface.

Exit status: 0 on success, 1 for physics or domain failures, 2 for usage and
parse errors.
"""

import argparse
import csv
import io as _io
import json
import os
import sys

import numpy as np

from . import io
from .bounds import SGridConfig, full_report, parse_bound_names
from .errors import BonaFideError, GaussboundError, InvalidArgumentError
from .states import covariance_diagnostics
from .symplectic import build_omega, williamson

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2
GRID_ENV = "GAUSSBOUND_GRID"


class UsageError(GaussboundError):
    pass


def _fmt(x):
    return f"{x:.9f}"


def _default_grid():
    raw = os.environ.get(GRID_ENV)
    if raw is None:
        return SGridConfig().grid_points
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{GRID_ENV} must be an integer, got {raw!r}") from None


def _grid_config(points):
    try:
        return SGridConfig(grid_points=points)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None


def cmd_validate(args, out):
    try:
        mean, cov = io.read_state_arrays(args.file)
    except BonaFideError as exc:
        diags = exc.diagnostics
    else:
        diags = covariance_diagnostics(cov)
    if diags:
        for line in diags:
            print(f"invalid: {line}", file=out)
        return EXIT_DOMAIN
    print(f"ok: bona fide {cov.shape[0] // 2}-mode Gaussian state", file=out)
    return EXIT_OK


def cmd_spectrum(args, out):
    state = io.load_state(args.file)
    dec = state.decomposition
    print(" ".join(_fmt(v) for v in dec.spectrum), file=out)
    sqrt_det = float(np.sqrt(np.linalg.det(state.cov)))
    print(f"product {_fmt(float(np.prod(dec.spectrum)))}  sqrt_det {_fmt(sqrt_det)}", file=out)
    if args.full:
        dec = williamson(state.cov)
        omega = build_omega(state.n)
        print("S =", file=out)
        for row in dec.S:
            print("  " + " ".join(f"{v: .9f}" for v in row), file=out)
        rec = np.max(np.abs(dec.S @ dec.diagonal @ dec.S.T - state.cov))
        symp = np.max(np.abs(dec.S @ omega @ dec.S.T - omega))
        print(f"residual_reconstruction {rec:.3e}", file=out)
        print(f"residual_symplectic {symp:.3e}", file=out)
    return EXIT_OK


def _report_rows(report):
    """``(name, s_star, value)`` triples in a fixed order."""
    rows = []
    if report.chernoff:
        rows.append(("chernoff", report.chernoff.s_star, report.chernoff.value))
        rows.append(("chernoff_kappa", None, report.chernoff.kappa))
    if report.bhattacharyya:
        rows.append(("bhattacharyya", 0.5, report.bhattacharyya.value))
    if report.minkowski:
        rows.append(("minkowski", report.minkowski.s_star, report.minkowski.value))
    if report.young:
        rows.append(("young", report.young.s_star, report.young.value))
    if report.fidelity:
        rows.append(("fidelity", None, report.fidelity.f))
        rows.append(("f_minus", None, report.fidelity.f_minus))
        rows.append(("f_plus", None, report.fidelity.f_plus))
    if report.helstrom is not None:
        rows.append(("helstrom", None, report.helstrom))
    return rows


def cmd_discriminate(args, out):
    rho_a = io.load_state(args.state_a)
    rho_b = io.load_state(args.state_b)
    if rho_a.n != rho_b.n:
        raise InvalidArgumentError(f"mode counts differ: {rho_a.n} vs {rho_b.n}")
    try:
        bounds = parse_bound_names(args.bounds)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None
    grid = args.grid if args.grid is not None else _default_grid()
    report = full_report(
        rho_a, rho_b, args.copies, _grid_config(grid), include_oracle=args.oracle, bounds=bounds
    )
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2), file=out)
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["bound", "s_star", "value"])
        for name, s, v in _report_rows(report):
            w.writerow([name, "" if s is None else _fmt(s), _fmt(v)])
    else:
        print(f"copies {report.copies}  modes {report.n}", file=out)
        for name, s, v in _report_rows(report):
            s_txt = "" if s is None else f"s*={_fmt(s)}"
            print(f"{name:<15} {_fmt(v)}  {s_txt}".rstrip(), file=out)
        for note in report.notes:
            print(f"note: {note}", file=out)
    return EXIT_OK


SWEEP_COLUMNS = (
    ("Y1", "young"),
    ("M1", "mink"),
    ("PQC1", "qc"),
    ("F_plus", "fid"),
    ("F_minus", "fid"),
)


def sweep_rows(spec, grid=None):
    """Header and formatted rows of a sweep, ordered by parameter value."""
    config = _grid_config(spec.grid or grid or _default_grid())
    cols = [c for c, b in SWEEP_COLUMNS if b in spec.bounds]
    header = ["param"] + cols + (["helstrom"] if spec.oracle else [])
    rows = []
    for value in spec.values():
        rho_a, rho_b = spec.pair(value)
        rep = full_report(
            rho_a, rho_b, spec.copies, config, include_oracle=spec.oracle, bounds=spec.bounds
        )
        cells = {
            "Y1": rep.young and rep.young.value,
            "M1": rep.minkowski and rep.minkowski.value,
            "PQC1": rep.chernoff and rep.chernoff.value,
            "F_plus": rep.fidelity and rep.fidelity.f_plus,
            "F_minus": rep.fidelity and rep.fidelity.f_minus,
        }
        row = [_fmt(value)] + [_fmt(cells[c]) for c in cols]
        if spec.oracle:
            row.append(_fmt(rep.helstrom))
        rows.append(row)
    return header, rows


def cmd_sweep(args, out):
    spec = io.read_sweep(args.spec)
    header, rows = sweep_rows(spec, args.grid)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    target = args.output or spec.output
    if target and target != "-":
        with open(target, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gaussbound",
        description="Bounds on the error probability of discriminating two Gaussian states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check that a state file is a bona fide Gaussian state")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("spectrum", help="print the symplectic spectrum")
    p.add_argument("file")
    p.add_argument("--full", action="store_true", help="also dump the Williamson matrix S")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("discriminate", help="compute discrimination bounds for two states")
    p.add_argument("state_a")
    p.add_argument("state_b")
    p.add_argument("--copies", "-N", type=int, default=1)
    p.add_argument("--bounds", default=None, help="comma list from qc,mink,young,fid,bhatta")
    p.add_argument("--grid", type=int, default=None, help=f"s grid points (env {GRID_ENV})")
    p.add_argument("--oracle", action="store_true", help="add the exact Fock-space Helstrom error")
    p.add_argument("--format", choices=("json", "csv", "table"), default="table")
    p.set_defaults(func=cmd_discriminate)

    p = sub.add_parser("sweep", help="tabulate bounds over a parameter family as CSV")
    p.add_argument("spec")
    p.add_argument("--output", "-o", default=None, help="CSV path (default: spec 'output' or stdout)")
    p.add_argument("--grid", type=int, default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args, out)
    except (io.StateFileError, UsageError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except GaussboundError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
