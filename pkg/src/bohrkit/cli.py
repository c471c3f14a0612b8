"""Command-line interface: radii, tables, verification scans and curve data.

Exit codes: 0 success, 1 a check found a violation, 2 usage error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import numpy as np

from . import radii, verify
from .errors import BohrError, CertificationError, ConvergenceError, UsageError
from .functionals import LETTER_KINDS, as_kind, extremal_value

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

RADIUS_COLUMNS = ("family", "m", "a", "root", "residual", "iterations")
REPORT_COLUMNS = ("subject", "trials", "worst_margin", "passed", "violations")
TABLE_M = (*range(3, 11), 15, 20, 25, 30)


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # raise instead of exiting so run() can map the failure to an exit code
    def error(self, message):
        raise _ArgError(message)


def parse_m_range(text: str) -> list[int]:
    """``"3"``, ``"2..10"`` or comma-separated mixtures such as ``"3..10,15,20"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = (int(x) for x in part.split(".."))
                if lo > hi:
                    raise ValueError
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad m range {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError(f"m values must be positive integers: {text!r}")
    return out


def _unit_interval(text: str) -> float:
    x = float(text)
    if not 0.0 <= x < 1.0:
        raise argparse.ArgumentTypeError(f"expected a value in [0, 1), got {text}")
    return x


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return n


def _kinds(text: str) -> list:
    if text.lower() == "all":
        return list(LETTER_KINDS)
    try:
        return [as_kind(k.strip()) for k in text.split(",")]
    except BohrError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bohrkit", description="Sharp Bohr-type radii and their numerical verification.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--output", "-o", help="write to this file instead of standard output")
    common.add_argument("--precision", choices=("6", "full"), default="6", help="decimals for printed radii")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("radius", parents=[common], help="certified root of one equation family")
    r.add_argument("--family", required=True, choices=sorted(radii.FAMILIES))
    r.add_argument("--m", type=parse_m_range, default=[1])
    r.add_argument("--a", type=float)
    r.add_argument("--tol", type=float, default=radii.DEFAULT_TOL)

    t = sub.add_parser("table", parents=[common], help="radius table: 1 = alpha, beta, zeta, eta; 2 = gamma, delta, theta, vartheta")
    t.add_argument("--which", type=int, choices=(1, 2), required=True)
    t.add_argument("--m", type=parse_m_range, default=list(TABLE_M))
    t.add_argument("--tol", type=float, default=radii.DEFAULT_TOL)

    c = sub.add_parser("check", parents=[common], help="randomized scan of a refined Bohr inequality")
    c.add_argument("--kind", type=_kinds, required=True, help="A..I, comma list, or 'all'")
    c.add_argument("--m", type=parse_m_range, default=[1])
    c.add_argument("--trials", type=_positive_int, default=1000)
    c.add_argument("--seed", type=_positive_int, required=True)
    c.add_argument("--r-fraction", type=float, default=0.999)

    s = sub.add_parser("sharpness", parents=[common], help="extremal value just past the radius")
    s.add_argument("--kind", type=as_kind, required=True)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--a", type=_unit_interval, default=0.999)
    s.add_argument("--eps", type=float, default=0.02)
    s.add_argument("--a-dependent", action="store_true", help="use alpha_{m,a} / beta_{m,a}")

    lm = sub.add_parser("lemmas", parents=[common], help="lemma and auxiliary-fact checks")
    lm.add_argument("--seed", type=_positive_int, required=True)
    lm.add_argument("--trials", type=_positive_int, default=500)
    lm.add_argument("--m", type=parse_m_range, default=list(range(1, 51)))

    cv = sub.add_parser("curve", parents=[common], help="closed-form extremal value against r")
    cv.add_argument("--kind", type=as_kind, required=True)
    cv.add_argument("--m", type=int, default=1)
    cv.add_argument("--a", type=_unit_interval, default=0.999)
    cv.add_argument("--steps", type=int, default=101)

    sub.add_parser("discrepancies", parents=[common], help="printed-equation inconsistencies")
    return p


def _fmt(x: float, precision: str) -> str:
    return f"{x:.{12 if precision == 'full' else 6}f}"


def _csv_text(columns: Sequence[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: "" if row.get(k) is None else row[k] for k in columns})
    return buf.getvalue()


def _radius_rows(records: list[dict], precision: str) -> list[dict]:
    return [{**r, "root": _fmt(r["root"], precision), "residual": f"{r['residual']:.3e}"} for r in records]


def emit_curve(kind, m: int, a: float, r_steps: int) -> list[tuple[float, float]]:
    """``(r, extremal_value)`` rows on an even grid over ``[0, min(0.99, radius + 0.1)]``."""
    if r_steps < 2:
        raise UsageError("r_steps must be at least 2")
    if not 0.0 <= a < 1.0:
        raise UsageError(f"a must lie in [0, 1), got {a!r}")
    kind = as_kind(kind)
    r_max = min(0.99, radii.theorem_radius(kind, m) + 0.1)
    return [(float(r), extremal_value(kind, m, a, float(r))) for r in np.linspace(0.0, r_max, r_steps)]


def _reports_out(reports: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([rep.to_dict() for rep in reports], indent=2) + "\n"
    rows = [
        {
            "subject": rep.subject,
            "trials": rep.trials,
            "worst_margin": f"{rep.worst_margin:.3e}",
            "passed": rep.passed,
            "violations": len(rep.violations),
        }
        for rep in reports
    ]
    if fmt == "csv":
        return _csv_text(REPORT_COLUMNS, rows)
    lines = [
        f"{'PASS' if r['passed'] else 'FAIL'}  {r['subject']}  trials={r['trials']}  "
        f"worst_margin={r['worst_margin']}  violations={r['violations']}"
        for r in rows
    ]
    return "\n".join(lines) + "\n"


def _cmd_radius(args) -> tuple[str, int]:
    records = []
    for m in args.m:
        fam = radii.EquationFamily(args.family, m, args.a)
        records.append(radii.radius_record(fam, radii.solve_radius(fam, args.tol)))
    if args.format == "json":
        return json.dumps(records, indent=2) + "\n", EXIT_OK
    if args.format == "csv":
        return _csv_text(RADIUS_COLUMNS, _radius_rows(records, args.precision)), EXIT_OK
    if len(records) == 1:
        return _fmt(records[0]["root"], args.precision) + "\n", EXIT_OK
    return "".join(f"{r['m']}\t{_fmt(r['root'], args.precision)}\n" for r in records), EXIT_OK


def _cmd_table(args) -> tuple[str, int]:
    cells = radii.table_results(args.which, args.m, args.tol)
    records = [radii.radius_record(radii.EquationFamily(tag, m), res) for tag, m, res in cells]
    if args.format == "json":
        return json.dumps(records, indent=2) + "\n", EXIT_OK
    if args.format == "csv":
        return _csv_text(RADIUS_COLUMNS, _radius_rows(records, args.precision)), EXIT_OK
    tags = radii.TABLE_FAMILIES[args.which]
    width = 16 if args.precision == "full" else 10
    lines = ["m".rjust(3) + "".join(t.rjust(width) for t in tags)]
    by_m: dict[int, dict] = {}
    for r in records:
        by_m.setdefault(r["m"], {})[r["family"]] = r["root"]
    for m, row in by_m.items():
        lines.append(str(m).rjust(3) + "".join(_fmt(row[t], args.precision).rjust(width) for t in tags))
    return "\n".join(lines) + "\n", EXIT_OK


def _exit_for(reports: list) -> int:
    return EXIT_OK if all(rep.passed for rep in reports) else EXIT_VIOLATION


def _cmd_check(args) -> tuple[str, int]:
    cfg = verify.SamplerConfig(seed=args.seed)
    reports = [verify.check_theorem(k, m, cfg, args.r_fraction, args.trials) for k in args.kind for m in args.m]
    return _reports_out(reports, args.format), _exit_for(reports)


def _cmd_lemmas(args) -> tuple[str, int]:
    cfg = verify.SamplerConfig(seed=args.seed)
    grid = np.linspace(0.0, 0.9, 19)
    reports = [
        verify.check_lemma1(cfg, grid, args.trials),
        verify.check_lemma2(cfg, grid, args.trials),
        verify.check_schwarz_pick(cfg, 16, args.trials),
    ]
    for check in (verify.check_lemma3, verify.check_lemma4):
        parts = [check(m) for m in args.m]
        merged = parts[0]
        for p in parts[1:]:
            merged = merged.merge(p)
        merged.subject = merged.subject.split(":")[0] + f":m={args.m[0]}..{args.m[-1]}"
        merged.notes = {}
        reports.append(merged)
    reports += [
        verify.check_a_star_dichotomy(1),
        verify.check_monotone_bounds(),
        verify.check_I_monotone(),
        verify.check_radius_orderings(),
    ]
    return _reports_out(reports, args.format), _exit_for(reports)


def _cmd_sharpness(args) -> tuple[str, int]:
    value = verify.sharpness_witness(args.kind, args.m, args.a, args.eps, args.a_dependent)
    rec = {"kind": args.kind.value, "m": args.m, "a": args.a, "eps": args.eps, "value": value}
    if args.format == "json":
        return json.dumps(rec) + "\n", EXIT_OK
    if args.format == "csv":
        return _csv_text(tuple(rec), [rec]), EXIT_OK
    return f"{value:.12f}\n", EXIT_OK


def _cmd_curve(args) -> tuple[str, int]:
    rows = emit_curve(args.kind, args.m, args.a, args.steps)
    if args.format == "json":
        return json.dumps([{"r": r, "value": v} for r, v in rows]) + "\n", EXIT_OK
    return _csv_text(("r", "value"), [{"r": repr(r), "value": repr(v)} for r, v in rows]), EXIT_OK


def _cmd_discrepancies(args) -> tuple[str, int]:
    rep = verify.check_discrepancies()
    if args.format != "text":
        return _reports_out([rep], args.format), _exit_for([rep])
    n = rep.notes
    lines = [
        f"printed delta equation, root at m=1: {n['delta_display_root_m1']:.6f}",
        f"proof delta polynomial, root at m=1: {n['delta_proof_root_m1']:.6f}",
        f"delta forms identical for m in {n['delta_forms_identical_for_m']}",
        f"printed delta equation at r=0.535687, m=3: {n['delta_display_at_table_m3']:.6f}",
        f"vartheta equation matches re-derived H for m in {n['vartheta_matches_rederived_H_for_m']}",
        f"vartheta equation matches printed H for m in {n['vartheta_matches_printed_H_for_m']}",
    ]
    lines += [f"{'ok  ' if ok else 'FAIL'} {label}" for label, ok in n["expectations"].items()]
    return "\n".join(lines) + "\n", _exit_for([rep])


_COMMANDS = {
    "radius": _cmd_radius,
    "table": _cmd_table,
    "check": _cmd_check,
    "sharpness": _cmd_sharpness,
    "lemmas": _cmd_lemmas,
    "curve": _cmd_curve,
    "discrepancies": _cmd_discrepancies,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _ArgError as exc:
        print(f"bohrkit: error: {exc}", file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        text, code = _COMMANDS[args.command](args)
    except (ConvergenceError, CertificationError, ArithmeticError) as exc:
        print(f"bohrkit: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    except (BohrError, ValueError) as exc:
        print(f"bohrkit: error: {exc}", file=stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
