"""Command line: ``lsum identity|verify|catalog|asympt``.

Exit status is 0 when every requested check meets its expectation, 1 when a
verification fails, and 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .catalog import ASYMPT_BOUND, ASYMPT_POINTS, ENTRY_IDS, CatalogResult, asympt_table, run_catalog
from .engine import LSumMethod, default_method, engine_for
from .errors import LSumError, ParseError
from .expr import ArraySpec
from .render import (
    dumps,
    identity_report,
    latex_display,
    latex_document,
    scalar_latex,
    scalar_text,
    to_jsonable,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_METHODS = {
    "general": LSumMethod.General3D,
    "symmetric": LSumMethod.Symmetric3D,
    "tdim": LSumMethod.GeneralT,
    "strong": LSumMethod.Strong,
}


class UsageError(Exception):
    pass


def _s_value(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        if "/" in text:
            return Fraction(text)
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid --s value {text!r}") from exc


def _points(text: str) -> List[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid --points list {text!r}") from exc


def _dimension(text: str) -> int:
    t = int(text)
    if not 1 <= t <= 6:
        raise argparse.ArgumentTypeError("--t must be between 1 and 6")
    return t


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lsum", description="L-summing identities over lattice arrays")
    parser.add_argument("--version", action="version", version=f"lsum {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, expr=True):
        if expr:
            p.add_argument("--expr", required=True, help="array entry, e.g. '1/(a*b*c)'")
            p.add_argument("--t", type=_dimension, default=3, help="dimension (1..6)")
        p.add_argument("--s", type=_s_value, help="value bound to the parameter s")
        p.add_argument("--format", choices=("text", "json", "latex"), default="text")
        p.add_argument("--output", help="write the report here instead of stdout")

    p = sub.add_parser("identity", help="print the L-summing identity for an array")
    common(p)

    p = sub.add_parser("verify", help="check sum L_k = Sigma(n) for n = 1..N")
    common(p)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--backend", choices=("exact", "formal", "float"), default="exact")
    p.add_argument("--method", choices=tuple(_METHODS))

    p = sub.add_parser("catalog", help="run catalogued identities")
    common(p, expr=False)
    p.add_argument("--run", default="all", help="comma-separated entry ids, or 'all'")
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=_dimension)
    p.add_argument("--m", type=int, choices=(1, 2, 3))
    p.add_argument("--points", type=_points)

    p = sub.add_parser("asympt", help="tabulate S(m,n) against psi(n+1)^(m+1)/(m+1)")
    p.add_argument("--m", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--points", type=_points, default=list(ASYMPT_POINTS))
    p.add_argument("--format", choices=("text", "json", "latex"), default="text")
    p.add_argument("--output")
    return parser


def _spec(args) -> ArraySpec:
    params = {"s": args.s} if args.s is not None else {}
    return ArraySpec.build(args.expr, args.t, params)


def _config(args) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key == "output":
            continue
        if isinstance(value, Fraction):
            value = f"{value.numerator}/{value.denominator}"
        out[key] = value
    return out


def _envelope(args, entries) -> dict:
    return {"tool_version": __version__, "command": args.command, "config": _config(args), "entries": entries}


# -- commands -------------------------------------------------------------------


def cmd_identity(args):
    spec = _spec(args)
    if args.format == "json":
        rep = identity_report(spec)
        body = {"expr": spec.canonical, "t": spec.t, "structural": rep.structural,
                "closed_form": rep.closed_form, "notes": rep.notes}
        return EXIT_OK, dumps({"tool_version": __version__, "command": "identity",
                               "config": _config(args), "identity": body}) + "\n"
    if args.format == "latex":
        rep = identity_report(spec, latex=True)
        lines = [latex_display(rf"A = {rep.entry}")]
        lines += [latex_display(s) for s in rep.structural]
        if rep.closed_form:
            lines.append(latex_display(rep.closed_form))
        return EXIT_OK, latex_document(lines)
    rep = identity_report(spec)
    lines = [f"A[{','.join(spec.index_names)}] := {rep.entry}"] + rep.structural
    if rep.closed_form:
        lines.append(f"closed form: {rep.closed_form}")
    lines += [f"note: {n}" for n in rep.notes]
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_verify(args):
    spec = _spec(args)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    method = _METHODS[args.method] if args.method else default_method(spec.t)
    if method in (LSumMethod.General3D, LSumMethod.Symmetric3D) and spec.t != 3:
        raise UsageError(f"--method {args.method} needs --t 3")
    engine = engine_for(spec, args.backend)
    report = engine.verify(args.n, method)
    code = EXIT_OK if report.passed else EXIT_FAIL
    status = "pass" if report.passed else "fail"
    if args.format == "json":
        entry = {
            "id": spec.canonical, "n_max": report.n_max, "status": status,
            "first_fail_n": report.first_fail_n, "residual": to_jsonable(report.residual),
            "wall_ms": round(report.wall_ms, 3), "method": method.value, "backend": args.backend,
            "verdicts": report.verdicts, "l_elements": [to_jsonable(v) for v in report.l_elements],
            "symmetry_violation_k": report.symmetry_violation_k,
        }
        return code, dumps(_envelope(args, [entry])) + "\n"
    if args.format == "latex":
        rows = "\n".join(rf"{k} & {scalar_latex(v)} \\" for k, v in enumerate(report.l_elements, 1))
        table = "\\begin{tabular}{rl}\n$k$ & $L_k$ \\\\\n\\hline\n" + rows + "\n\\end{tabular}"
        text = f"Verification of $\\sum L_k = \\Sigma(n)$ for $n \\le {report.n_max}$: {status}.\n\n{table}"
        return code, latex_document([text])
    lines = [f"expr {spec.canonical}  t={spec.t}  method={method.value}  backend={args.backend}"]
    for n, (ok, lk) in enumerate(zip(report.verdicts, report.l_elements), 1):
        lines.append(f"n={n:<4d} {'pass' if ok else 'FAIL'}  L_n = {scalar_text(lk)}")
    if report.symmetry_violation_k is not None:
        lines.append(f"symmetry violation: symmetric L_k disagrees with the strong form at k={report.symmetry_violation_k}")
    if report.first_fail_n is not None:
        lines.append(f"first failure at n={report.first_fail_n}, residual {scalar_text(report.residual)}")
    lines.append(f"result: {status}")
    return code, "\n".join(lines) + "\n"


def _row_json(row: CatalogResult) -> dict:
    return {
        "id": row.id, "params": row.params, "n_max": row.n_max, "status": row.status,
        "first_fail_n": row.first_fail_n, "residual": to_jsonable(row.residual),
        "wall_ms": round(row.wall_ms, 3),
    }


def _row_text(row: CatalogResult) -> str:
    params = " ".join(f"{k}={v}" for k, v in row.params.items())
    head = f"{row.id:<15s} {params:<10s} n<={row.n_max:<8d} {row.status:<11s}"
    if row.status == "corrected":
        tail = f"printed form fails at n={row.first_fail_n} (residual {row.residual}); corrected form holds"
    elif row.id == "eq4-limit":
        rep = row.detail
        tail = f"gap {rep.gap:.3e} (tol {rep.tol:g}), target {rep.target:.12f}"
    elif row.id == "asympt":
        worst = max(abs(r.ratio) for r in row.detail)
        tail = f"max |diff|/ln^m n = {worst:.4f} (advisory bound {ASYMPT_BOUND:g})"
    elif row.first_fail_n is not None:
        tail = f"first failure n={row.first_fail_n}, residual {scalar_text(row.residual)}"
    else:
        tail = "zero residual"
    return f"{head} {tail}  [{row.wall_ms:.0f} ms]"


def cmd_catalog(args):
    ids = list(ENTRY_IDS) if args.run == "all" else [i.strip() for i in args.run.split(",") if i.strip()]
    unknown = [i for i in ids if i not in ENTRY_IDS]
    if unknown:
        raise UsageError(f"unknown catalog ids: {', '.join(unknown)}")
    rows = run_catalog(ids, n=args.n, s=args.s, t=args.t, m=args.m, points=args.points)
    code = EXIT_OK if all(r.expectation_met for r in rows) else EXIT_FAIL
    if args.format == "json":
        return code, dumps(_envelope(args, [_row_json(r) for r in rows])) + "\n"
    if args.format == "latex":
        body = "\n".join(
            rf"\texttt{{{r.id}}} & {r.n_max} & {r.status} & "
            + (f"${scalar_latex(r.residual)}$" if r.residual is not None else "--")
            + r" \\"
            for r in rows
        )
        table = "\\begin{tabular}{llll}\nid & $n_{\\max}$ & status & residual \\\\\n\\hline\n" + body + "\n\\end{tabular}"
        return code, latex_document([table])
    return code, "\n".join(_row_text(r) for r in rows) + "\n"


def cmd_asympt(args):
    rows = asympt_table(args.m, args.points)
    bounded = all(abs(r.ratio) <= ASYMPT_BOUND for r in rows)
    if args.format == "json":
        entries = [{"n": r.n, "S": r.S, "main": r.main, "diff": r.diff, "ratio": r.ratio} for r in rows]
        out = _envelope(args, entries)
        out["bound"] = ASYMPT_BOUND
        out["bounded"] = bounded
        return EXIT_OK, dumps(out) + "\n"
    if args.format == "latex":
        body = "\n".join(rf"{r.n} & {r.S:.6f} & {r.main:.6f} & {r.diff:.6f} & {r.ratio:.6f} \\" for r in rows)
        table = (
            "\\begin{tabular}{rrrrr}\n$n$ & $\\mathfrak{S}(m,n)$ & main & diff & diff$/\\ln^m n$ \\\\\n\\hline\n"
            + body + "\n\\end{tabular}"
        )
        return EXIT_OK, latex_document([table])
    lines = [f"{'n':>8s} {'S(m,n)':>16s} {'main':>16s} {'diff':>14s} {'diff/ln^m n':>14s}"]
    for r in rows:
        lines.append(f"{r.n:>8d} {r.S:>16.6f} {r.main:>16.6f} {r.diff:>14.6f} {r.ratio:>14.6f}")
    lines.append(f"bound {ASYMPT_BOUND:g} on |diff|/ln^m n (advisory): {'holds' if bounded else 'exceeded'}")
    return EXIT_OK, "\n".join(lines) + "\n"


COMMANDS = {"identity": cmd_identity, "verify": cmd_verify, "catalog": cmd_catalog, "asympt": cmd_asympt}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"lsum: parse error: {exc.message} at offset {exc.offset}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, LSumError) as exc:
        print(f"lsum: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
