"""Command-line front end.

Commands: euler, hilbert, traj, zeta, critval, check, echo.  Exit codes:
0 success, 1 check failure, 2 input error, 3 engine limitation.
All output is exact; --machine switches to canonical JSON (sorted keys,
stable ordering, byte-deterministic across runs and worker counts).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .exactnum import (ExactArithmeticError, NotClearableError, ONE_MINUS_T2,
                       RatFn, critical_value, format_rational, pole_clear)
from .expr import ExprError, parse_ratfn
from .cohring import CohRingError
from .docparse import DocumentError, parse_document, serialize_document
from .eulereng import (EulerEngineError, SectionData, eu_global, eu_nonreduced,
                       eu_series, sym_rationality_check)
from .gradedmod import (GradedModuleError, hilbert_brute_force,
                        hilbert_from_betti, koszul_resolution)
from .trajcalc import (TrajectoryError, assemble_d, d_square_relation,
                       splitting_check, zeta)
from .suites import SUITES, run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_ENGINE_LIMIT = 3


class CliFailure(Exception):
    def __init__(self, code: int, tag: str, message: str):
        self.code = code
        self.tag = tag
        super().__init__(message)


def _load_document(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliFailure(EXIT_INPUT_ERROR, "E_IO", str(exc)) from None
    try:
        return parse_document(text)
    except (DocumentError, ExprError) as exc:
        raise CliFailure(EXIT_INPUT_ERROR, "E_PARSE", str(exc)) from None


def _emit(args, machine_obj, human_lines):
    if args.machine:
        print(json.dumps(machine_obj, sort_keys=True, separators=(",", ":")))
    else:
        for line in human_lines:
            print(line)


def _ratfn_out(fn: RatFn):
    return {"text": str(fn), **fn.to_obj()}


# -- euler ------------------------------------------------------------------

def cmd_euler(args) -> int:
    doc = _load_document(args.document)
    if doc.ring is None:
        raise CliFailure(EXIT_INPUT_ERROR, "E_NO_SPACE",
                         "document has no [space] section")
    names = sorted(doc.sections) if args.section is None else [args.section]
    if args.section is not None and args.section not in doc.sections:
        raise CliFailure(EXIT_INPUT_ERROR, "E_NO_SECTION",
                         f"unknown section {args.section!r}")
    if not names:
        raise CliFailure(EXIT_INPUT_ERROR, "E_NO_SECTION",
                         "document declares no sections")
    records = []
    lines = []
    for name in names:
        bundle_name, section = doc.sections[name]
        E = doc.bundles[bundle_name]
        try:
            series = eu_series(doc.ring, E, section)
            global_fn = eu_global(doc.ring, E, section)
            reduced = critical_value(global_fn, Fraction(-1))
            n, _m, _R = pole_clear(global_fn, ONE_MINUS_T2)
        except NotClearableError as exc:
            raise CliFailure(EXIT_ENGINE_LIMIT, "E_STACKY_POLE", str(exc)) from None
        except (EulerEngineError, CohRingError, ExactArithmeticError) as exc:
            raise CliFailure(EXIT_INPUT_ERROR, "E_ENGINE", str(exc)) from None
        record = {
            "section": name,
            "bundle": bundle_name,
            "rank": series.rank,
            "series": series.cls.to_obj(),
            "global": _ratfn_out(global_fn),
            "reduced": format_rational(reduced),
            "pole_order": n,
        }
        lines.append(f"section {name} (bundle {bundle_name}, rank {series.rank}):")
        lines.append(f"  series  = {series.cls}")
        lines.append(f"  global  = {global_fn}")
        lines.append(f"  reduced = {format_rational(reduced)}   (pole order {n})")
        if args.nonreduced:
            nr = eu_nonreduced(doc.ring, E, section)
            record["nonreduced"] = format_rational(nr)
            lines.append(f"  nonreduced = {format_rational(nr)}")
        if args.at is not None:
            a = Fraction(args.at)
            try:
                value = global_fn(a)
            except ExactArithmeticError as exc:
                raise CliFailure(EXIT_INPUT_ERROR, "E_POLE", str(exc)) from None
            record["at"] = {"point": format_rational(a),
                            "value": format_rational(value)}
            lines.append(f"  value at t={format_rational(a)}: {format_rational(value)}")
        if args.critical is not None:
            a = Fraction(args.critical)
            cv = critical_value(global_fn, a)
            record["critical"] = {"point": format_rational(a),
                                  "value": format_rational(cv)}
            lines.append(f"  critical value at t={format_rational(a)}: "
                         f"{format_rational(cv)}")
        if args.clear:
            cn, cm, R = pole_clear(global_fn, ONE_MINUS_T2)
            record["clear"] = {"n": cn, "m": cm, "poly": R.to_pairs()}
            lines.append(f"  cleared: (1-t^2)^{cn} * t^{cm} * global = {R}")
        records.append(record)
    _emit(args, {"command": "euler", "results": records}, lines)
    return EXIT_OK


# -- hilbert ----------------------------------------------------------------

def cmd_hilbert(args) -> int:
    doc = _load_document(args.document)
    if doc.graded_ring is None:
        raise CliFailure(EXIT_INPUT_ERROR, "E_NO_GRADED",
                         "document has no [graded] section")
    ring = doc.graded_ring
    betti = doc.betti
    try:
        if betti is None:
            if doc.koszul_seq is None:
                raise CliFailure(EXIT_INPUT_ERROR, "E_NO_GRADED",
                                 "graded section needs betti or koszul data")
            betti = koszul_resolution(ring, doc.koszul_seq)
        series = hilbert_from_betti(ring, betti)
    except GradedModuleError as exc:
        raise CliFailure(EXIT_INPUT_ERROR, "E_ENGINE", str(exc)) from None
    record = {
        "command": "hilbert",
        "weights": list(ring.weights),
        "betti": betti.to_obj(),
        "series": _ratfn_out(series.fn),
    }
    lines = [f"ring weights: {list(ring.weights)}",
             f"betti table:  {betti.to_obj()}",
             f"hilbert series = {series.fn}"]
    code = EXIT_OK
    if doc.koszul_seq is not None and doc.check_weight:
        got = series.dimensions(doc.check_weight)
        want = hilbert_brute_force(ring, doc.koszul_seq, doc.check_weight)
        ok = got == want
        record["oracle"] = {"up_to": doc.check_weight, "pass": ok}
        lines.append(f"brute-force check to weight {doc.check_weight}: "
                     + ("PASS" if ok else "FAIL"))
        if not ok:
            code = EXIT_CHECK_FAILED
    _emit(args, record, lines)
    return code


# -- traj -------------------------------------------------------------------

def _matrix_obj(m):
    return [[_ratfn_out(x) for x in row] for row in m]


def cmd_traj(args) -> int:
    doc = _load_document(args.document)
    ds = doc.trajectory
    if ds is None:
        raise CliFailure(EXIT_INPUT_ERROR, "E_NO_TRAJ",
                         "document has no [trajectory] section")
    record = {"command": "traj", "zeros": list(ds.zeros.labels)}
    lines = [f"zeros: {', '.join(ds.zeros.labels)}"]
    code = EXIT_OK
    try:
        d_tables = dict(ds.d)
        for beta in doc.record_betas:
            m = assemble_d(ds.zeros, doc.records, beta)
            if beta in d_tables:
                raise CliFailure(EXIT_INPUT_ERROR, "E_DUP_TABLE",
                                 f"class {beta} has both records and a d table")
            d_tables[beta] = m
        from .trajcalc import TrajDataset
        full = TrajDataset(ds.zeros, ds.monoid, d_tables, ds.e, ds.f, ds.dinf, ds.N)
        d_out = []
        for beta in sorted(d_tables):
            entry = {"class": list(beta), "matrix": _matrix_obj(d_tables[beta])}
            lines.append(f"d at {list(beta)}:")
            for row in d_tables[beta]:
                lines.append("  [" + ", ".join(str(x) for x in row) + "]")
            if doc.relation is not None:
                rep = d_square_relation(full, beta, doc.relation)
                entry["relation"] = {"coeffs": list(doc.relation),
                                     "pass": rep.relation_holds}
                c0, c1, c2 = doc.relation
                desc = f"{c0} + {c1}*d + {c2}*d^2 = 0"
                lines.append(f"  relation {desc}: "
                             + ("PASS" if rep.relation_holds else "FAIL"))
                if not rep.relation_holds:
                    code = EXIT_CHECK_FAILED
            d_out.append(entry)
        record["d"] = d_out
        split_out = []
        for beta in sorted(ds.dinf):
            rep = splitting_check(full, beta)
            split_out.append({
                "class": list(beta),
                "pass": rep.passed,
                "diff": _matrix_obj(rep.diff),
                "warnings": list(rep.warnings),
            })
            lines.append(f"splitting formula at {list(beta)}: "
                         + ("PASS" if rep.passed else "FAIL"))
            for w in rep.warnings:
                lines.append(f"  warning: {w}")
            if not rep.passed:
                code = EXIT_CHECK_FAILED
                for i, row in enumerate(rep.diff):
                    for j, x in enumerate(row):
                        if not x.is_zero():
                            lines.append(f"  diff[{i}][{j}] = {x}")
        record["splitting"] = split_out
    except TrajectoryError as exc:
        raise CliFailure(EXIT_INPUT_ERROR, "E_ENGINE", str(exc)) from None
    _emit(args, record, lines)
    return code


# -- zeta -------------------------------------------------------------------

def cmd_zeta(args) -> int:
    doc = _load_document(args.document)
    ds = doc.trajectory
    if ds is None:
        raise CliFailure(EXIT_INPUT_ERROR, "E_NO_TRAJ",
                         "document has no [trajectory] section")
    bound = args.truncate if args.truncate is not None else doc.truncation
    try:
        Z = zeta(ds, bound)
    except TrajectoryError as exc:
        raise CliFailure(EXIT_INPUT_ERROR, "E_ENGINE", str(exc)) from None
    record = {"command": "zeta", "truncation": bound, "series": Z.to_obj()}
    lines = [f"zeta (truncated at total degree {bound}):", f"  {Z}"]
    _emit(args, record, lines)
    return EXIT_OK


# -- critval ----------------------------------------------------------------

def cmd_critval(args) -> int:
    try:
        P = parse_ratfn(args.expression)
    except ExprError as exc:
        raise CliFailure(EXIT_INPUT_ERROR, "E_PARSE", str(exc)) from None
    a = Fraction(args.at)
    value = critical_value(P, a)
    record = {"command": "critval", "input": str(P),
              "point": format_rational(a), "value": format_rational(value)}
    _emit(args, record,
          [f"P = {P}", f"P*({format_rational(a)}) = {format_rational(value)}"])
    return EXIT_OK


# -- check ------------------------------------------------------------------

def cmd_check(args) -> int:
    if args.name != "all" and args.name not in SUITES:
        known = ", ".join(sorted(SUITES) + ["all"])
        raise CliFailure(EXIT_INPUT_ERROR, "E_NO_SUITE",
                         f"unknown suite {args.name!r} (known: {known})")
    names = sorted(SUITES) if args.name == "all" else [args.name]
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            chunks = list(pool.map(lambda n: (n, SUITES[n]()), names))
    else:
        chunks = [(n, SUITES[n]()) for n in names]
    chunks.sort(key=lambda c: c[0])
    results = []
    for suite_name, cases in chunks:
        for case, ok, detail in cases:
            results.append((f"{suite_name}:{case}", ok, detail))
    failed = [r for r in results if not r[1]]
    record = {
        "command": "check",
        "suite": args.name,
        "total": len(results),
        "failed": len(failed),
        "cases": [{"name": n, "pass": ok, **({"detail": d} if d else {})}
                  for n, ok, d in results],
    }
    lines = []
    if args.verbose:
        for n, ok, d in results:
            lines.append(f"{'PASS' if ok else 'FAIL'} {n}" + (f"  [{d}]" if d else ""))
    else:
        for n, ok, d in failed:
            lines.append(f"FAIL {n}" + (f"  [{d}]" if d else ""))
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    _emit(args, record, lines)
    return EXIT_OK if not failed else EXIT_CHECK_FAILED


# -- echo (round-trip) ------------------------------------------------------

def cmd_echo(args) -> int:
    doc = _load_document(args.document)
    sys.stdout.write(serialize_document(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eulerseries",
        description="Exact computations of rational-function Euler classes, "
                    "Hilbert series, trajectory differentials and zeta functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--machine", action="store_true",
                       help="machine-readable JSON on one line")

    p = sub.add_parser("euler", help="Euler series of the document's sections")
    p.add_argument("document")
    p.add_argument("--section", help="restrict to one named section")
    p.add_argument("--at", help="evaluate the global series at t=<rational>")
    p.add_argument("--critical",
                   help="critical value of the global series at t=<rational>")
    p.add_argument("--clear", action="store_true",
                   help="pole-cleared normal form of the global series")
    p.add_argument("--nonreduced", action="store_true",
                   help="also report the non-reduced Euler number")
    common(p)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("hilbert", help="Hilbert series from the graded block")
    p.add_argument("document")
    common(p)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("traj", help="trajectory differentials and checks")
    p.add_argument("document")
    common(p)
    p.set_defaults(func=cmd_traj)

    p = sub.add_parser("zeta", help="dynamical zeta function")
    p.add_argument("document")
    p.add_argument("--truncate", type=int, help="truncation total degree")
    common(p)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("critval", help="critical value of a rational function")
    p.add_argument("expression", help='e.g. "(1-t^2)/(1+t)"')
    p.add_argument("--at", default="-1", help="rational point (default -1)")
    common(p)
    p.set_defaults(func=cmd_critval)

    p = sub.add_parser("check", help="run a named invariant suite")
    p.add_argument("name", help="suite name or 'all'")
    p.add_argument("--workers", type=int, default=1,
                   help="run suites concurrently (output order is canonical)")
    p.add_argument("--verbose", action="store_true",
                   help="print every case, not only failures")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("echo", help="parse and reserialize a document")
    p.add_argument("document")
    p.set_defaults(func=cmd_echo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliFailure as exc:
        print(f"{exc.args[0]}", file=sys.stderr)
        print(f"error: {exc.tag}", file=sys.stderr)
        return exc.code
    except NotClearableError as exc:
        print(str(exc), file=sys.stderr)
        print("error: E_STACKY_POLE", file=sys.stderr)
        return EXIT_ENGINE_LIMIT


if __name__ == "__main__":
    sys.exit(main())
