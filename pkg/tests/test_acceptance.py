"""Acceptance suite: one criterion per test, each printing a pass/fail line.

All checks are exact (tolerance zero); the stated runtime budgets are
asserted directly.  Run with `pytest -v` (add -s to see the lines inline).
"""

import json
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from eulerseries.cli import main
from eulerseries.docparse import parse_document
from eulerseries.exactnum import RatFn
from eulerseries.suites import (SUITES, run_bundle_identity,
                                run_critical_laws, run_euler_numbers,
                                run_hilbert_oracle, run_splitting,
                                run_sym_clearing, run_zeta)
from eulerseries.trajcalc import (assemble_d, d_square_relation, mat_eq,
                                  mat_mul, mat_scale)

EXAMPLES = Path(__file__).resolve().parent.parent / "docs" / "examples"

DURATIONS = {}


def _report(num, name, ok, budget=None):
    line = f"criterion {num} ({name}): {'PASS' if ok else 'FAIL'}"
    if budget is not None:
        line += f"  [{DURATIONS[num]:.2f}s, budget {budget}s]"
    print(line)
    assert ok, line


def _timed(num, fn):
    start = time.perf_counter()
    out = fn()
    DURATIONS[num] = time.perf_counter() - start
    return out


def _suite_passes(cases):
    return all(ok for _name, ok, _detail in cases)


def test_criterion_1_p1_worked_example():
    def run():
        doc = parse_document((EXAMPLES / "p1_flow.toml").read_text())
        ds = doc.trajectory
        d1 = assemble_d(ds.zeros, doc.records, (1,))
        all_ones = [[RatFn.const(1)] * 2 for _ in range(2)]
        ok = mat_eq(d1, all_ones)
        ok = ok and mat_eq(mat_mul(d1, d1), mat_scale(d1, RatFn.const(2)))
        full = type(ds)(ds.zeros, ds.monoid, {(1,): d1})
        ok = ok and d_square_relation(full, (1,), doc.relation).relation_holds
        return ok

    ok = _timed(1, run)
    ok = ok and DURATIONS[1] < 1.0
    _report(1, "projective-line flow, d1 all-ones with d1^2 = 2 d1", ok, 1)


def test_criterion_2_bundle_identity_suite():
    cases = _timed(2, run_bundle_identity)
    ok = _suite_passes(cases) and len(cases) > 1000 and DURATIONS[2] < 30.0
    _report(2, f"ch(lambda_-1(E^dual))*Td(E) = c_top(E), {len(cases)} bundles",
            ok, 30)


def test_criterion_3_euler_numbers():
    cases = _timed(3, run_euler_numbers)
    ok = _suite_passes(cases) and DURATIONS[3] < 5.0
    _report(3, "reduced Euler numbers 2, 3, 4, 4 for P1, P2, P3, P1xP1", ok, 5)


def test_criterion_4_sym_series_pole_clearing():
    cases = _timed(4, run_sym_clearing)
    ok = _suite_passes(cases) and len(cases) > 1000
    _report(4, "pole clearing of symmetric-power series with "
               "n <= rank*(dim+1) and exact re-multiplication", ok)


def test_criterion_5_critical_value_laws():
    cases = _timed(5, lambda: run_critical_laws(count=1000))
    ok = _suite_passes(cases)
    _report(5, "critical-value laws on 1000 random rational functions", ok)


def test_criterion_6_hilbert_oracle():
    cases = _timed(6, lambda: run_hilbert_oracle(count=50, up_to=40))
    ok = _suite_passes(cases) and len(cases) == 50
    _report(6, "50 Koszul Hilbert series vs brute-force counts to weight 40",
            ok)


def test_criterion_7_splitting_checker():
    cases = _timed(7, lambda: run_splitting(count=20))
    ok = _suite_passes(cases) and len(cases) == 40
    _report(7, "splitting formula on 20 synthetic datasets, "
               "with localized failure under perturbation", ok)


def test_criterion_8_zeta_oracle():
    cases = _timed(8, run_zeta)
    ok = _suite_passes(cases)
    _report(8, "zeta truncations vs exponential oracle, exp(S)*exp(-S) = 1",
            ok)


def test_criterion_9_determinism(capsys):
    def run():
        ok = True
        commands = [
            ("euler", "bundle_identity.toml"),
            ("euler", "rationality_suite.toml"),
            ("hilbert", "hilbert_koszul.toml"),
            ("traj", "p1_flow.toml"),
            ("traj", "splitting_dataset.toml"),
            ("zeta", "splitting_dataset.toml"),
        ]
        for cmd, name in commands:
            outs = []
            for _ in range(2):
                code = main([cmd, str(EXAMPLES / name), "--machine"])
                outs.append(capsys.readouterr().out)
                ok = ok and code == 0
            ok = ok and outs[0] == outs[1]
            ok = ok and json.loads(outs[0]) is not None
        # worker counts must not change the check output
        for suite in ("euler-numbers", "splitting", "zeta"):
            runs = []
            for workers in ("1", "4"):
                main(["check", suite, "--machine", "--workers", workers])
                runs.append(capsys.readouterr().out)
            ok = ok and runs[0] == runs[1]
        # concurrent suite execution agrees with serial execution
        names = ["critical-laws", "euler-numbers", "hilbert-oracle",
                 "splitting", "zeta"]
        serial = [SUITES[n]() for n in names]
        with ThreadPoolExecutor(max_workers=4) as pool:
            threaded = list(pool.map(lambda n: SUITES[n](), names))
        ok = ok and serial == threaded
        return ok

    ok = _timed(9, run)
    total = sum(DURATIONS.values())
    ok = ok and total < 120.0
    with capsys.disabled():
        print()
        _report(9, f"byte-identical machine output, total runtime {total:.1f}s"
                   " < 120s", ok)


def teardown_module(_module):
    for num in sorted(DURATIONS):
        print(f"criterion {num} took {DURATIONS[num]:.2f}s")
