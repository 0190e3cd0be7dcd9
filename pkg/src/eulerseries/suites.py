"""Named invariant suites, runnable from the CLI (`check`) and from the
acceptance tests.  Each suite returns a list of (case name, passed, detail)
triples in a canonical order; randomized suites are seeded and deterministic.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement

from .exactnum import (MonoidSeries, Poly, RatFn, critical_value, pole_clear,
                       series_exp)
from .cohring import (CohRing, SplitBundle, ch, ctop, det_class, integrate,
                      lambda_minus_one_dual, ring_pn, ring_product,
                      sym_series, todd)
from .eulereng import (SectionData, chern_euler_identity, eu_global,
                       eu_reduced, eu_series, sym_rationality_check)
from .gradedmod import (GradedPolyRing, hilbert_brute_force, hilbert_from_betti,
                        koszul_resolution)
from .trajcalc import (CurveClassMonoid, TrajDataset, ZeroSet, contract_f,
                       mat_add, mat_eq, mat_mul, splitting_check, zero_matrix,
                       zeta)


def builtin_spaces():
    """(name, ring, dim) for the built-in suite spaces."""
    spaces = []
    for n in range(1, 5):
        spaces.append((f"P{n}", ring_pn(n), n))
    p1, p2 = ring_pn(1), ring_pn(2)
    spaces.append(("P1xP1", ring_product(p1, ring_pn(1)), 2))
    spaces.append(("P1xP2", ring_product(p1, p2), 3))
    return spaces


def suite_bundles(max_rank: int = 3, coeff_range: int = 3):
    """The bundle suite: on each built-in space, all effective split bundles
    of rank <= max_rank whose roots are integer multiples of a single
    generator with coefficients in [-coeff_range, coeff_range]; on product
    spaces, mixed roots a*h1 + b*h2 with a, b in {-1, 1} are added."""
    for space_name, ring, dim in builtin_spaces():
        gens = [ring.gen(name) for name in ring.names()]
        roots = []
        seen = set()
        for g in gens:
            for a in range(-coeff_range, coeff_range + 1):
                r = g * a
                key = tuple(sorted(r.coeffs.items()))
                if key not in seen:
                    seen.add(key)
                    roots.append((_root_label(r, ring), r))
        if len(gens) > 1:
            for a in (-1, 1):
                for b in (-1, 1):
                    r = gens[0] * a + gens[1] * b
                    roots.append((_root_label(r, ring), r))
        for rank in range(1, max_rank + 1):
            for combo in combinations_with_replacement(roots, rank):
                labels = "+".join(f"({lbl})" for lbl, _ in combo)
                E = SplitBundle(ring, [r for _, r in combo])
                yield f"{space_name}:{labels}", ring, dim, E


def _root_label(r, ring) -> str:
    parts = []
    for e, c in sorted(r.coeffs.items()):
        parts.append(f"{c}*{ring.monomial_name(e)}")
    return "+".join(parts) if parts else "0"


def run_bundle_identity():
    """ch(lambda_{-1}(E^dual)) * Td(E) = c_top(E) over the bundle suite."""
    results = []
    for name, _ring, _dim, E in suite_bundles():
        ok = chern_euler_identity(E)
        results.append((name, ok, "" if ok else "identity fails"))
    return results


def run_sym_clearing():
    """Pole clearing of the symmetric-power series over the bundle suite:
    success, the bound n <= rank * (dim + 1), and re-multiplication."""
    results = []
    for name, _ring, dim, E in suite_bundles():
        try:
            n, _R = sym_rationality_check(E, 2)
        except AssertionError as exc:
            results.append((name, False, str(exc)))
            continue
        ok = n <= E.rank * (dim + 1)
        results.append((name, ok, f"n={n}" if ok else
                        f"n={n} exceeds rank*(dim+1)={E.rank * (dim + 1)}"))
    return results


def tangent_bundle(space_name: str) -> tuple:
    """Split models of tangent bundles of the built-in spaces.

    P1 and products of P1/P2 factors use the twisted Euler-sequence model:
    T of P^n is the virtual bundle (n+1) O(1) - O, which for P^1 reduces to
    the honest line bundle O(2)."""
    spaces = dict((n, (r, d)) for n, r, d in builtin_spaces())
    ring, dim = spaces[space_name]
    if space_name == "P1":
        return ring, SplitBundle(ring, [ring.gen("h") * 2])
    if space_name.startswith("P") and "x" not in space_name:
        n = dim
        h = ring.gen("h")
        return ring, SplitBundle(ring, [h] * (n + 1), [ring.zero()])
    # products: direct sum of per-factor models
    if space_name == "P1xP1":
        h1, h2 = ring.gen("h1"), ring.gen("h2")
        return ring, SplitBundle(ring, [h1 * 2, h2 * 2])
    if space_name == "P1xP2":
        h1, h2 = ring.gen("h1"), ring.gen("h2")
        return ring, SplitBundle(ring, [h1 * 2, h2, h2, h2], [ring.zero()])
    raise ValueError(f"no tangent model for {space_name}")


def run_euler_numbers():
    """Reduced Euler numbers of tangent bundles against the classical
    Euler characteristics, plus the vanishing trivial-line case."""
    expected = {"P1": 2, "P2": 3, "P3": 4, "P1xP1": 4}
    results = []
    for name in ("P1", "P2", "P3", "P1xP1"):
        ring, T = tangent_bundle(name)
        value = eu_reduced(ring, T, SectionData.zero_section())
        ok = value == expected[name]
        results.append((f"chi({name})", ok, f"got {value}, want {expected[name]}"))
    ring = ring_pn(1)
    triv = SplitBundle(ring, [ring.zero()])
    value = eu_reduced(ring, triv, SectionData.zero_section())
    results.append(("trivial-line-on-P1", value == 0, f"got {value}, want 0"))
    return results


def random_ratfn(rng: random.Random, max_deg: int = 3) -> RatFn:
    def rand_poly(allow_zero=True):
        while True:
            p = Poly([Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                      for _ in range(rng.randint(1, max_deg + 1))])
            if allow_zero or not p.is_zero():
                return p
    return RatFn(rand_poly(), rand_poly(allow_zero=False))


def run_critical_laws(count: int = 1000, seed: int = 20240817):
    """Multiplicativity of the critical value, agreement with plain
    evaluation away from zeros/poles, and the zero convention."""
    rng = random.Random(seed)
    results = []
    points = [Fraction(-1), Fraction(0), Fraction(1)]
    bad = 0
    for i in range(count):
        P = random_ratfn(rng)
        Q = random_ratfn(rng)
        a = points[i % 3]
        if critical_value(P * Q, a) != critical_value(P, a) * critical_value(Q, a):
            bad += 1
    results.append((f"multiplicativity({count} samples)", bad == 0,
                    f"{bad} failures"))
    bad = 0
    for i in range(200):
        P = random_ratfn(rng)
        a = points[i % 3]
        if P.is_zero() or P.den(a) == 0:
            continue
        if P(a) != 0 and critical_value(P, a) != P(a):
            bad += 1
    results.append(("plain-evaluation-agreement", bad == 0, f"{bad} failures"))
    ok = all(critical_value(RatFn.const(0), a) == 0 for a in points)
    results.append(("zero-maps-to-zero", ok, ""))
    # non-additivity witness: (P+Q)* differs from P* + Q*
    P = RatFn(Poly([1, 1]))
    Q = RatFn.const(-1)
    a = Fraction(-1)
    lhs = critical_value(P + Q, a)
    rhs = critical_value(P, a) + critical_value(Q, a)
    results.append(("non-additivity-witness", lhs != rhs,
                    f"(P+Q)*={lhs} vs P*+Q*={rhs}"))
    return results


def random_regular_sequence(rng: random.Random):
    nvars = rng.randint(1, 4)
    weights = tuple(rng.choice((1, 2, 4)) for _ in range(nvars))
    ring = GradedPolyRing(tuple((f"x{i + 1}", w) for i, w in enumerate(weights)))
    k = rng.randint(1, nvars)
    chosen = rng.sample(range(nvars), k)
    seq = []
    for v in sorted(chosen):
        e = [0] * nvars
        e[v] = rng.randint(1, 3)
        seq.append(tuple(e))
    return ring, seq


def run_hilbert_oracle(count: int = 50, seed: int = 20240818, up_to: int = 40):
    """Koszul-resolution Hilbert series against brute-force monomial counts."""
    rng = random.Random(seed)
    results = []
    for i in range(count):
        ring, seq = random_regular_sequence(rng)
        betti = koszul_resolution(ring, seq)
        series = hilbert_from_betti(ring, betti)
        got = series.dimensions(up_to)
        want = hilbert_brute_force(ring, seq, up_to)
        ok = got == want
        results.append((f"koszul-{i:02d}", ok,
                        "" if ok else f"series {got[:8]} vs count {want[:8]}"))
    return results


def random_traj_dataset(rng: random.Random, with_ef: bool = True):
    n = rng.randint(2, 3)
    zeros = ZeroSet(tuple(f"z{i}" for i in range(n)))
    monoid = CurveClassMonoid(1, (1,))

    def rand_fn():
        return RatFn(Poly([rng.randint(-2, 2) for _ in range(2)]))

    classes = [(1,), (2,)]
    d = {b: [[rand_fn() for _ in range(n)] for _ in range(n)] for b in classes}
    e, f = {}, {}
    if with_ef:
        e = {b: [rand_fn() for _ in range(n)] for b in classes}
        f = {b: [[[rand_fn() for _ in range(n)] for _ in range(n)]
                 for _ in range(n)] for b in classes}
    return zeros, monoid, d, e, f


def straight_line_dinf(zeros, d, e, f, beta):
    """Independent re-evaluation of the splitting sum, written directly from
    the defining formula (the oracle for the checker)."""
    n = len(zeros)
    total = [[RatFn.const(0) for _ in range(n)] for _ in range(n)]
    b = beta[0]
    for b1 in range(b + 1):
        b2 = b - b1
        k1, k2 = (b1,), (b2,)
        if k1 in d and k2 in d:
            for i in range(n):
                for k in range(n):
                    for j in range(n):
                        total[i][k] = total[i][k] + d[k1][i][j] * d[k2][j][k]
        if k1 in e and k2 in f:
            for a in range(n):
                for i in range(n):
                    for j in range(n):
                        total[i][j] = total[i][j] + e[k1][a] * f[k2][a][i][j]
        if k1 in f and k2 in e:
            for c in range(n):
                for i in range(n):
                    for j in range(n):
                        total[i][j] = total[i][j] + f[k1][i][j][c] * e[k2][c]
    return total


def run_splitting(count: int = 20, seed: int = 20240819):
    """The splitting checker passes on datasets synthesized by the defining
    formula and fails under a random single-entry perturbation."""
    rng = random.Random(seed)
    results = []
    for i in range(count):
        zeros, monoid, d, e, f = random_traj_dataset(rng, with_ef=(i % 2 == 0))
        beta = (rng.choice((2, 3)),)
        dinf = {beta: straight_line_dinf(zeros, d, e, f, beta)}
        ds = TrajDataset(zeros, monoid, d, e, f, dinf, {})
        report = splitting_check(ds, beta)
        results.append((f"splitting-{i:02d}-pass", report.passed,
                        "" if report.passed else "synthesized dataset rejected"))
        n = len(zeros)
        pi, pj = rng.randrange(n), rng.randrange(n)
        bad = [row[:] for row in dinf[beta]]
        bad[pi][pj] = bad[pi][pj] + 1
        ds_bad = TrajDataset(zeros, monoid, d, e, f, {beta: bad}, {})
        report_bad = splitting_check(ds_bad, beta)
        localized = (not report_bad.passed and
                     report_bad.diff[pi][pj] == RatFn.const(-1) and
                     sum(0 if x.is_zero() else 1
                         for row in report_bad.diff for x in row) == 1)
        results.append((f"splitting-{i:02d}-perturbed", localized,
                        "" if localized else "perturbation not localized"))
    return results


def exp_oracle(S: MonoidSeries) -> MonoidSeries:
    """Multinomial-formula exponential, independent of series_exp: the
    coefficient of z^beta is summed over multisets of support classes."""
    support = sorted(S.coeffs)
    out = {(0,) * S.rank: RatFn.const(1)}

    def walk(idx, beta, coeff):
        if idx == len(support):
            if any(beta):
                out[beta] = out.get(beta, RatFn.const(0)) + coeff
            return
        gamma = support[idx]
        c = S.coeffs[gamma]
        term = RatFn.const(1)
        m = 0
        while True:
            cur = tuple(x + m * g for x, g in zip(beta, gamma))
            if S.degree(cur) > S.bound:
                break
            walk(idx + 1, cur, coeff * term)
            m += 1
            term = term * c * Fraction(1, m)

    walk(0, (0,) * S.rank, RatFn.const(1))
    return MonoidSeries(S.rank, S.weights, S.bound, out)


def run_zeta(seed: int = 20240820):
    """Zeta truncations against the multinomial oracle, and the exp inverse
    law, on rank-1 and rank-2 monoids to total degree 6."""
    rng = random.Random(seed)
    results = []
    for case in range(6):
        rank = 1 + case % 2
        weights = tuple(rng.choice((1, 2)) for _ in range(rank))
        monoid = CurveClassMonoid(rank, weights)
        zeros = ZeroSet(("p",))
        N = {}
        for _ in range(3):
            beta = tuple(rng.randint(0, 2) for _ in range(rank))
            if monoid.degree(beta) == 0 or monoid.degree(beta) > 6:
                continue
            N[beta] = RatFn(Poly([rng.randint(-2, 2), 1]),
                            Poly([1, 0, -1]) if rng.random() < 0.5 else Poly([1]))
        ds = TrajDataset(zeros, monoid, d={}, e={}, f={}, dinf={}, N=N)
        Z = zeta(ds, 6)
        S = MonoidSeries(rank, weights, 6,
                         {b: -c * Fraction(1, monoid.degree(b)) for b, c in N.items()})
        ok = Z == exp_oracle(S)
        results.append((f"zeta-oracle-{case}", ok, ""))
        ds_neg = TrajDataset(zeros, monoid, d={}, e={}, f={}, dinf={},
                             N={b: -c for b, c in N.items()})
        prod = Z * zeta(ds_neg, 6)
        ok = prod == MonoidSeries.one(rank, weights, 6)
        results.append((f"zeta-inverse-{case}", ok, ""))
    return results


SUITES = {
    "bundle-identity": run_bundle_identity,
    "sym-clearing": run_sym_clearing,
    "euler-numbers": run_euler_numbers,
    "critical-laws": run_critical_laws,
    "hilbert-oracle": run_hilbert_oracle,
    "splitting": run_splitting,
    "zeta": run_zeta,
}


def run_suite(name: str):
    if name == "all":
        out = []
        for key in SUITES:
            out.extend((f"{key}:{case}", ok, detail)
                       for case, ok, detail in SUITES[key]())
        return out
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()
