import random
from fractions import Fraction

import pytest

from eulerseries.exactnum import MonoidSeries, Poly, RatFn, series_exp
from eulerseries.trajcalc import (CurveClassMonoid, LocalizedZeroRecord,
                                  TrajDataset, TrajectoryError, ZeroSet,
                                  assemble_d, compose_convolution, contract_f,
                                  d_square_relation, mat_add, mat_eq, mat_mul,
                                  product_field_zeros, specialize,
                                  splitting_check, synthesize_dinf, zeta,
                                  zero_matrix)


def const_matrix(rows):
    return [[RatFn.const(x) for x in row] for row in rows]


@pytest.fixture
def two_zeros():
    return ZeroSet(("a", "b"))


@pytest.fixture
def line_monoid():
    return CurveClassMonoid(1, (1,))


class TestBasics:
    def test_zero_set_rejects_duplicates(self):
        with pytest.raises(TrajectoryError):
            ZeroSet(("a", "a"))

    def test_zero_set_index(self, two_zeros):
        assert two_zeros.index("b") == 1
        with pytest.raises(TrajectoryError):
            two_zeros.index("c")

    def test_monoid_degree(self):
        m = CurveClassMonoid(2, (1, 3))
        assert m.degree((2, 1)) == 5
        with pytest.raises(TrajectoryError):
            m.degree((-1, 0))

    def test_dataset_shape_validation(self, two_zeros, line_monoid):
        with pytest.raises(TrajectoryError):
            TrajDataset(two_zeros, line_monoid,
                        d={(1,): const_matrix([[1, 1]])})


class TestAssembly:
    def test_product_field_all_pairs(self, two_zeros):
        recs = product_field_zeros(two_zeros, (1,))
        assert len(recs) == 4
        assert all(r.multiplicity == RatFn.const(1) for r in recs)

    def test_assemble_all_ones(self, two_zeros):
        recs = product_field_zeros(two_zeros, (1,))
        d = assemble_d(two_zeros, recs, (1,))
        assert mat_eq(d, const_matrix([[1, 1], [1, 1]]))

    def test_assemble_is_additive_in_records(self, two_zeros):
        r1 = LocalizedZeroRecord("a", "b", (1,), RatFn.const(2))
        r2 = LocalizedZeroRecord("a", "b", (1,), RatFn.const(3))
        r3 = LocalizedZeroRecord("b", "a", (2,))  # other class, ignored
        d = assemble_d(two_zeros, [r1, r2, r3], (1,))
        assert mat_eq(d, const_matrix([[0, 5], [0, 0]]))

    def test_all_ones_square_relation(self, two_zeros, line_monoid):
        # doubled-field differential on n zeros satisfies d^2 = n*d
        recs = product_field_zeros(two_zeros, (1,))
        d = assemble_d(two_zeros, recs, (1,))
        ds = TrajDataset(two_zeros, line_monoid, d={(1,): d})
        report = d_square_relation(ds, (1,), relation=[0, -2, 1])
        assert report.relation_holds is True

    def test_square_relation_fails_when_wrong(self, two_zeros, line_monoid):
        ds = TrajDataset(two_zeros, line_monoid,
                         d={(1,): const_matrix([[1, 1], [0, 1]])})
        report = d_square_relation(ds, (1,), relation=[0, -2, 1])
        assert report.relation_holds is False
        assert mat_eq(report.square, const_matrix([[1, 2], [0, 1]]))

    def test_square_without_relation(self, two_zeros, line_monoid):
        ds = TrajDataset(two_zeros, line_monoid,
                         d={(1,): const_matrix([[0, 1], [0, 0]])})
        assert d_square_relation(ds, (1,)).relation_holds is None


class TestSpecialize:
    def test_plain_reports_pole_entries(self):
        bad = RatFn(Poly([1]), Poly([1, 1]))
        m = [[RatFn.const(1), bad], [bad, RatFn.const(0)]]
        with pytest.raises(TrajectoryError) as exc:
            specialize(m, -1)
        msg = str(exc.value)
        assert "(0, 1)" in msg and "(1, 0)" in msg

    def test_plain_commutes_with_mat_mul(self):
        rng = random.Random(43)

        def rand_mat():
            return [[RatFn(Poly([rng.randint(-2, 2), rng.randint(-2, 2)]))
                     for _ in range(2)] for _ in range(2)]

        for _ in range(20):
            a, b = rand_mat(), rand_mat()
            left = specialize(mat_mul(a, b), 2)
            right = [[sum((x * y for x, y in zip(ra, col)), Fraction(0))
                      for col in zip(*specialize(b, 2))]
                     for ra in specialize(a, 2)]
            assert left == right

    def test_critical_mode(self):
        m = [[RatFn(Poly([1, 1]))]]  # vanishes at -1; critical value is 1
        assert specialize(m, -1, mode="critical") == [[1]]
        assert specialize(m, -1) == [[0]]

    def test_unknown_mode(self):
        with pytest.raises(TrajectoryError):
            specialize([[RatFn.const(1)]], 0, mode="weird")


class TestContraction:
    def test_left_contracts_first_slot(self):
        n = 2
        f = [[[RatFn.const(0)] * n for _ in range(n)] for _ in range(n)]
        f[1][0][1] = RatFn.const(7)
        x = [RatFn.const(0), RatFn.const(1)]
        m = contract_f(f, x, "left")
        assert m[0][1] == RatFn.const(7)
        assert sum(1 for row in m for v in row if not v.is_zero()) == 1

    def test_right_contracts_third_slot(self):
        n = 2
        f = [[[RatFn.const(0)] * n for _ in range(n)] for _ in range(n)]
        f[1][0][1] = RatFn.const(7)
        x = [RatFn.const(0), RatFn.const(1)]
        m = contract_f(f, x, "right")
        assert m[1][0] == RatFn.const(7)
        assert sum(1 for row in m for v in row if not v.is_zero()) == 1

    def test_bilinear(self):
        rng = random.Random(47)
        n = 2

        def rand_tensor():
            return [[[RatFn.const(rng.randint(-2, 2)) for _ in range(n)]
                     for _ in range(n)] for _ in range(n)]

        def rand_vec():
            return [RatFn.const(rng.randint(-2, 2)) for _ in range(n)]

        for side in ("left", "right"):
            f = rand_tensor()
            x, y = rand_vec(), rand_vec()
            lhs = contract_f(f, [a + b for a, b in zip(x, y)], side)
            rhs = mat_add(contract_f(f, x, side), contract_f(f, y, side))
            assert mat_eq(lhs, rhs)

    def test_bad_side(self):
        with pytest.raises(TrajectoryError):
            contract_f([[[RatFn.const(0)]]], [RatFn.const(1)], "middle")


class TestSplitting:
    def _dataset(self, dinf_22=2):
        zeros = ZeroSet(("a", "b"))
        monoid = CurveClassMonoid(1, (1,))
        d1 = const_matrix([[1, 1], [0, 1]])
        dinf = const_matrix([[1, dinf_22], [0, 1]])
        return TrajDataset(zeros, monoid, d={(1,): d1}, dinf={(2,): dinf})

    def test_synthesize_matches_square(self):
        ds = self._dataset()
        got = synthesize_dinf(ds, (2,))
        assert mat_eq(got, mat_mul(ds.d[(1,)], ds.d[(1,)]))

    def test_check_passes(self):
        report = splitting_check(self._dataset(), (2,))
        assert report.passed
        assert all(x.is_zero() for row in report.diff for x in row)
        assert report.warnings == ()

    def test_check_fails_on_perturbation(self):
        report = splitting_check(self._dataset(dinf_22=3), (2,))
        assert not report.passed
        assert report.diff[0][1] == RatFn.const(-1)

    def test_missing_dinf_warns(self):
        report = splitting_check(self._dataset(), (3,))
        assert report.warnings and "dinf" in report.warnings[0]

    def test_ef_terms_enter(self):
        zeros = ZeroSet(("a",))
        monoid = CurveClassMonoid(1, (1,))
        e = {(1,): [RatFn.const(2)]}
        f = {(1,): [[[RatFn.const(3)]]]}
        ds = TrajDataset(zeros, monoid, e=e, f=f)
        # e.f + f.e at class (2,) = 2*3 + 3*2 = 12
        got = synthesize_dinf(ds, (2,))
        assert got[0][0] == RatFn.const(12)


class TestConvolution:
    def test_associative_rank2(self):
        rng = random.Random(53)
        monoid = CurveClassMonoid(2, (1, 2))
        bound = 6

        def rand_family():
            fam = {}
            for _ in range(3):
                beta = (rng.randint(0, 2), rng.randint(0, 1))
                fam[beta] = const_matrix(
                    [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)])
            return fam

        for _ in range(5):
            A, B, C = rand_family(), rand_family(), rand_family()
            lhs = compose_convolution(
                compose_convolution(A, B, monoid, bound), C, monoid, bound)
            rhs = compose_convolution(
                A, compose_convolution(B, C, monoid, bound), monoid, bound)
            assert set(lhs) == set(rhs)
            for beta in lhs:
                assert mat_eq(lhs[beta], rhs[beta])

    def test_grading(self):
        monoid = CurveClassMonoid(1, (2,))
        A = {(1,): const_matrix([[1]])}
        out = compose_convolution(A, A, monoid, 4)
        assert set(out) == {(2,)}
        out = compose_convolution(A, A, monoid, 3)
        assert out == {}

    def test_size_mismatch(self):
        monoid = CurveClassMonoid(1, (1,))
        A = {(1,): const_matrix([[1]])}
        B = {(1,): const_matrix([[1, 0], [0, 1]])}
        with pytest.raises(TrajectoryError):
            compose_convolution(A, B, monoid, 4)


class TestZeta:
    def _dataset(self, N):
        zeros = ZeroSet(("a",))
        monoid = CurveClassMonoid(1, (1,))
        return TrajDataset(zeros, monoid, N=N)

    def test_single_class(self):
        n = RatFn.const(3)
        z = zeta(self._dataset({(1,): n}), 2)
        assert z[(0,)] == RatFn.const(1)
        assert z[(1,)] == RatFn.const(-3)
        assert z[(2,)] == RatFn.const(Fraction(9, 2))

    def test_rational_coefficients(self):
        n = RatFn(Poly([1]), Poly([1, 0, -1]))  # 1/(1-t^2)
        z = zeta(self._dataset({(1,): n}), 1)
        assert z[(1,)] == -n

    def test_matches_direct_exponential(self):
        N = {(1,): RatFn.const(2), (2,): RatFn.const(-4)}
        z = zeta(self._dataset(N), 3)
        log = MonoidSeries(1, (1,), 3, {
            (1,): RatFn.const(-2), (2,): RatFn.const(2)})
        assert z == series_exp(log)

    def test_zero_degree_rejected(self):
        with pytest.raises(TrajectoryError):
            zeta(self._dataset({(0,): RatFn.const(1)}), 2)

    def test_zero_counts_skipped(self):
        z = zeta(self._dataset({(1,): RatFn.const(0)}), 2)
        assert z == MonoidSeries.one(1, (1,), 2)
