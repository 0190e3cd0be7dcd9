"""Numerical layer for vector fields with simple isolated zeros: zero sets,
curve-class monoids, trajectory differentials assembled from localized zero
records, the splitting-formula checker, graded convolution composition, and
the dynamical zeta function.

All matrices act by the row-summation convention: basis vector i maps to
sum_j M[i][j] * j.  Entries are exact rational functions in t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iter_product

from .exactnum import MonoidSeries, RatFn, series_exp


class TrajectoryError(ValueError):
    pass


@dataclass(frozen=True)
class ZeroSet:
    """Ordered distinct labels for the simple zeros of the vector field.

    The labels are an orthonormal basis by convention (Poincare duality on a
    finite reduced zero set)."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if len(set(labels)) != len(labels):
            raise TrajectoryError("zero labels must be distinct")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise TrajectoryError(f"unknown zero label {label!r}") from None


@dataclass(frozen=True)
class CurveClassMonoid:
    """Free commutative monoid N^rank with positive degree weights."""

    rank: int
    weights: tuple

    def __post_init__(self):
        ws = tuple(int(w) for w in self.weights)
        if len(ws) != self.rank:
            raise TrajectoryError("need one weight per monoid generator")
        if any(w < 1 for w in ws):
            raise TrajectoryError("degree weights must be positive")
        object.__setattr__(self, "weights", ws)

    def degree(self, beta) -> int:
        beta = tuple(beta)
        if len(beta) != self.rank or any(b < 0 for b in beta):
            raise TrajectoryError(f"bad curve class {beta}")
        return sum(a * w for a, w in zip(beta, self.weights))


@dataclass(frozen=True)
class LocalizedZeroRecord:
    """One localized zero of the induced field on two-pointed trajectories:
    a source zero, a target zero, a curve class, and a multiplicity."""

    source: str
    target: str
    beta: tuple
    multiplicity: RatFn = field(default_factory=lambda: RatFn.const(1))

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))
        m = self.multiplicity
        if not isinstance(m, RatFn):
            object.__setattr__(self, "multiplicity", RatFn.const(m))


# -- matrix helpers (entries are RatFn) -------------------------------------

def zero_matrix(n: int):
    return [[RatFn.const(0) for _ in range(n)] for _ in range(n)]

def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]

def mat_mul(a, b):
    n = len(a)
    out = zero_matrix(n)
    for i in range(n):
        for k in range(n):
            acc = RatFn.const(0)
            for j in range(n):
                acc = acc + a[i][j] * b[j][k]
            out[i][k] = acc
    return out

def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))

def mat_scale(a, c):
    return [[x * c for x in row] for row in a]


@dataclass(frozen=True)
class TrajDataset:
    """Per-class trajectory data: differentials d (matrices), one- and
    three-point classes e (vectors) and f (3-tensors), boundary
    differentials dinf, and genus-1 totals N, all over RatFn."""

    zeros: ZeroSet
    monoid: CurveClassMonoid
    d: dict = field(default_factory=dict)      # beta -> matrix
    e: dict = field(default_factory=dict)      # beta -> vector
    f: dict = field(default_factory=dict)      # beta -> 3-tensor
    dinf: dict = field(default_factory=dict)   # beta -> matrix
    N: dict = field(default_factory=dict)      # beta -> RatFn

    def __post_init__(self):
        n = len(self.zeros)
        for beta, m in self.d.items():
            self.monoid.degree(beta)
            if len(m) != n or any(len(r) != n for r in m):
                raise TrajectoryError(f"d table at {beta} has wrong shape")
        for beta, v in self.e.items():
            self.monoid.degree(beta)
            if len(v) != n:
                raise TrajectoryError(f"e table at {beta} has wrong shape")
        for beta, t3 in self.f.items():
            self.monoid.degree(beta)
            if len(t3) != n or any(len(p) != n for p in t3) or \
                    any(len(r) != n for p in t3 for r in p):
                raise TrajectoryError(f"f table at {beta} has wrong shape")
        for beta, m in self.dinf.items():
            self.monoid.degree(beta)
            if len(m) != n or any(len(r) != n for r in m):
                raise TrajectoryError(f"dinf table at {beta} has wrong shape")
        for beta in self.N:
            self.monoid.degree(beta)


def product_field_zeros(zeros: ZeroSet, beta) -> list:
    """Zeros of the doubled field on ordered pairs: one record per (i, j),
    each simple (multiplicity 1), all in the supplied class."""
    beta = tuple(beta)
    return [LocalizedZeroRecord(i, j, beta)
            for i in zeros.labels for j in zeros.labels]


def assemble_d(zeros: ZeroSet, records, beta):
    """Sum record multiplicities into the matrix for one curve class."""
    beta = tuple(beta)
    n = len(zeros)
    out = zero_matrix(n)
    for rec in records:
        if rec.beta != beta:
            continue
        i, j = zeros.index(rec.source), zeros.index(rec.target)
        out[i][j] = out[i][j] + rec.multiplicity
    return out


def specialize(matrix, a, mode: str = "plain"):
    """Evaluate a RatFn matrix at t = a, entrywise.

    plain: requires every entry finite at a (errors listing offenders);
    critical: takes the critical value entrywise.
    """
    a = Fraction(a)
    if mode == "critical":
        return [[Fraction(x.critical_value(a)) for x in row] for row in matrix]
    if mode != "plain":
        raise TrajectoryError(f"unknown specialization mode {mode!r}")
    offenders = [(i, j) for i, row in enumerate(matrix)
                 for j, x in enumerate(row) if x.den(a) == 0]
    if offenders:
        raise TrajectoryError(
            "pole at t = %s in entries %s" % (a, ", ".join(map(str, offenders))))
    return [[x(a) for x in row] for row in matrix]


def contract_f(f, x, side: str):
    """Pair a 3-tensor with a vector through the orthonormal basis pairing.

    left:  contract slot 1, M[b][c] = sum_a x[a] f[a][b][c];
    right: contract slot 3, M[a][b] = sum_c f[a][b][c] x[c].
    The slot choice is a documented convention of this package.
    """
    n = len(f)
    if len(x) != n:
        raise TrajectoryError("vector length does not match tensor")
    out = zero_matrix(n)
    if side == "left":
        for a in range(n):
            if x[a].is_zero():
                continue
            for b in range(n):
                for c in range(n):
                    out[b][c] = out[b][c] + x[a] * f[a][b][c]
    elif side == "right":
        for c in range(n):
            if x[c].is_zero():
                continue
            for a in range(n):
                for b in range(n):
                    out[a][b] = out[a][b] + f[a][b][c] * x[c]
    else:
        raise TrajectoryError(f"unknown contraction side {side!r}")
    return out


def _decompositions(beta):
    """All ordered splittings beta = beta1 + beta2 (componentwise)."""
    ranges = [range(b + 1) for b in beta]
    for b1 in iter_product(*ranges):
        yield tuple(b1), tuple(x - y for x, y in zip(beta, b1))


def synthesize_dinf(ds: TrajDataset, beta):
    """Boundary differential from component data, by the splitting formula:
    sum over ordered decompositions of d.d + e.f + f.e."""
    beta = tuple(beta)
    n = len(ds.zeros)
    total = zero_matrix(n)
    zero_vec = [RatFn.const(0)] * n
    zero_t = [[[RatFn.const(0)] * n for _ in range(n)] for _ in range(n)]
    for b1, b2 in _decompositions(beta):
        if b1 in ds.d and b2 in ds.d:
            total = mat_add(total, mat_mul(ds.d[b1], ds.d[b2]))
        if b1 in ds.e and b2 in ds.f:
            total = mat_add(total, contract_f(ds.f[b2], ds.e[b1], "left"))
        if b1 in ds.f and b2 in ds.e:
            total = mat_add(total, contract_f(ds.f[b1], ds.e[b2], "right"))
    return total


@dataclass(frozen=True)
class SplittingReport:
    beta: tuple
    lhs: list
    rhs: list
    passed: bool
    diff: list
    warnings: tuple = ()


def splitting_check(ds: TrajDataset, beta) -> SplittingReport:
    """Exact check of the splitting formula at one curve class: the summed
    decomposition products must equal the supplied boundary differential."""
    beta = tuple(beta)
    warnings = []
    if beta not in ds.dinf:
        warnings.append(f"no dinf table at {beta}; treated as zero")
    if not ds.e and not ds.f:
        pass
    elif bool(ds.e) != bool(ds.f):
        warnings.append("only one of e/f supplied; missing one treated as zero")
    lhs = synthesize_dinf(ds, beta)
    n = len(ds.zeros)
    rhs = ds.dinf.get(beta, zero_matrix(n))
    diff = [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(lhs, rhs)]
    passed = all(x.is_zero() for row in diff for x in row)
    return SplittingReport(beta, lhs, rhs, passed, diff, tuple(warnings))


def compose_convolution(A: dict, B: dict, monoid: CurveClassMonoid, bound: int) -> dict:
    """Convolution of two curve-class-graded matrix families:
    (A * B)_beta = sum over beta1 + beta2 = beta of A_{beta1} B_{beta2},
    truncated at total degree bound."""
    sizes = {len(m) for m in A.values()} | {len(m) for m in B.values()}
    if len(sizes) > 1:
        raise TrajectoryError("mismatched zero sets in convolution")
    out = {}
    for b1, m1 in A.items():
        for b2, m2 in B.items():
            beta = tuple(x + y for x, y in zip(b1, b2))
            if monoid.degree(beta) > bound:
                continue
            prod = mat_mul(m1, m2)
            out[beta] = mat_add(out[beta], prod) if beta in out else prod
    return {b: m for b, m in out.items()
            if any(not x.is_zero() for row in m for x in row)}


@dataclass(frozen=True)
class SquareReport:
    beta: tuple
    square: list
    relation_holds: "bool | None"


def d_square_relation(ds: TrajDataset, beta, relation=None) -> SquareReport:
    """Square of the specialized differential at one class, with an optional
    asserted polynomial relation p(d) = 0 given by coefficients [c0, c1, c2]
    meaning c0 + c1*d + c2*d^2 = 0."""
    beta = tuple(beta)
    if beta not in ds.d:
        raise TrajectoryError(f"no d table at {beta}")
    d = ds.d[beta]
    sq = mat_mul(d, d)
    holds = None
    if relation is not None:
        c0, c1, c2 = (RatFn.const(c) for c in relation)
        n = len(d)
        ident = [[RatFn.const(1 if i == j else 0) for j in range(n)] for i in range(n)]
        acc = mat_add(mat_add(mat_scale(ident, c0), mat_scale(d, c1)),
                      mat_scale(sq, c2))
        holds = all(x.is_zero() for row in acc for x in row)
    return SquareReport(beta, sq, holds)


def zeta(ds: TrajDataset, bound: int) -> MonoidSeries:
    """Dynamical zeta function: exp(- sum over classes of N_beta/|beta| z^beta),
    truncated at total degree bound, with coefficients in Q(t)."""
    coeffs = {}
    for beta, nb in ds.N.items():
        if nb.is_zero():
            continue
        deg = ds.monoid.degree(beta)
        if deg == 0:
            raise TrajectoryError("zeta requires positive-degree classes")
        if deg > bound:
            continue
        coeffs[beta] = -nb * Fraction(1, deg)
    S = MonoidSeries(ds.monoid.rank, ds.monoid.weights, bound, coeffs)
    return series_exp(S)
