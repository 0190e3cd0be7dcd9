"""Weighted graded polynomial rings, Betti tables of finite free resolutions,
Koszul resolutions for monomial regular sequences, and Hilbert series.

The Hilbert series of a module presented by a Betti table is the alternating
sum of generator weights over the standard denominator prod(1 - t^{w_j});
an independent brute-force monomial count serves as the oracle in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .exactnum import Poly, RatFn, pole_clear


class GradedModuleError(ValueError):
    pass


@dataclass(frozen=True)
class GradedPolyRing:
    """Polynomial ring with positively weighted variables."""

    variables: tuple  # of (name, weight)

    def __post_init__(self):
        vs = tuple((str(n), int(w)) for n, w in self.variables)
        if any(w < 1 for _, w in vs):
            raise GradedModuleError("variable weights must be >= 1")
        names = [n for n, _ in vs]
        if len(set(names)) != len(names):
            raise GradedModuleError("duplicate variable names")
        object.__setattr__(self, "variables", vs)

    @staticmethod
    def weight2(n: int, prefix: str = "x") -> "GradedPolyRing":
        """The default construction: n variables, all in weight 2."""
        return GradedPolyRing(tuple((f"{prefix}{i + 1}", 2) for i in range(n)))

    @property
    def weights(self):
        return tuple(w for _, w in self.variables)

    def names(self):
        return [n for n, _ in self.variables]

    def monomial_weight(self, expts) -> int:
        return sum(e * w for e, (_, w) in zip(expts, self.variables))

    def parse_monomial(self, text: str):
        """Parse e.g. "x1^2*x2" into an exponent tuple."""
        names = self.names()
        expts = [0] * len(names)
        for factor in text.replace(" ", "").split("*"):
            if not factor:
                raise GradedModuleError(f"empty factor in monomial {text!r}")
            if "^" in factor:
                name, _, power = factor.partition("^")
                e = int(power)
            else:
                name, e = factor, 1
            if name not in names:
                raise GradedModuleError(f"unknown variable {name!r} in {text!r}")
            if e < 0:
                raise GradedModuleError(f"negative exponent in {text!r}")
            expts[names.index(name)] += e
        return tuple(expts)

    def denominator(self) -> Poly:
        out = Poly.const(1)
        for w in self.weights:
            out = out * Poly([1] + [0] * (w - 1) + [-1])
        return out


@dataclass(frozen=True)
class BettiTable:
    """Rows of generator weights, indexed by homological degree from 0."""

    rows: tuple  # of tuples of integer weights

    def __post_init__(self):
        object.__setattr__(self, "rows",
                           tuple(tuple(int(w) for w in row) for row in self.rows))

    @staticmethod
    def from_lists(rows) -> "BettiTable":
        return BettiTable(tuple(tuple(r) for r in rows))

    def shifted(self, k: int) -> "BettiTable":
        """Homological shift: prepend k empty rows."""
        return BettiTable(((),) * k + self.rows)

    def to_obj(self):
        return [list(row) for row in self.rows]


@dataclass(frozen=True)
class HilbertSeries:
    """Weight-graded dimension generating function, as a rational function
    whose denominator divides a product of (1 - t^{w_j}) factors."""

    ring: GradedPolyRing
    fn: RatFn

    def dimensions(self, up_to: int):
        return [c for c in self.fn.series_coeffs(up_to)]

    def clearing_exponents(self):
        """Per-weight pole orders against each (1 - t^w) factor."""
        out = {}
        for w in sorted(set(self.ring.weights)):
            q = Poly([1] + [0] * (w - 1) + [-1])
            n, _m, _R = pole_clear(self.fn, q)
            out[w] = n
        return out


def hilbert_from_betti(ring: GradedPolyRing, betti: BettiTable) -> HilbertSeries:
    """Alternating sum over the resolution: the module's Hilbert series is
    sum_i (-1)^i sum_{g in row i} t^{w_g} / prod_j (1 - t^{w_j})."""
    num = Poly()
    for i, row in enumerate(betti.rows):
        sign = -1 if i % 2 else 1
        for w in row:
            if w < 0:
                raise GradedModuleError("negative generator weight")
            num = num + Poly.monomial(w, sign)
    return HilbertSeries(ring, RatFn(num, ring.denominator()))


def koszul_resolution(ring: GradedPolyRing, seq) -> BettiTable:
    """Koszul Betti table of a monomial regular sequence.

    A monomial sequence is regular iff the supports are pairwise disjoint;
    the resolution is then the exterior algebra on the sequence, row p
    carrying the weights of the p-fold products.
    """
    monos = [ring.parse_monomial(m) if isinstance(m, str) else tuple(m) for m in seq]
    for m in monos:
        if all(e == 0 for e in m):
            raise GradedModuleError("constant monomial is not a regular element")
    names = ring.names()
    for (i, a), (j, b) in combinations(enumerate(monos), 2):
        shared = [names[k] for k in range(len(names)) if a[k] and b[k]]
        if shared:
            raise GradedModuleError(
                f"monomials {i} and {j} share support on {', '.join(shared)}: "
                "not a regular sequence")
    weights = [ring.monomial_weight(m) for m in monos]
    rows = []
    for p in range(len(monos) + 1):
        rows.append(tuple(sorted(sum(sub) for sub in combinations(weights, p))))
    return BettiTable(tuple(rows))


def hilbert_brute_force(ring: GradedPolyRing, ideal_gens, up_to: int):
    """Dimensions of the weight-graded pieces of ring/(monomial ideal), by
    direct enumeration of monomials up to the given weight."""
    gens = [ring.parse_monomial(m) if isinstance(m, str) else tuple(m)
            for m in ideal_gens]
    dims = [0] * (up_to + 1)
    weights = ring.weights

    def divisible(e):
        return any(all(e[k] >= g[k] for k in range(len(e))) for g in gens)

    def walk(idx, expts, weight):
        if idx == len(weights):
            if not divisible(tuple(expts)):
                dims[weight] += 1
            return
        w = weights[idx]
        e = 0
        while weight + e * w <= up_to:
            expts.append(e)
            walk(idx + 1, expts, weight + e * w)
            expts.pop()
            e += 1

    walk(0, [], 0)
    return [Fraction(d) for d in dims]
