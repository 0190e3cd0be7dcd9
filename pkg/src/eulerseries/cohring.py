"""Finite graded-commutative cohomology rings with nilpotent generators,
and Chern-root calculus for split bundles.

A ring is presented by generators of even degree with nilpotency orders; the
monomial basis is everything below the orders, with products above the top
degree truncated to zero.  Bundles are multisets of degree-2 roots (plus a
multiset of negative roots for virtual classes); every characteristic class
in the package is a symmetric expression in the roots.
"""

from __future__ import annotations

from fractions import Fraction

from .exactnum import Poly, RatFn, format_rational


class CohRingError(ValueError):
    pass


class CohRing:
    """Graded-commutative ring Q[g_1..g_k]/(g_i^{n_i}, deg > top).

    generators: list of (name, even degree, nilpotency order).  The
    fundamental-class monomial is the top product of all generators at their
    maximal powers; integrate() reads off its coefficient.
    """

    __slots__ = ("generators", "top_degree", "basis", "fundamental")

    def __init__(self, generators, top_degree=None):
        gens = []
        for name, degree, order in generators:
            if degree <= 0 or degree % 2 != 0:
                raise CohRingError(f"generator {name} must have even positive degree")
            if order < 1:
                raise CohRingError(f"generator {name} needs nilpotency order >= 1")
            gens.append((str(name), int(degree), int(order)))
        names = [g[0] for g in gens]
        if len(set(names)) != len(names):
            raise CohRingError("duplicate generator names")
        object.__setattr__(self, "generators", tuple(gens))
        full_top = sum((o - 1) * d for _, d, o in gens)
        if top_degree is None:
            top_degree = full_top
        object.__setattr__(self, "top_degree", int(top_degree))
        basis = [e for e in self._exponent_tuples()
                 if self.monomial_degree(e) <= self.top_degree]
        basis.sort(key=lambda e: (self.monomial_degree(e), tuple(-x for x in e)))
        object.__setattr__(self, "basis", tuple(basis))
        fund = tuple(o - 1 for _, _, o in gens)
        object.__setattr__(self, "fundamental",
                           fund if self.monomial_degree(fund) <= self.top_degree else None)

    def __setattr__(self, *a):
        raise AttributeError("CohRing is immutable")

    def _exponent_tuples(self):
        if not self.generators:
            return [()]
        ranges = [range(o) for _, _, o in self.generators]
        out = [()]
        for r in ranges:
            out = [e + (i,) for e in out for i in r]
        return out

    def monomial_degree(self, expts) -> int:
        return sum(e * d for e, (_, d, _) in zip(expts, self.generators))

    def names(self):
        return [g[0] for g in self.generators]

    def mul_monomials(self, e1, e2):
        """Product of basis monomials; None when it reduces to zero."""
        e = tuple(a + b for a, b in zip(e1, e2))
        for x, (_, _, order) in zip(e, self.generators):
            if x >= order:
                return None
        if self.monomial_degree(e) > self.top_degree:
            return None
        return e

    def monomial_name(self, expts) -> str:
        parts = []
        for e, (name, _, _) in zip(expts, self.generators):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def __eq__(self, other):
        if not isinstance(other, CohRing):
            return NotImplemented
        return self.generators == other.generators and self.top_degree == other.top_degree

    def __hash__(self):
        return hash((self.generators, self.top_degree))

    def __repr__(self):
        gens = ", ".join(f"{n}(deg {d}, {n}^{o}=0)" for n, d, o in self.generators)
        return f"CohRing[{gens}]"

    # -- elements ----------------------------------------------------------

    def zero(self) -> "CohClass":
        return CohClass(self, {})

    def one(self) -> "CohClass":
        return CohClass(self, {(0,) * len(self.generators): Fraction(1)})

    def gen(self, name: str) -> "CohClass":
        names = self.names()
        if name not in names:
            raise CohRingError(f"unknown generator {name!r}")
        e = tuple(1 if n == name else 0 for n in names)
        return CohClass(self, {e: Fraction(1)})

    def fundamental_class(self) -> "CohClass":
        if self.fundamental is None:
            raise CohRingError("ring has no fundamental monomial")
        return CohClass(self, {self.fundamental: Fraction(1)})


def ring_pn(n: int) -> CohRing:
    """Cohomology of projective n-space: one generator h with h^{n+1} = 0."""
    if n < 1:
        raise CohRingError("projective space needs n >= 1")
    return CohRing([("h", 2, n + 1)])


def ring_product(r1: CohRing, r2: CohRing) -> CohRing:
    """Tensor product ring; colliding generator names get numeric suffixes."""
    gens = list(r1.generators) + list(r2.generators)
    names = [g[0] for g in gens]
    if len(set(names)) != len(names):
        renamed, seen = [], {}
        counts = {}
        for n, _, _ in gens:
            counts[n] = counts.get(n, 0) + 1
        for n, d, o in gens:
            if counts[n] > 1:
                seen[n] = seen.get(n, 0) + 1
                renamed.append((f"{n}{seen[n]}", d, o))
            else:
                renamed.append((n, d, o))
        gens = renamed
    return CohRing(gens, top_degree=r1.top_degree + r2.top_degree)


class CohClass:
    """Element of a CohRing: coefficient vector over the monomial basis.

    Coefficients are Fraction for ordinary classes, or RatFn for classes with
    rational-function-in-t coefficients; the two mix freely.
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CohRing, coeffs):
        clean = {}
        for e, c in coeffs.items():
            if isinstance(c, int):
                c = Fraction(c)
            if isinstance(c, RatFn) and c.is_zero():
                continue
            if isinstance(c, Fraction) and c == 0:
                continue
            clean[tuple(e)] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *a):
        raise AttributeError("CohClass is immutable")

    def _coerce(self, other):
        if isinstance(other, CohClass):
            if other.ring != self.ring:
                raise CohRingError("classes live in different rings")
            return other
        if isinstance(other, (int, Fraction, RatFn, Poly)):
            if isinstance(other, Poly):
                other = RatFn(other)
            unit = (0,) * len(self.ring.generators)
            return CohClass(self.ring, {unit: other})
        return None

    def __getitem__(self, e):
        return self.coeffs.get(tuple(e), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(RatFn.const(0) + self[k] == RatFn.const(0) + other[k] for k in keys)

    def __hash__(self):
        return hash((self.ring, tuple(sorted((e, RatFn.const(0) + c)
                                             for e, c in self.coeffs.items()))))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return CohClass(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return CohClass(self.ring, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = self.ring.mul_monomials(e1, e2)
                if e is None:
                    continue
                out[e] = out.get(e, 0) + c1 * c2
        return CohClass(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, RatFn):
            return self * other.inverse()
        if isinstance(other, CohClass):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def constant_term(self):
        return self[(0,) * len(self.ring.generators)]

    def positive_part(self) -> "CohClass":
        unit = (0,) * len(self.ring.generators)
        return CohClass(self.ring, {e: c for e, c in self.coeffs.items() if e != unit})

    def degree_component(self, k: int) -> "CohClass":
        return CohClass(self.ring, {e: c for e, c in self.coeffs.items()
                                    if self.ring.monomial_degree(e) == k})

    def is_homogeneous(self, k: int) -> bool:
        return all(self.ring.monomial_degree(e) == k for e in self.coeffs)

    def inverse(self) -> "CohClass":
        """Inverse of a class with invertible (nonzero) constant term."""
        c0 = RatFn.const(0) + self.constant_term()
        if c0.is_zero():
            raise CohRingError("class with zero constant term is not invertible")
        u = self * c0.inverse() - 1
        # u is nilpotent: geometric series terminates at the basis depth
        result = self.ring.one()
        term = self.ring.one()
        for _ in range(len(self.ring.basis)):
            term = -term * u
            if term.is_zero():
                break
            result = result + term
        return result * c0.inverse()

    def eval_t(self, a) -> "CohClass":
        """Evaluate all RatFn coefficients at t = a (plain evaluation)."""
        out = {}
        for e, c in self.coeffs.items():
            out[e] = c(a) if isinstance(c, RatFn) else c
        return CohClass(self.ring, out)

    def map_coeffs(self, fn) -> "CohClass":
        return CohClass(self.ring, {e: fn(c) for e, c in self.coeffs.items()})

    def integrate(self):
        """Coefficient of the fundamental monomial (pushforward to a point)."""
        if self.ring.fundamental is None:
            raise CohRingError("ring has no fundamental monomial")
        return self[self.ring.fundamental]

    def to_obj(self):
        out = []
        for e in self.ring.basis:
            c = self.coeffs.get(e)
            if c is None:
                continue
            c = RatFn.const(0) + c
            out.append({"monomial": self.ring.monomial_name(e), "coeff": c.to_obj()})
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in self.ring.basis:
            c = self.coeffs.get(e)
            if c is None:
                continue
            mono = self.ring.monomial_name(e)
            if isinstance(c, Fraction):
                cs = format_rational(c)
            else:
                cs = str(c)
            if mono == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"CohClass({self})"


def exp_class(x: CohClass) -> CohClass:
    """exp of a nilpotent class by finite expansion."""
    result = x.ring.one()
    term = x.ring.one()
    k = 0
    while True:
        k += 1
        term = term * x * Fraction(1, k)
        if term.is_zero():
            break
        result = result + term
    return result


class SplitBundle:
    """Virtual bundle given by multisets of degree-2 Chern roots.

    positive roots are honest line-bundle summands; negative roots subtract
    (two-term complexes enter as E0 - E1).  rank = #positive - #negative.
    """

    __slots__ = ("ring", "positive", "negative")

    def __init__(self, ring: CohRing, positive, negative=()):
        pos, neg = [], []
        for bucket, roots in ((pos, positive), (neg, negative)):
            for r in roots:
                if not isinstance(r, CohClass):
                    raise CohRingError("roots must be CohClass elements")
                if r.ring != ring:
                    raise CohRingError("root lives in the wrong ring")
                if not r.is_homogeneous(2):
                    raise CohRingError(f"root {r} is not homogeneous of degree 2")
                bucket.append(r)
        key = lambda c: sorted(c.coeffs.items())
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "positive", tuple(sorted(pos, key=key)))
        object.__setattr__(self, "negative", tuple(sorted(neg, key=key)))

    def __setattr__(self, *a):
        raise AttributeError("SplitBundle is immutable")

    @property
    def rank(self) -> int:
        return len(self.positive) - len(self.negative)

    def is_effective(self) -> bool:
        return not self.negative

    def dual(self) -> "SplitBundle":
        return SplitBundle(self.ring, [-r for r in self.positive],
                           [-r for r in self.negative])

    def direct_sum(self, other: "SplitBundle") -> "SplitBundle":
        if other.ring != self.ring:
            raise CohRingError("bundles live in different rings")
        return SplitBundle(self.ring, self.positive + other.positive,
                           self.negative + other.negative)

    def tensor(self, other: "SplitBundle") -> "SplitBundle":
        """Tensor product on roots: pairwise sums, signs multiplying."""
        if other.ring != self.ring:
            raise CohRingError("bundles live in different rings")
        pos = [a + b for a in self.positive for b in other.positive]
        pos += [a + b for a in self.negative for b in other.negative]
        neg = [a + b for a in self.positive for b in other.negative]
        neg += [a + b for a in self.negative for b in other.positive]
        return SplitBundle(self.ring, pos, neg)

    def __eq__(self, other):
        if not isinstance(other, SplitBundle):
            return NotImplemented
        return (self.ring, self.positive, self.negative) == \
            (other.ring, other.positive, other.negative)

    def __repr__(self):
        pos = ", ".join(str(r) for r in self.positive)
        neg = ", ".join(str(r) for r in self.negative)
        return f"SplitBundle(+[{pos}] -[{neg}])" if neg else f"SplitBundle([{pos}])"


def _require_effective(E: SplitBundle, what: str):
    if not E.is_effective():
        raise CohRingError(f"{what} requires an effective bundle")


def ch(E: SplitBundle) -> CohClass:
    """Chern character: sum of exp(root) with signs."""
    out = E.ring.zero()
    for r in E.positive:
        out = out + exp_class(r)
    for r in E.negative:
        out = out - exp_class(r)
    return out


def _todd_factor(x: CohClass) -> CohClass:
    # x/(1 - e^{-x}) = g(x)^{-1} with g = sum_k (-x)^k/(k+1)!
    g = x.ring.one()
    term = x.ring.one()
    k = 0
    fact = 1
    while True:
        k += 1
        fact *= k + 1
        term = term * (-x)
        if term.is_zero():
            break
        g = g + term * Fraction(1, fact)
    return g.inverse()


def todd(E: SplitBundle) -> CohClass:
    """Todd class: product of x/(1-e^{-x}) over positive roots, divided by
    the same factors for negative roots."""
    out = E.ring.one()
    for r in E.positive:
        out = out * _todd_factor(r)
    for r in E.negative:
        out = out * _todd_factor(r).inverse()
    return out


def ctop(E: SplitBundle) -> CohClass:
    """Top Chern class: the product of the roots (effective bundles only)."""
    _require_effective(E, "top Chern class")
    out = E.ring.one()
    for r in E.positive:
        out = out * r
    return out


def total_chern(E: SplitBundle) -> CohClass:
    _require_effective(E, "total Chern class")
    out = E.ring.one()
    for r in E.positive:
        out = out * (r + 1)
    return out


def lambda_t(E: SplitBundle) -> CohClass:
    """sum_i ch(Lambda^i E) t^i = prod over roots of (1 + e^x t), as a class
    with polynomial-in-t coefficients."""
    _require_effective(E, "lambda operation")
    out = E.ring.one()
    t = RatFn.t()
    for r in E.positive:
        out = out * (exp_class(r) * t + 1)
    return out


def lambda_minus_one_dual(E: SplitBundle) -> CohClass:
    """ch of the alternating sum of exterior powers of the dual bundle."""
    return lambda_t(E.dual()).eval_t(-1)


def sym_series(E: SplitBundle, w: int = 2) -> CohClass:
    """Symmetric-power generating class prod over roots of 1/(1 - e^x t^w).

    Coefficients are rational functions with denominator a power of 1 - t^w.
    """
    _require_effective(E, "symmetric-power series")
    if w < 1:
        raise CohRingError("t-weight must be positive")
    tw = RatFn(Poly.monomial(w))
    out = E.ring.one()
    for r in E.positive:
        out = out * (E.ring.one() - exp_class(r) * tw).inverse()
    return out


def det_class(E: SplitBundle) -> SplitBundle:
    """Determinant line bundle: single root = sum of roots with signs."""
    root = E.ring.zero()
    for r in E.positive:
        root = root + r
    for r in E.negative:
        root = root - r
    return SplitBundle(E.ring, [root])


def integrate(c: CohClass):
    """Pushforward to the point: coefficient of the fundamental monomial."""
    return c.integrate()


def tau_structure_sheaf(tangent: SplitBundle) -> CohClass:
    """Homological class of the structure sheaf on a smooth space:
    ch(O) * Td(T) cap [X], i.e. just the Todd class of the tangent bundle."""
    return todd(tangent)
