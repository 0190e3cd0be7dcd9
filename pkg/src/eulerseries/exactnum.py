"""Exact arithmetic tower: rationals, polynomials in t, rational functions,
and truncated series indexed by a weighted commutative monoid.

Everything here is exact; there is no floating point anywhere in the package.
Rationals are ``fractions.Fraction`` (aliased ``Rational``), polynomials are
dense tuples of rationals, and rational functions are kept in a canonical
reduced form (monic denominator, gcd one) so that equality is structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product as iter_product

Rational = Fraction

_F0 = Fraction(0)

#: Sentinel returned by ``valuation`` on the zero function.
INFINITE_VALUATION = math.inf


class ExactArithmeticError(ArithmeticError):
    """Raised for undefined field operations (division by zero, etc.)."""


def format_rational(q: Fraction) -> str:
    """Render a rational as ``p/q``, or just ``p`` when the denominator is 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


# ---------------------------------------------------------------------------
# Polynomials in t
# ---------------------------------------------------------------------------

class Poly:
    """Dense univariate polynomial in t with rational coefficients.

    Immutable; the coefficient tuple is trimmed so the leading coefficient is
    nonzero (the zero polynomial has an empty tuple).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    @staticmethod
    def _mk(cs) -> "Poly":
        """Internal: build from a list of Fractions without re-wrapping."""
        while cs and cs[-1] == 0:
            cs.pop()
        out = object.__new__(Poly)
        object.__setattr__(out, "coeffs", tuple(cs))
        return out

    @staticmethod
    def const(c) -> "Poly":
        return Poly([Fraction(c)])

    @staticmethod
    def monomial(exp: int, c=1) -> "Poly":
        if exp < 0:
            raise ValueError("monomial exponent must be >= 0")
        return Poly([0] * exp + [c])

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._mk(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._mk([-c for c in self.coeffs])

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
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [_F0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return Poly._mk(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a Poly")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Poly"):
        """Exact polynomial long division: returns (quotient, remainder)."""
        if other.is_zero():
            raise ExactArithmeticError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [_F0] * (dq + 1)
        lead = other.leading()
        ob = other.coeffs
        for i in range(dq, -1, -1):
            c = rem[len(ob) - 1 + i] / lead
            quot[i] = c
            if c != 0:
                for j, b in enumerate(ob):
                    if b != 0:
                        rem[i + j] -= c * b
        return Poly._mk(quot), Poly._mk(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def divides(self, other: "Poly") -> bool:
        return other.divmod(self)[1].is_zero()

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.leading()
        if lead == 1:
            return self
        return Poly._mk([c / lead for c in self.coeffs])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def __call__(self, a) -> Fraction:
        a = Fraction(a)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def root_order(self, a) -> int:
        """Multiplicity of ``a`` as a root (0 when not a root)."""
        if self.is_zero():
            raise ValueError("root order of the zero polynomial is undefined")
        n = 0
        p = self
        lin = Poly([-Fraction(a), 1])
        while p(a) == 0:
            p = p // lin
            n += 1
        return n

    def shift_down(self, m: int) -> "Poly":
        """Divide by t^m (requires the low m coefficients to vanish)."""
        if any(self[i] != 0 for i in range(m)):
            raise ExactArithmeticError("not divisible by t^%d" % m)
        return Poly(self.coeffs[m:])

    def to_pairs(self):
        """Exponent -> coefficient list, used by machine-readable output."""
        return [[i, format_rational(c)] for i, c in enumerate(self.coeffs) if c != 0]

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                term = format_rational(c)
            else:
                var = "t" if i == 1 else f"t^{i}"
                if c == 1:
                    term = var
                elif c == -1:
                    term = "-" + var
                else:
                    term = f"{format_rational(c)}*{var}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += " - " + term[1:] if term.startswith("-") else " + " + term
        return out

    def __repr__(self):
        return f"Poly({self})"


T_POLY = Poly.monomial(1)
ONE_MINUS_T2 = Poly([1, 0, -1])


# ---------------------------------------------------------------------------
# Rational functions in t
# ---------------------------------------------------------------------------

class RatFn:
    """Rational function num/den in canonical form.

    Canonical means: gcd(num, den) = 1, den monic and nonzero, and num = 0
    implies den = 1.  Equality is therefore structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.const(num)
        if den is None:
            den = Poly.const(1)
        elif not isinstance(den, Poly):
            den = Poly.const(den)
        if den.is_zero():
            raise ExactArithmeticError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly(), Poly.const(1)
        else:
            if den.degree > 0:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num // g, den // g
            lead = den.leading()
            if lead != 1:
                num = Poly._mk([c / lead for c in num.coeffs])
                den = den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def _reduced(num: Poly, den: Poly) -> "RatFn":
        """Fast path for already-coprime num/den (monic normalization only)."""
        out = object.__new__(RatFn)
        if num.is_zero():
            num, den = Poly(), Poly.const(1)
        else:
            lead = den.leading()
            if lead != 1:
                num = Poly._mk([c / lead for c in num.coeffs])
                den = den.monic()
        object.__setattr__(out, "num", num)
        object.__setattr__(out, "den", den)
        return out

    def __setattr__(self, *a):
        raise AttributeError("RatFn is immutable")

    @staticmethod
    def const(c) -> "RatFn":
        return RatFn(Poly.const(c))

    @staticmethod
    def t() -> "RatFn":
        return RatFn(T_POLY)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def _coerce(self, other):
        if isinstance(other, RatFn):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFn.const(other)
        if isinstance(other, Poly):
            return RatFn(other)
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RatFn", self.num.coeffs, self.den.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d1, d2 = self.den, other.den
        if d1.degree == 0 and d2.degree == 0:
            return RatFn._reduced(self.num + other.num, Poly.const(1))
        g = d1.gcd(d2)
        if g.degree == 0:
            return RatFn._reduced(self.num * d2 + other.num * d1, d1 * d2)
        d2r = d2 // g
        num = self.num * d2r + other.num * (d1 // g)
        g2 = num.gcd(g)
        if g2.degree > 0:
            num = num // g2
            g = g // g2
        return RatFn._reduced(num, (d1 // g2) * d2r)

    __radd__ = __add__

    def __neg__(self):
        return RatFn(-self.num, self.den)

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
        if self.is_zero() or other.is_zero():
            return RatFn._reduced(Poly(), Poly.const(1))
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d2.degree > 0:
            g = n1.gcd(d2)
            if g.degree > 0:
                n1, d2 = n1 // g, d2 // g
        if d1.degree > 0:
            g = n2.gcd(d1)
            if g.degree > 0:
                n2, d1 = n2 // g, d1 // g
        return RatFn._reduced(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RatFn":
        if self.is_zero():
            raise ExactArithmeticError("division by the zero rational function")
        return RatFn._reduced(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = RatFn.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, a) -> Fraction:
        """Plain evaluation; raises on a pole."""
        a = Fraction(a)
        d = self.den(a)
        if d == 0:
            raise ExactArithmeticError(f"pole at t = {format_rational(a)}")
        return self.num(a) / d

    def valuation(self, a) -> "int | float":
        """Order of vanishing at a (negative at a pole, +inf for 0)."""
        if self.is_zero():
            return INFINITE_VALUATION
        a = Fraction(a)
        return self.num.root_order(a) - self.den.root_order(a)

    def critical_value(self, a) -> Fraction:
        """First nonzero Laurent coefficient at a; 0 for the zero function.

        Multiplicative but not additive; agrees with plain evaluation when
        the function neither vanishes nor has a pole at a.
        """
        if self.is_zero():
            return Fraction(0)
        a = Fraction(a)
        lin = Poly([-a, 1])
        num, den = self.num, self.den
        while num(a) == 0:
            num = num // lin
        while den(a) == 0:
            den = den // lin
        return num(a) / den(a)

    def series_coeffs(self, up_to: int):
        """Taylor coefficients at t = 0 (requires no pole at 0)."""
        if self.den[0] == 0:
            raise ExactArithmeticError("series expansion at a pole of t = 0")
        out = []
        d0 = self.den[0]
        for k in range(up_to + 1):
            c = self.num[k] - sum(self.den[j] * out[k - j] for j in range(1, k + 1))
            out.append(c / d0)
        return out

    def to_obj(self):
        """Machine-readable form: {num, den} as exponent/coefficient pairs."""
        return {"num": self.num.to_pairs(), "den": self.den.to_pairs()}

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        num, den = self.num, self.den
        # display only: prefer denominators like 1 - t^2 over -1 + t^2
        if den.coeffs and den.coeffs[0] < 0:
            num, den = -num, -den
        ns = str(num)
        if len(num.coeffs) - num.coeffs.count(0) > 1:
            ns = f"({ns})"
        return f"{ns}/({den})"

    def __repr__(self):
        return f"RatFn({self})"


def valuation(P: RatFn, a) -> "int | float":
    return P.valuation(a)


def critical_value(P: RatFn, a) -> Fraction:
    return P.critical_value(a)


class NotClearableError(ExactArithmeticError):
    """Denominator has a factor coprime to the clearing polynomial and t."""

    def __init__(self, factor: Poly):
        self.factor = factor
        super().__init__(f"not clearable: offending denominator factor {factor}")


def pole_clear(P: RatFn, q: Poly = ONE_MINUS_T2):
    """Minimal n, m >= 0 with q^n * t^m * P a polynomial R; returns (n, m, R).

    Fails with :class:`NotClearableError` when the denominator has an
    irreducible factor dividing neither q nor t.
    """
    if P.is_zero():
        return 0, 0, Poly()
    den = P.den
    m = den.root_order(0)
    rest = den // Poly.monomial(m)
    n = 0
    h = rest
    while h.degree > 0:
        g = h.gcd(q)
        if g.degree == 0:
            raise NotClearableError(h)
        h = h // g
        n += 1
    # The gcd loop is minimal for squarefree q; tighten in general by
    # direct divisibility tests.
    while n > 0 and den.divides(q ** (n - 1) * Poly.monomial(m) * P.num):
        n -= 1
    while m > 0 and den.divides(q ** n * Poly.monomial(m - 1) * P.num):
        m -= 1
    quot, rem = (q ** n * Poly.monomial(m) * P.num).divmod(den)
    assert rem.is_zero()
    return n, m, quot


# ---------------------------------------------------------------------------
# Truncated monoid-indexed series
# ---------------------------------------------------------------------------

class MonoidSeries:
    """Truncated formal series over Q(t) indexed by N^r with degree weights.

    A monoid element beta = (a_1..a_r) has degree |beta| = sum a_i w_i; only
    coefficients with |beta| <= bound are stored, absent keys are zero.
    """

    __slots__ = ("rank", "weights", "bound", "coeffs")

    def __init__(self, rank, weights, bound, coeffs=None):
        weights = tuple(int(w) for w in weights)
        if len(weights) != rank:
            raise ValueError("need one weight per monoid generator")
        if any(w < 1 for w in weights):
            raise ValueError("degree weights must be positive")
        object.__setattr__(self, "rank", int(rank))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bound", int(bound))
        clean = {}
        for beta, c in (coeffs or {}).items():
            beta = tuple(int(b) for b in beta)
            if len(beta) != rank or any(b < 0 for b in beta):
                raise ValueError(f"bad monoid element {beta}")
            if self.degree(beta) > bound:
                raise ValueError(f"class {beta} exceeds truncation bound {bound}")
            if not isinstance(c, RatFn):
                c = RatFn.const(c)
            if not c.is_zero():
                clean[beta] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *a):
        raise AttributeError("MonoidSeries is immutable")

    def degree(self, beta) -> int:
        return sum(a * w for a, w in zip(beta, self.weights))

    def _check_compatible(self, other: "MonoidSeries"):
        if (self.rank, self.weights, self.bound) != (other.rank, other.weights, other.bound):
            raise ValueError("incompatible monoid series")

    @staticmethod
    def one(rank, weights, bound) -> "MonoidSeries":
        return MonoidSeries(rank, weights, bound, {(0,) * rank: RatFn.const(1)})

    def __getitem__(self, beta) -> RatFn:
        return self.coeffs.get(tuple(beta), RatFn.const(0))

    def __eq__(self, other):
        if not isinstance(other, MonoidSeries):
            return NotImplemented
        return (self.rank, self.weights, self.bound, self.coeffs) == (
            other.rank, other.weights, other.bound, other.coeffs)

    def __hash__(self):
        return hash((self.rank, self.weights, self.bound,
                     tuple(sorted(self.coeffs.items()))))

    def __add__(self, other):
        self._check_compatible(other)
        out = dict(self.coeffs)
        for beta, c in other.coeffs.items():
            out[beta] = out.get(beta, RatFn.const(0)) + c
        return MonoidSeries(self.rank, self.weights, self.bound, out)

    def __neg__(self):
        return MonoidSeries(self.rank, self.weights, self.bound,
                            {b: -c for b, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFn)):
            return MonoidSeries(self.rank, self.weights, self.bound,
                                {b: c * other for b, c in self.coeffs.items()})
        self._check_compatible(other)
        out = {}
        for b1, c1 in self.coeffs.items():
            for b2, c2 in other.coeffs.items():
                b = tuple(x + y for x, y in zip(b1, b2))
                if self.degree(b) > self.bound:
                    continue
                out[b] = out.get(b, RatFn.const(0)) + c1 * c2
        return MonoidSeries(self.rank, self.weights, self.bound, out)

    __rmul__ = __mul__

    def items_sorted(self):
        return sorted(self.coeffs.items(), key=lambda kv: (self.degree(kv[0]), kv[0]))

    def to_obj(self):
        return [{"class": list(beta), "coeff": c.to_obj()}
                for beta, c in self.items_sorted()]

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for beta, c in self.items_sorted():
            mono = "*".join(f"z{i + 1}^{a}" for i, a in enumerate(beta) if a)
            if not mono:
                terms.append(str(c))
            else:
                terms.append(f"({c})*{mono}")
        return " + ".join(terms)

    def __repr__(self):
        return f"MonoidSeries({self})"


def series_exp(S: MonoidSeries) -> MonoidSeries:
    """Truncated exponential sum_k S^k / k!.

    Requires augmentation zero (no coefficient on the identity element), so
    the sum is finite within the truncation bound.
    """
    zero = (0,) * S.rank
    if zero in S.coeffs:
        raise ValueError("exp requires augmentation-zero input")
    result = MonoidSeries.one(S.rank, S.weights, S.bound)
    term = result
    k = 0
    min_w = min(S.weights) if S.weights else 1
    max_k = S.bound // min_w if S.weights else 0
    while k < max_k:
        k += 1
        term = term * S * Fraction(1, k)
        if not term.coeffs:
            break
        result = result + term
    return result
