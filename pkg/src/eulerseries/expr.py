"""Small expression grammar shared by rational-function literals and
Chern-root expressions: integers, rationals p/q, +, -, *, /, ^, parentheses,
and named atoms resolved through a caller-supplied environment.

Errors carry the offending position for CLI diagnostics.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .exactnum import RatFn


class ExprError(ValueError):
    def __init__(self, message: str, pos: int, text: str):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} (column {pos + 1} in {text!r})")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^]))")


def tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ExprError(f"unexpected character {stripped[0]!r}",
                            len(text) - len(stripped), text)
        num, name, op = m.groups()
        start = m.end() - len(num or name or op)
        if num is not None:
            tokens.append(("int", int(num), start))
        elif name is not None:
            tokens.append(("name", name, start))
        else:
            tokens.append(("op", op, start))
        pos = m.end()
    return tokens


class Parser:
    """Precedence-climbing parser over a value algebra.

    ``env(name)`` returns the value of a named atom (raising KeyError for
    unknown names); integers are passed through ``lift``.
    """

    def __init__(self, text: str, env, lift):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.env = env
        self.lift = lift

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        value = self.parse_sum()
        kind, val, pos = self.peek()
        if kind is not None:
            raise ExprError(f"unexpected trailing {val!r}", pos, self.text)
        return value

    def parse_sum(self):
        value = self.parse_term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.parse_term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def parse_term(self):
        value = self.parse_factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.parse_factor()
                if val == "*":
                    value = value * rhs
                else:
                    try:
                        value = value / rhs
                    except (ZeroDivisionError, ArithmeticError) as exc:
                        raise ExprError(str(exc), pos, self.text) from None
            else:
                return value

    def parse_factor(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return -self.parse_factor()
        if kind == "op" and val == "+":
            self.next()
            return self.parse_factor()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            ekind, exp, epos = self.next()
            neg = False
            if ekind == "op" and exp == "-":
                neg = True
                ekind, exp, epos = self.next()
            if ekind != "int":
                raise ExprError("exponent must be an integer", epos, self.text)
            return base ** (-exp if neg else exp)
        return base

    def parse_atom(self):
        kind, val, pos = self.next()
        if kind == "int":
            return self.lift(val)
        if kind == "name":
            try:
                return self.env(val)
            except KeyError:
                raise ExprError(f"unknown name {val!r}", pos, self.text) from None
        if kind == "op" and val == "(":
            value = self.parse_sum()
            kind, val, pos = self.next()
            if not (kind == "op" and val == ")"):
                raise ExprError("expected ')'", pos, self.text)
            return value
        raise ExprError("expected a value", pos, self.text)


def parse_ratfn(text: str) -> RatFn:
    """Parse a rational-function literal in t, e.g. "1/(1-t^2)" or "3/4"."""
    def env(name):
        if name == "t":
            return RatFn.t()
        raise KeyError(name)
    value = Parser(str(text), env, lambda n: RatFn.const(n)).parse()
    if isinstance(value, Fraction):
        value = RatFn.const(value)
    return value


def parse_root(text: str, ring):
    """Parse a linear-combination root expression over the ring generators,
    e.g. "2*h" or "h1 + h2" or "3/4*h"."""
    def env(name):
        return ring.gen(name)  # raises CohRingError for unknown names
    from .cohring import CohRingError
    try:
        value = Parser(str(text), env, lambda n: Fraction(n)).parse()
    except CohRingError as exc:
        raise ExprError(str(exc), 0, str(text)) from None
    if isinstance(value, (int, Fraction)):
        if value == 0:
            return ring.zero()
        raise ExprError("root must be a degree-2 class, got a constant", 0, str(text))
    if not value.is_homogeneous(2):
        raise ExprError("root expression is not homogeneous of degree 2", 0, str(text))
    return value
