"""Input documents: one self-describing TOML format shared by all commands.

A document declares a space (ring), bundles (root lists), sections, a graded
block (weights plus Betti/Koszul data), a trajectory block (zeros, monoid,
records, tables, genus-1 totals), and options.  Unknown keys are rejected
with their path; expression literals are parsed with column diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .exactnum import RatFn, format_rational
from .expr import ExprError, parse_ratfn, parse_root
from .cohring import CohRing, SplitBundle, ring_pn, ring_product
from .eulereng import SectionData
from .gradedmod import BettiTable, GradedPolyRing
from .trajcalc import (CurveClassMonoid, LocalizedZeroRecord, TrajDataset,
                       ZeroSet)


class DocumentError(ValueError):
    """Invalid input document; message carries the key path."""


def _require_keys(table: dict, allowed, path: str):
    unknown = sorted(set(table) - set(allowed))
    if unknown:
        raise DocumentError(f"unknown key(s) {', '.join(unknown)} in [{path}]")


def _get(table, key, typ, path, default=None, required=False):
    if key not in table:
        if required:
            raise DocumentError(f"missing key {key!r} in [{path}]")
        return default
    value = table[key]
    if typ is not None and not isinstance(value, typ):
        raise DocumentError(
            f"key {path}.{key} has wrong type {type(value).__name__}")
    return value


def _parse_ratfn(value, path) -> RatFn:
    if isinstance(value, bool):
        raise DocumentError(f"{path}: expected a rational-function literal")
    if isinstance(value, int):
        return RatFn.const(value)
    if isinstance(value, str):
        try:
            return parse_ratfn(value)
        except ExprError as exc:
            raise DocumentError(f"{path}: {exc}") from None
    raise DocumentError(f"{path}: expected a rational-function literal")


@dataclass
class InputDocument:
    """Validated document: the normalized raw tree plus built domain objects."""

    tree: dict
    ring: "CohRing | None" = None
    space_dim: int = 0
    bundles: dict = field(default_factory=dict)        # name -> SplitBundle
    sections: dict = field(default_factory=dict)       # name -> (bundle name, SectionData)
    graded_ring: "GradedPolyRing | None" = None
    betti: "BettiTable | None" = None
    koszul_seq: "list | None" = None
    check_weight: "int | None" = None
    trajectory: "TrajDataset | None" = None
    records: list = field(default_factory=list)
    record_betas: list = field(default_factory=list)
    relation: "tuple | None" = None
    truncation: int = 6
    eval_at: "Fraction | None" = None

    def __eq__(self, other):
        if not isinstance(other, InputDocument):
            return NotImplemented
        return self.tree == other.tree


_TOP_KEYS = ("space", "bundles", "sections", "graded", "trajectory", "options")


def parse_document(text: str) -> InputDocument:
    try:
        tree = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise DocumentError(f"syntax error: {exc}") from None
    _require_keys(tree, _TOP_KEYS, "document root")
    doc = InputDocument(tree=_normalize(tree))

    if "space" in tree:
        doc.ring, doc.space_dim = _parse_space(tree["space"])
    if "bundles" in tree:
        if doc.ring is None:
            raise DocumentError("bundles need a [space] section")
        doc.bundles = _parse_bundles(tree["bundles"], doc.ring)
    if "sections" in tree:
        doc.sections = _parse_sections(tree["sections"], doc.bundles)
    if "graded" in tree:
        _parse_graded(tree["graded"], doc)
    if "trajectory" in tree:
        _parse_trajectory(tree["trajectory"], doc)
    if "options" in tree:
        opts = tree["options"]
        _require_keys(opts, ("truncation", "at"), "options")
        doc.truncation = _get(opts, "truncation", int, "options", default=6)
        if "at" in opts:
            at = opts["at"]
            doc.eval_at = Fraction(at) if isinstance(at, int) else Fraction(str(at))
    return doc


def _parse_space(table):
    _require_keys(table, ("kind", "n", "factors"), "space")
    kind = _get(table, "kind", str, "space", required=True)
    if kind == "projective":
        n = _get(table, "n", int, "space", required=True)
        return ring_pn(n), n
    if kind == "product":
        factors = _get(table, "factors", list, "space", required=True)
        if not factors or not all(isinstance(f, int) and f >= 1 for f in factors):
            raise DocumentError("space.factors must be positive integers")
        ring = ring_pn(factors[0])
        for f in factors[1:]:
            ring = ring_product(ring, ring_pn(f))
        return ring, sum(factors)
    raise DocumentError(f"unknown space kind {kind!r}")


def _roots_from_list(items, ring, path):
    roots = []
    for item in items:
        if not isinstance(item, str):
            raise DocumentError(f"{path}: roots must be expression strings")
        try:
            roots.append(parse_root(item, ring))
        except ExprError as exc:
            raise DocumentError(f"{path}: {exc}") from None
    return roots


def _parse_bundles(table, ring):
    bundles = {}
    for name, value in table.items():
        path = f"bundles.{name}"
        if isinstance(value, list):
            bundles[name] = SplitBundle(ring, _roots_from_list(value, ring, path))
        elif isinstance(value, dict):
            _require_keys(value, ("roots", "negative"), path)
            pos = _roots_from_list(_get(value, "roots", list, path, default=[]), ring, path)
            neg = _roots_from_list(_get(value, "negative", list, path, default=[]), ring, path)
            bundles[name] = SplitBundle(ring, pos, neg)
        else:
            raise DocumentError(f"{path}: expected a root list or a table")
    return bundles


def _parse_sections(table, bundles):
    sections = {}
    for name, value in table.items():
        path = f"sections.{name}"
        if not isinstance(value, dict):
            raise DocumentError(f"{path}: expected a table")
        _require_keys(value, ("kind", "bundle", "zeros"), path)
        kind = _get(value, "kind", str, path, required=True)
        bundle = _get(value, "bundle", str, path, required=True)
        if bundle not in bundles:
            raise DocumentError(f"{path}: unknown bundle {bundle!r}")
        if kind == "zero":
            sections[name] = (bundle, SectionData.zero_section())
        elif kind == "simple":
            zeros = []
            for i, z in enumerate(_get(value, "zeros", list, path, required=True)):
                zpath = f"{path}.zeros[{i}]"
                if isinstance(z, str):
                    zeros.append((z, 1, RatFn.const(1)))
                elif isinstance(z, dict):
                    _require_keys(z, ("label", "mult", "factor"), zpath)
                    label = _get(z, "label", str, zpath, required=True)
                    mult = _get(z, "mult", int, zpath, default=1)
                    factor = _parse_ratfn(z.get("factor", 1), zpath)
                    zeros.append((label, mult, factor))
                else:
                    raise DocumentError(f"{zpath}: expected a label or table")
            sections[name] = (bundle, SectionData.simple(zeros))
        else:
            raise DocumentError(f"{path}: unknown section kind {kind!r}")
    return sections


def _parse_graded(table, doc):
    _require_keys(table, ("weights", "names", "koszul", "betti", "check_weight"),
                  "graded")
    weights = _get(table, "weights", list, "graded", required=True)
    if not all(isinstance(w, int) and w >= 1 for w in weights):
        raise DocumentError("graded.weights must be positive integers")
    names = _get(table, "names", list, "graded",
                 default=[f"x{i + 1}" for i in range(len(weights))])
    if len(names) != len(weights):
        raise DocumentError("graded.names must match graded.weights in length")
    doc.graded_ring = GradedPolyRing(tuple(zip(names, weights)))
    if "betti" in table:
        rows = _get(table, "betti", list, "graded")
        if not all(isinstance(r, list) for r in rows):
            raise DocumentError("graded.betti must be a list of weight lists")
        doc.betti = BettiTable.from_lists(rows)
    if "koszul" in table:
        doc.koszul_seq = [str(m) for m in _get(table, "koszul", list, "graded")]
    doc.check_weight = _get(table, "check_weight", int, "graded")


def _parse_beta(value, rank, path):
    if not isinstance(value, list) or len(value) != rank or \
            not all(isinstance(b, int) and b >= 0 for b in value):
        raise DocumentError(f"{path}: beta must be {rank} nonnegative integers")
    return tuple(value)


def _parse_matrix(value, n, path):
    if not isinstance(value, list) or len(value) != n or \
            any(not isinstance(r, list) or len(r) != n for r in value):
        raise DocumentError(f"{path}: expected a {n}x{n} matrix")
    return [[_parse_ratfn(x, path) for x in row] for row in value]


def _parse_trajectory(table, doc):
    _require_keys(table, ("zeros", "rank", "weights", "records", "d", "e", "f",
                          "dinf", "N", "relation"), "trajectory")
    zeros = ZeroSet(tuple(_get(table, "zeros", list, "trajectory", required=True)))
    rank = _get(table, "rank", int, "trajectory", required=True)
    weights = _get(table, "weights", list, "trajectory", default=[1] * rank)
    monoid = CurveClassMonoid(rank, tuple(weights))
    n = len(zeros)

    records = []
    for i, rec in enumerate(_get(table, "records", list, "trajectory", default=[])):
        path = f"trajectory.records[{i}]"
        if not isinstance(rec, dict):
            raise DocumentError(f"{path}: expected a table")
        _require_keys(rec, ("source", "target", "beta", "mult"), path)
        source = _get(rec, "source", str, path, required=True)
        target = _get(rec, "target", str, path, required=True)
        zeros.index(source), zeros.index(target)
        beta = _parse_beta(_get(rec, "beta", list, path, required=True), rank, path)
        mult = _parse_ratfn(rec.get("mult", 1), path)
        records.append(LocalizedZeroRecord(source, target, beta, mult))
    doc.records = records
    doc.record_betas = sorted({r.beta for r in records})

    def load_tables(key, loader):
        out = {}
        for i, item in enumerate(table.get(key, [])):
            path = f"trajectory.{key}[{i}]"
            if not isinstance(item, dict):
                raise DocumentError(f"{path}: expected a table")
            beta = _parse_beta(_get(item, "beta", list, path, required=True),
                               rank, path)
            out[beta] = loader(item, path)
        return out

    def load_matrix(item, path):
        _require_keys(item, ("beta", "matrix"), path)
        return _parse_matrix(_get(item, "matrix", list, path, required=True), n, path)

    def load_vector(item, path):
        _require_keys(item, ("beta", "vector"), path)
        vec = _get(item, "vector", list, path, required=True)
        if len(vec) != n:
            raise DocumentError(f"{path}: expected a length-{n} vector")
        return [_parse_ratfn(x, path) for x in vec]

    def load_tensor(item, path):
        _require_keys(item, ("beta", "tensor"), path)
        t3 = _get(item, "tensor", list, path, required=True)
        if len(t3) != n or any(not isinstance(p, list) or len(p) != n for p in t3):
            raise DocumentError(f"{path}: expected an {n}x{n}x{n} tensor")
        return [_parse_matrix(p, n, f"{path}") for p in t3]

    def load_scalar(item, path):
        _require_keys(item, ("beta", "value"), path)
        return _parse_ratfn(_get(item, "value", None, path, required=True), path)

    d = load_tables("d", load_matrix)
    e = load_tables("e", load_vector)
    f = load_tables("f", load_tensor)
    dinf = load_tables("dinf", load_matrix)
    N = load_tables("N", load_scalar)
    doc.trajectory = TrajDataset(zeros, monoid, d, e, f, dinf, N)
    if "relation" in table:
        rel = table["relation"]
        if not isinstance(rel, list) or len(rel) != 3 or \
                not all(isinstance(c, int) for c in rel):
            raise DocumentError("trajectory.relation must be three integers"
                                " [c0, c1, c2]")
        doc.relation = tuple(rel)


# -- canonical serialization ------------------------------------------------

def _normalize(value):
    if isinstance(value, dict):
        return {k: _normalize(v) for k, v in sorted(value.items())}
    if isinstance(value, list):
        return [_normalize(v) for v in value]
    return value


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, list):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    if isinstance(value, dict):
        inner = ", ".join(f"{k} = {_toml_value(v)}" for k, v in sorted(value.items()))
        return "{" + inner + "}"
    raise DocumentError(f"unserializable value {value!r}")


def serialize_document(doc: InputDocument) -> str:
    """Canonical text form; reparsing yields an equal document."""
    lines = []

    def emit_table(table, path):
        scalars = {k: v for k, v in table.items()
                   if not isinstance(v, dict)
                   and not (isinstance(v, list) and v and isinstance(v[0], dict))}
        subtables = {k: v for k, v in table.items() if isinstance(v, dict)}
        arrays = {k: v for k, v in table.items()
                  if isinstance(v, list) and v and isinstance(v[0], dict)}
        if path and (scalars or not (subtables or arrays)):
            lines.append(f"[{path}]")
        for k in sorted(scalars):
            lines.append(f"{k} = {_toml_value(scalars[k])}")
        if scalars:
            lines.append("")
        for k in sorted(subtables):
            emit_table(subtables[k], f"{path}.{k}" if path else k)
        for k in sorted(arrays):
            for item in arrays[k]:
                lines.append(f"[[{path}.{k}]]" if path else f"[[{k}]]")
                for kk in sorted(item):
                    lines.append(f"{kk} = {_toml_value(item[kk])}")
                lines.append("")

    emit_table(doc.tree, "")
    return "\n".join(lines).rstrip() + "\n"
