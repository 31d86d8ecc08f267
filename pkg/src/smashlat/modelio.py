"""The ``.sml`` text format and Graphviz export.

Grammar, one statement per line::

    model <name>
    element <label>
    le <a> <b>
    smash <a> <b> = <c>

``#`` starts a comment.  Smash entries involving bottom or top may be omitted;
they are filled in by the unit and absorption laws.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .order import build_lattice
from .quantale import Model, build_model

_TOKEN = re.compile(r"\S+")

KEYWORDS = ("model", "element", "le", "smash")


class ParseError(ValueError):
    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        self.message = message
        super().__init__("line %d, column %d: %s" % (line, column, message))


class ModelSyntaxError(ParseError):
    def __init__(self, message, line, column, expected=()):
        self.expected = tuple(expected)
        if expected:
            message += " (expected %s)" % " | ".join(self.expected)
        super().__init__(message, line, column)


class DuplicateElement(ParseError):
    pass


class UndeclaredLabel(ParseError):
    pass


class ConflictingEntry(ParseError):
    pass


@dataclass
class ModelSpec:
    name: str = "unnamed"
    elements: list = field(default_factory=list)
    order: list = field(default_factory=list)
    smash: list = field(default_factory=list)
    # (kind, index) -> (line, column) of the statement keyword
    positions: dict = field(default_factory=dict)


def _tokens(line):
    body = line.split("#", 1)[0]
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]


def parse_model(text: str) -> ModelSpec:
    spec = ModelSpec()
    declared = set()
    entries = {}
    named = False

    def label(tok, lineno):
        word, col = tok
        if word not in declared:
            raise UndeclaredLabel("undeclared label %r" % word, lineno, col)
        return word

    def arity(toks, n, lineno, expected):
        if len(toks) < n:
            end = toks[-1][1] + len(toks[-1][0])
            raise ModelSyntaxError("statement too short", lineno, end, expected)
        if len(toks) > n:
            raise ModelSyntaxError("unexpected token %r" % toks[n][0], lineno, toks[n][1],
                                   ("end of line",))

    for lineno, line in enumerate(text.splitlines(), 1):
        toks = _tokens(line)
        if not toks:
            continue
        head, col = toks[0]
        if head == "model":
            arity(toks, 2, lineno, ("<name>",))
            if named:
                raise ModelSyntaxError("second model statement", lineno, col)
            named = True
            spec.name = toks[1][0]
            spec.positions[("model", 0)] = (lineno, col)
        elif head == "element":
            arity(toks, 2, lineno, ("<label>",))
            word, wcol = toks[1]
            if word in KEYWORDS or word == "=":
                raise ModelSyntaxError("reserved word %r used as a label" % word, lineno, wcol,
                                       ("<label>",))
            if word in declared:
                raise DuplicateElement("element %r declared twice" % word, lineno, wcol)
            declared.add(word)
            spec.positions[("element", len(spec.elements))] = (lineno, col)
            spec.elements.append(word)
        elif head == "le":
            arity(toks, 3, lineno, ("<label>",))
            pair = (label(toks[1], lineno), label(toks[2], lineno))
            spec.positions[("le", len(spec.order))] = (lineno, col)
            spec.order.append(pair)
        elif head == "smash":
            arity(toks, 5, lineno, ("<label> <label> = <label>",))
            if toks[3][0] != "=":
                raise ModelSyntaxError("unexpected token %r" % toks[3][0], lineno, toks[3][1], ("=",))
            a = label(toks[1], lineno)
            b = label(toks[2], lineno)
            c = label(toks[4], lineno)
            key = frozenset((a, b))
            if key in entries:
                if entries[key] != c:
                    raise ConflictingEntry(
                        "smash %s %s already set to %s" % (a, b, entries[key]), lineno, toks[4][1])
                continue
            entries[key] = c
            spec.positions[("smash", len(spec.smash))] = (lineno, col)
            spec.smash.append((a, b, c))
        else:
            raise ModelSyntaxError("unknown statement %r" % head, lineno, col, KEYWORDS)
    return spec


def model_from_spec(spec: ModelSpec, roles=None) -> Model:
    L = build_lattice(spec.elements, spec.order)
    table = {}
    for a, b, c in spec.smash:
        table[L.index(a), L.index(b)] = L.index(c)
    return build_model(L, table, spec.name, roles)


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return model_from_spec(parse_model(fh.read()))


def serialize_spec(spec: ModelSpec) -> str:
    lines = ["model %s" % spec.name]
    lines += ["element %s" % e for e in spec.elements]
    lines += ["le %s %s" % p for p in spec.order]
    lines += ["smash %s %s = %s" % t for t in spec.smash]
    return "\n".join(lines) + "\n"


def spec_of(M: Model) -> ModelSpec:
    """Canonical spec: covers only, bottom/top smash rows elided."""
    L = M.lattice
    n = L.names
    forced = (L.bottom, L.top)
    return ModelSpec(
        name=M.name or "unnamed",
        elements=list(n),
        order=[(n[x], n[y]) for x, y in L.covers],
        smash=[
            (n[x], n[y], n[M.smash[x][y]])
            for x in L.elements()
            for y in range(x, L.size)
            if x not in forced and y not in forced
        ],
    )


def serialize_model(M: Model) -> str:
    return serialize_spec(spec_of(M))


_FILL = {
    "BA": "#9ecae1",
    "cBA∖BA": "#c7e9c0",
    "DL∖cBA": "#fdae6b",
    "outside DL": "#d9d9d9",
    "BA∖cBA": "#fb6a4a",
}


def _escape(s):
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _quote(s):
    return '"' + _escape(s) + '"'


def export_dot(M: Model, C) -> str:
    """Hasse diagram with one node per element, edges pointing upward."""
    L = M.lattice
    out = ["digraph %s {" % _quote(M.name or "model"),
           "  rankdir=BT;",
           "  node [shape=box, style=filled];"]
    for x in L.elements():
        region = C.region(x)
        out.append("  n%d [label=%s, fillcolor=%s];" % (
            x, '"%s\\n%s"' % (_escape(L.names[x]), _escape(region)), _quote(_FILL[region])))
    for x, y in L.covers:
        out.append("  n%d -> n%d;" % (x, y))
    out.append("}")
    return "\n".join(out) + "\n"
