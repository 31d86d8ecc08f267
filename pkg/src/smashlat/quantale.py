"""Smash multiplication on a finite lattice and its axiom battery.

A model is an integral commutative quantale: a commutative, associative
multiplication with unit = top that distributes over joins.  Monotonicity and
``smash(x, y) <= meet(x, y)`` follow and are checked as well.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Mapping

from .order import Lattice, bits

SUBSET_DISTRIBUTIVITY_MAX = 5

# check order is part of the report contract: the unit law is listed first
AXIOMS = (
    "unit",
    "absorption",
    "commutativity",
    "associativity",
    "distributivity",
    "join-distributivity",
    "monotonicity",
    "integrality",
)


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    expected: int
    actual: int

    def describe(self, L: Lattice) -> str:
        w = ", ".join(_label(L, x) for x in self.witness)
        return "%s at (%s): expected %s, got %s" % (
            self.axiom, w, L.names[self.expected], L.names[self.actual])


def _label(L, x):
    if isinstance(x, frozenset):
        return "{" + ",".join(L.names[y] for y in sorted(x)) + "}"
    return L.names[x]


@dataclass(frozen=True)
class AxiomReport:
    violations: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def first(self, axiom):
        return next((v for v in self.violations if v.axiom == axiom), None)


class ModelError(ValueError):
    pass


class IncompleteTable(ModelError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__("smash table missing %d pair(s): %s" % (
            len(self.missing), ", ".join("(%s, %s)" % p for p in self.missing[:8])))


class AxiomViolation(ModelError):
    def __init__(self, report: AxiomReport, lattice: Lattice):
        self.report = report
        self.lattice = lattice
        super().__init__("; ".join(v.describe(lattice) for v in report.violations))


@dataclass(frozen=True, eq=False)
class Model:
    lattice: Lattice
    smash: tuple
    name: str = ""
    roles: Mapping[str, str] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.lattice.size

    @property
    def names(self):
        return self.lattice.names

    def smash_of(self, x: int, y: int) -> int:
        return self.smash[x][y]

    def label(self, x: int) -> str:
        return self.lattice.names[x]

    def __getstate__(self):
        return {"lattice": self.lattice, "smash": self.smash, "name": self.name,
                "roles": dict(self.roles), "_cache": {}}

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)


def smash_of(M: Model, x: int, y: int) -> int:
    return M.smash[x][y]


def build_model(L: Lattice, smash_table: Mapping[tuple, int], name: str = "",
                roles: Mapping[str, str] | None = None) -> Model:
    """Fill bottom/top rows, require every other pair, then validate.

    ``smash_table`` maps index pairs to indices.  A pair given in one order is
    mirrored; a pair given in both orders keeps both so commutativity is tested
    on what the caller actually wrote.
    """
    n = L.size
    table = [[None] * n for _ in range(n)]
    for (x, y), v in smash_table.items():
        if not (0 <= x < n and 0 <= y < n and 0 <= v < n):
            raise ModelError("smash entry (%r, %r) = %r outside the carrier" % (x, y, v))
        table[x][y] = v
    missing = []
    for x in range(n):
        for y in range(x, n):
            a, b = table[x][y], table[y][x]
            if a is None and b is None:
                if L.bottom in (x, y):
                    a = b = L.bottom
                elif x == L.top:
                    a = b = y
                elif y == L.top:
                    a = b = x
                else:
                    missing.append((L.names[x], L.names[y]))
                    continue
            table[x][y] = a if a is not None else b
            table[y][x] = b if b is not None else a
    if missing:
        raise IncompleteTable(missing)
    M = Model(L, tuple(map(tuple, table)), name, dict(roles or {}))
    report = validate_axioms(M)
    if not report.passed:
        raise AxiomViolation(report, L)
    return M


def validate_axioms(M: Model, fail_fast: bool = False) -> AxiomReport:
    """Check every law; each failure carries the first witness in index order."""
    L = M.lattice
    s = M.smash
    j = L.join2
    m = L.meet2
    n = L.size
    el = range(n)
    found = []

    def scan(axiom, cases):
        for witness, expected, actual in cases:
            if expected != actual:
                found.append(Violation(axiom, witness, expected, actual))
                return True
        return False

    checks = [
        ("unit", lambda: (((x,), x, s[x][L.top]) for x in el)),
        ("absorption", lambda: (((x,), L.bottom, s[x][L.bottom]) for x in el)),
        ("commutativity", lambda: (((x, y), s[x][y], s[y][x]) for x in el for y in el)),
        ("associativity", lambda: (
            ((x, y, z), s[s[x][y]][z], s[x][s[y][z]]) for x, y, z in product(el, el, el))),
        ("distributivity", lambda: (
            ((x, y, z), j[s[x][y]][s[x][z]], s[x][j[y][z]]) for x, y, z in product(el, el, el))),
        ("join-distributivity", lambda: _subset_cases(M) if n <= SUBSET_DISTRIBUTIVITY_MAX else ()),
        ("monotonicity", lambda: (
            ((x, y, z), s[x][z], m[s[x][z]][s[y][z]])
            for x in el for y in bits(L.up[x]) for z in el)),
        ("integrality", lambda: (((x, y), s[x][y], m[s[x][y]][m[x][y]]) for x in el for y in el)),
    ]
    for axiom, cases in checks:
        if scan(axiom, cases()) and fail_fast:
            break
    return AxiomReport(tuple(found))


def _subset_cases(M):
    L = M.lattice
    s = M.smash
    el = range(L.size)
    for x in el:
        for r in range(len(el) + 1):
            for S in combinations(el, r):
                joined = L.bottom
                parts = L.bottom
                for y in S:
                    joined = L.join2[joined][y]
                    parts = L.join2[parts][s[x][y]]
                yield (x, frozenset(S)), parts, s[x][joined]


def is_valid(M: Model) -> bool:
    return validate_axioms(M, fail_fast=True).passed
