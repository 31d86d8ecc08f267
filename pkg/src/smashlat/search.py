"""Exhaustive enumeration of small models up to isomorphism.

Two phases.  Lattices on ``n`` elements are produced from every naturally
labelled poset on the ``n - 2`` inner elements, bounded by a fresh bottom and
top.  For each lattice the multiplication is searched only on pairs of
join-irreducibles: distributivity over joins fixes every other entry, since
each element is the join of the join-irreducibles below it.

Isomorphism rejection uses a canonical code: colour refinement on the order
and smash tables, then individualisation of the first non-singleton cell,
keeping the lexicographically least table over all leaves.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable

from .harness import check_dichotomy, check_join_ba
from .modelio import serialize_model
from .ops import classify_model, membership_dl, pc, structural_flags
from .order import Lattice, NotALatticeError, bits, build_lattice
from .quantale import Model, is_valid

MAX_SEARCH_SIZE = 7


class SizeCapExceeded(ValueError):
    pass


# -- canonical form -----------------------------------------------------------

def _refine(n, colors, up, smash):
    while True:
        sigs = []
        for x in range(n):
            row = []
            for y in range(n):
                row.append((colors[y], up[x] >> y & 1, up[y] >> x & 1,
                            colors[smash[x][y]] if smash else 0))
            row.sort()
            sigs.append((colors[x], tuple(row)))
        ranked = {s: k for k, s in enumerate(sorted(set(sigs)))}
        new = [ranked[s] for s in sigs]
        if len(ranked) == len(set(colors)):
            return new
        colors = new


def _leaf_code(n, colors, up, smash):
    order = sorted(range(n), key=colors.__getitem__)
    pos = colors
    out = [n]
    for a in order:
        row = up[a]
        out.extend(row >> b & 1 for b in order)
    if smash:
        for a in order:
            out.extend(pos[smash[a][b]] for b in order)
    return bytes(out)


def _canon(n, up, smash):
    best = None
    stack = [_refine(n, [0] * n, up, smash)]
    while stack:
        colors = stack.pop()
        if len(set(colors)) == n:
            code = _leaf_code(n, colors, up, smash)
            if best is None or code < best[0]:
                best = (code, colors)
            continue
        counts = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min(c for c, k in counts.items() if k > 1)
        for v in range(n):
            if colors[v] == target:
                ind = [2 * c + 1 for c in colors]
                ind[v] = 2 * target
                stack.append(_refine(n, ind, up, smash))
    return best


def canonical_code(M) -> bytes:
    """Isomorphism-invariant byte string of a Model (or a bare Lattice)."""
    if isinstance(M, Lattice):
        return _canon(M.size, M.up, None)[0]
    return _canon(M.size, M.lattice.up, M.smash)[0]


# -- lattices -----------------------------------------------------------------

def _inner_posets(k):
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    for mask in range(1 << len(pairs)):
        rel = {pairs[b] for b in range(len(pairs)) if mask >> b & 1}
        if all((i, m) in rel for (i, j) in rel for (j2, m) in rel if j2 == j):
            yield sorted(rel)


def _inner_name(k):
    return chr(ord("a") + k)


@lru_cache(maxsize=None)
def enumerate_lattices(n: int) -> tuple:
    """Every lattice on ``n`` elements up to isomorphism, in canonical order."""
    if n < 1:
        return ()
    if n > MAX_SEARCH_SIZE:
        raise SizeCapExceeded("lattice enumeration supports at most %d elements" % MAX_SEARCH_SIZE)
    if n == 1:
        return (build_lattice(["top"], []),)
    k = n - 2
    inner = [_inner_name(i) for i in range(k)]
    seen = {}
    for rel in _inner_posets(k):
        gens = [("bot", a) for a in inner] + [(a, "top") for a in inner] + [("bot", "top")]
        gens += [(inner[i], inner[j]) for i, j in rel]
        try:
            L = build_lattice(["bot", "top"] + inner, gens)
        except NotALatticeError:
            continue
        code, colors = _canon(n, L.up, None)
        if code not in seen:
            seen[code] = _relabel(L, colors)
    return tuple(seen[c] for c in sorted(seen))


def _relabel(L, colors):
    # name inner elements by canonical position so output does not depend on
    # which labelled representative was met first
    order = sorted(range(L.size), key=colors.__getitem__)
    names = {}
    nxt = 0
    for x in order:
        if x == L.bottom:
            names[x] = "bot"
        elif x == L.top:
            names[x] = "top"
        else:
            names[x] = _inner_name(nxt)
            nxt += 1
    return build_lattice([names[x] for x in range(L.size)],
                         [(names[x], names[y]) for x, y in L.covers])


# -- multiplications ----------------------------------------------------------

def join_irreducibles(L: Lattice) -> list:
    lower = [0] * L.size
    for x, y in L.covers:
        lower[y] += 1
    return [x for x in L.elements() if lower[x] == 1]


def _multiplications(L: Lattice):
    """Yield every valid smash table on L (as tuple of tuples)."""
    n = L.size
    if n == 1:
        yield ((0,),)
        return
    J = join_irreducibles(L)
    free = [(j, k) for a, j in enumerate(J) for k in J[a:] if L.top not in (j, k)]
    domains = [[z for z in bits(L.down[L.meet(j, k)])] for j, k in free]

    def below(p, q):
        (a, b), (c, d) = p, q
        return (L.le(a, c) and L.le(b, d)) or (L.le(a, d) and L.le(b, c))

    # constraints against earlier pairs only: (index, earlier <= this?)
    cons = [[(i, below(free[i], free[p])) for i in range(p)
             if below(free[i], free[p]) or below(free[p], free[i])]
            for p in range(len(free))]
    ji_below = [[j for j in J if L.le(j, x)] for x in range(n)]
    val = [0] * len(free)
    slot = {}
    for p, (j, k) in enumerate(free):
        slot[j, k] = slot[k, j] = p

    def s(j, k):
        if j == L.top:
            return k
        if k == L.top:
            return j
        return val[slot[j, k]]

    def extend():
        table = []
        for x in range(n):
            row = []
            for y in range(n):
                acc = L.bottom
                for j in ji_below[x]:
                    for k in ji_below[y]:
                        acc = L.join2[acc][s(j, k)]
                row.append(acc)
            table.append(tuple(row))
        return tuple(table)

    def rec(p):
        if p == len(free):
            table = extend()
            if is_valid(Model(L, table)):
                yield table
            return
        for v in domains[p]:
            ok = True
            for i, earlier_below in cons[p]:
                w = val[i]
                if earlier_below and not L.le(w, v):
                    ok = False
                    break
                if not earlier_below and not L.le(v, w):
                    ok = False
                    break
            if ok:
                val[p] = v
                yield from rec(p + 1)

    yield from rec(0)


def _models_for_lattice(L: Lattice):
    out = {}
    for table in _multiplications(L):
        code = _canon(L.size, L.up, table)[0]
        out.setdefault(code, table)
    return sorted(out.items())


@lru_cache(maxsize=None)
def _all_models(size: int, workers: int = 1) -> tuple:
    lattices = enumerate_lattices(size)
    if workers > 1 and len(lattices) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_models_for_lattice, lattices))
    else:
        results = [_models_for_lattice(L) for L in lattices]
    merged = sorted(
        ((code, k, table) for k, res in enumerate(results) for code, table in res),
        key=lambda t: t[0])
    return tuple((code, lattices[k], table) for code, k, table in merged)


def default_workers() -> int:
    env = os.environ.get("SMASHLAT_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def models_of_size(size: int, workers: int = 1) -> list:
    if size > MAX_SEARCH_SIZE:
        raise SizeCapExceeded("enumeration supports at most %d elements" % MAX_SEARCH_SIZE)
    if size < 1:
        return []
    out = []
    for k, (code, L, table) in enumerate(_all_models(size, workers)):
        out.append(Model(L, table, "m%d_%d" % (size, k)))
    return out


# -- predicates ---------------------------------------------------------------

def _not_p1(M):
    return any(pc(M, pc(M, x)) != x for x in M.lattice.elements())


def _not_p4(M):
    return not structural_flags(M).P4_A_joins_to_meets.holds


def _dl_ne_cba(M):
    C = classify_model(M)
    return any(d and not c for d, c in zip(C.in_dl, C.in_cba))


def _ba_not_in_cba(M):
    C = classify_model(M)
    return any(b and not c for b, c in zip(C.in_ba, C.in_cba))


def _dichotomy_fails(M):
    return check_dichotomy(M).status == "fails"


def _join_ba_fails(M):
    return check_join_ba(M).status == "fails"


def _meet_ne_smash_on_dl(M):
    L = M.lattice
    dl = [x for x in L.elements() if membership_dl(M, x)]
    return any(M.smash[x][y] != L.meet(x, y) for x, y in combinations(dl, 2))


@dataclass(frozen=True)
class SearchPredicate:
    name: str
    evaluate: Callable[[Model], bool]


PREDICATES = {p.name: p for p in [
    SearchPredicate("not-P1", _not_p1),
    SearchPredicate("not-P4", _not_p4),
    SearchPredicate("DL-ne-cBA", _dl_ne_cba),
    SearchPredicate("BA-not-in-cBA", _ba_not_in_cba),
    SearchPredicate("dichotomy-fails", _dichotomy_fails),
    SearchPredicate("join-ba-fails", _join_ba_fails),
    SearchPredicate("meet-ne-smash-on-DL", _meet_ne_smash_on_dl),
]}


@dataclass
class EnumerationSummary:
    size: int
    lattices: int
    models: int
    witness_counts: dict = field(default_factory=dict)
    first_witness: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "size": self.size,
            "lattices": self.lattices,
            "models": self.models,
            "witness_counts": dict(self.witness_counts),
            "first_witness": dict(self.first_witness),
        }


def enumerate_models(size: int, emit: Callable[[Model], None] | None = None,
                     workers: int = 1, predicates: Iterable[str] = tuple(PREDICATES)
                     ) -> EnumerationSummary:
    models = models_of_size(size, workers)
    summary = EnumerationSummary(size, len(enumerate_lattices(size)) if size >= 1 else 0,
                                 len(models))
    for name in predicates:
        summary.witness_counts[name] = 0
    for M in models:
        if emit is not None:
            emit(M)
        for name in predicates:
            if PREDICATES[name].evaluate(M):
                summary.witness_counts[name] += 1
                summary.first_witness.setdefault(name, serialize_model(M))
    return summary


def find_witnesses(sizes: Iterable[int], pred: str, limit: int | None = None,
                   workers: int = 1) -> list:
    """Models satisfying ``pred``, smallest carrier first, canonical order within a size."""
    if pred not in PREDICATES:
        raise KeyError("unknown predicate %r; choose from %s" % (pred, ", ".join(PREDICATES)))
    sizes = sorted(sizes)
    if sizes and sizes[-1] > MAX_SEARCH_SIZE:
        raise SizeCapExceeded("search supports at most %d elements" % MAX_SEARCH_SIZE)
    found = []
    for size in sizes:
        for M in models_of_size(size, workers):
            if PREDICATES[pred].evaluate(M):
                found.append(M)
                if limit is not None and len(found) >= limit:
                    return found
    return found
