"""Finite partial orders and lattices stored as bitrows.

Elements are plain ints ``0..n-1``.  Row ``down[x]`` has bit ``y`` set iff
``y <= x``; ``up[x]`` is the transpose.  Indices are assigned by rank (length
of the longest chain from bottom) with ties broken by label, so every table and
report derived from a lattice is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

MAX_SIZE = 64


class LatticeError(ValueError):
    pass


class CycleError(LatticeError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("order relation has a cycle: " + " <= ".join(self.cycle))


class NotALatticeError(LatticeError):
    def __init__(self, pair, kind):
        self.pair = tuple(pair)
        self.kind = kind
        super().__init__("no unique %s for %s and %s" % (kind, pair[0], pair[1]))


class NoBoundsError(LatticeError):
    def __init__(self, missing):
        self.missing = missing
        super().__init__("order has no global %s" % missing)


class LatticeTooLarge(LatticeError):
    pass


class InvariantBreach(RuntimeError):
    """An identity that holds in every valid structure failed: an engine bug."""


def bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Lattice:
    names: tuple
    down: tuple
    up: tuple
    join2: tuple
    meet2: tuple
    bottom: int
    top: int
    covers: tuple
    rank: tuple

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def le(self, x: int, y: int) -> bool:
        return bool(self.down[y] >> x & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.le(x, y)

    def index(self, label: str) -> int:
        return self.names.index(label)

    def join(self, x: int, y: int) -> int:
        return self.join2[x][y]

    def meet(self, x: int, y: int) -> int:
        return self.meet2[x][y]

    def join_mask(self, mask: int) -> int:
        j2 = self.join2
        return reduce(lambda acc, y: j2[acc][y], bits(mask), self.bottom)

    def elements(self) -> range:
        return range(self.size)


def _closure(n, rows):
    # Warshall on bitrows: rows[i] has bit j iff i <= j
    rows = list(rows)
    for k in range(n):
        bit = 1 << k
        rk = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rk
    return rows


def _find_path(edges, src, dst):
    prev = {src: None}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for v in edges.get(u, ()):
                if v not in prev:
                    prev[v] = u
                    nxt.append(v)
        frontier = nxt
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def build_lattice(labels: Sequence[str], order_generators: Iterable[tuple]) -> Lattice:
    """Close the generating pairs ``(a, b)`` meaning ``a <= b`` into a lattice."""
    labels = list(labels)
    n = len(labels)
    if n == 0:
        raise NoBoundsError("bottom")
    if n > MAX_SIZE:
        raise LatticeTooLarge("carrier has %d elements; at most %d supported" % (n, MAX_SIZE))
    pos = {}
    for i, name in enumerate(labels):
        if name in pos:
            raise LatticeError("duplicate label %r" % name)
        pos[name] = i
    rows = [1 << i for i in range(n)]
    edges = {}
    for a, b in order_generators:
        if a not in pos or b not in pos:
            raise LatticeError("undeclared label in pair (%s, %s)" % (a, b))
        rows[pos[a]] |= 1 << pos[b]
        edges.setdefault(pos[a], []).append(pos[b])
    up = _closure(n, rows)

    for i in range(n):
        for j in bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                path = _find_path(edges, i, j) + _find_path(edges, j, i)[1:]
                raise CycleError([labels[k] for k in path])

    full = (1 << n) - 1
    bottoms = [i for i in range(n) if up[i] == full]
    down = [0] * n
    for i in range(n):
        for j in bits(up[i]):
            down[j] |= 1 << i
    tops = [i for i in range(n) if down[i] == full]
    if not bottoms:
        raise NoBoundsError("bottom")
    if not tops:
        raise NoBoundsError("top")

    # longest chain from bottom; downset size is a linear extension
    rank = [0] * n
    for i in sorted(range(n), key=lambda k: bin(down[k]).count("1")):
        below = down[i] & ~(1 << i)
        rank[i] = max((rank[j] + 1 for j in bits(below)), default=0)

    order = sorted(range(n), key=lambda k: (rank[k], labels[k]))
    new = {old: k for k, old in enumerate(order)}

    def remap(mask):
        return sum(1 << new[j] for j in bits(mask))

    names = tuple(labels[k] for k in order)
    up = tuple(remap(up[k]) for k in order)
    down = tuple(remap(down[k]) for k in order)
    rank = tuple(rank[k] for k in order)

    join2 = [[0] * n for _ in range(n)]
    meet2 = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(x, n):
            ub = up[x] & up[y]
            least = [z for z in bits(ub) if ub & ~up[z] == 0]
            if len(least) != 1:
                raise NotALatticeError((names[x], names[y]), "least upper bound")
            lb = down[x] & down[y]
            greatest = [z for z in bits(lb) if lb & ~down[z] == 0]
            if len(greatest) != 1:
                raise NotALatticeError((names[x], names[y]), "greatest lower bound")
            join2[x][y] = join2[y][x] = least[0]
            meet2[x][y] = meet2[y][x] = greatest[0]

    covers = tuple(
        (x, y)
        for x in range(n)
        for y in bits(up[x] & ~(1 << x))
        if up[x] & down[y] == (1 << x) | (1 << y)
    )
    return Lattice(
        names=names,
        down=down,
        up=up,
        join2=tuple(map(tuple, join2)),
        meet2=tuple(map(tuple, meet2)),
        bottom=new[bottoms[0]],
        top=new[tops[0]],
        covers=covers,
        rank=rank,
    )


def join_of(L: Lattice, S: Iterable[int]) -> int:
    return reduce(L.join, S, L.bottom)


def meet_of(L: Lattice, S: Iterable[int]) -> int:
    """Greatest lower bound, computed as the join of all common lower bounds."""
    S = list(S)
    common = L.full
    for x in S:
        common &= L.down[x]
    result = L.join_mask(common)
    folded = reduce(L.meet, S, L.top)
    if result != folded:
        raise InvariantBreach(
            "join of lower bounds %s differs from tabulated meet %s"
            % (L.names[result], L.names[folded])
        )
    return result


def mask_of(S: Iterable[int]) -> int:
    return sum(1 << x for x in set(S))


def hasse_closure(L: Lattice) -> tuple:
    """Rebuild the ``up`` rows from the cover edges alone."""
    rows = [1 << i for i in range(L.size)]
    for x, y in L.covers:
        rows[x] |= 1 << y
    return tuple(_closure(L.size, rows))
