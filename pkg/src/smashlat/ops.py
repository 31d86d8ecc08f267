"""Pseudo-complement, retraction and the derived operators on a model.

``pc(x)``       join of every z with smash(z, x) = bottom
``retract(x)``  join of the smash-idempotent elements below x
``ra_op(x)``    retract(pc(x)), the pseudo-complement internal to DL
``curlyvee``    ra_op twice applied to an ordinary join

Tables are computed once per model and cached on it.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .order import InvariantBreach, bits, join_of, meet_of
from .quantale import Model

REGIONS = ("BA", "cBA∖BA", "DL∖cBA", "outside DL")


class SubsetCapExceeded(RuntimeError):
    def __init__(self, size, cap):
        self.size = size
        self.cap = cap
        super().__init__("carrier of %d elements exceeds subset cap %d" % (size, cap))


def _breach(msg):
    raise InvariantBreach(msg)


def _pc_table(M):
    L = M.lattice
    s = M.smash
    out = []
    for x in L.elements():
        ann = [z for z in L.elements() if s[z][x] == L.bottom]
        via_join = join_of(L, ann)
        # independent route: the annihilator that dominates all others
        largest = [z for z in ann if all(L.le(w, z) for w in ann)]
        if largest != [via_join] or s[via_join][x] != L.bottom:
            _breach("pseudo-complement of %s: join %s, largest annihilator %s"
                    % (L.names[x], L.names[via_join], largest))
        out.append(via_join)
    return tuple(out)


def _tables(M: Model):
    c = M._cache
    if "pc" in c:
        return c
    L = M.lattice
    s = M.smash
    pc_t = _pc_table(M)
    dl_mask = sum(1 << x for x in L.elements() if s[x][x] == x)
    r_t = []
    for x in L.elements():
        r = L.join_mask(L.down[x] & dl_mask)
        if not dl_mask >> r & 1:
            _breach("DL is not join-closed: retract(%s) = %s" % (L.names[x], L.names[r]))
        r_t.append(r)
    a_t = tuple(r_t[pc_t[x]] for x in L.elements())
    c.update(pc=pc_t, dl=dl_mask, r=tuple(r_t), A=a_t)
    return c


def pc(M: Model, x: int) -> int:
    return _tables(M)["pc"][x]


def retract(M: Model, x: int) -> int:
    return _tables(M)["r"][x]


def ra_op(M: Model, x: int) -> int:
    return _tables(M)["A"][x]


def dl_mask(M: Model) -> int:
    return _tables(M)["dl"]


def membership_dl(M: Model, x: int) -> bool:
    return M.smash[x][x] == x


def membership_ba(M: Model, x: int) -> bool:
    L = M.lattice
    return L.join(x, pc(M, x)) == L.top


def membership_cba(M: Model, x: int) -> bool:
    return membership_dl(M, x) and ra_op(M, ra_op(M, x)) == x


def curlyvee_op(M: Model, S: Iterable[int]) -> int:
    y = ra_op(M, ra_op(M, join_of(M.lattice, S)))
    if not membership_cba(M, y):
        _breach("curly join %s fell outside cBA" % M.label(y))
    return y


@dataclass(frozen=True)
class Classification:
    names: tuple
    pc: tuple
    retract: tuple
    A: tuple
    A2: tuple
    in_dl: tuple
    in_ba: tuple
    in_cba: tuple

    def members(self, which: str) -> list:
        """Indices in DL, BA, cBA, or in one of the region names."""
        sets = {"DL": self.in_dl, "BA": self.in_ba, "cBA": self.in_cba}
        if which in sets:
            return [x for x, f in enumerate(sets[which]) if f]
        if which not in REGIONS + ("BA∖cBA",):
            raise KeyError(which)
        return [x for x in range(len(self.names)) if self.region(x) == which]

    @property
    def summary(self) -> dict:
        n_dl = sum(self.in_dl)
        n_ba = sum(self.in_ba)
        n_cba = sum(self.in_cba)
        return {
            "size": len(self.names),
            "DL": n_dl,
            "cBA": n_cba,
            "BA": n_ba,
            "DL∖cBA": sum(d and not c for d, c in zip(self.in_dl, self.in_cba)),
            "cBA∖BA": sum(c and not b for c, b in zip(self.in_cba, self.in_ba)),
        }

    def region(self, x: int) -> str:
        if not self.in_dl[x]:
            return "outside DL"
        if self.in_ba[x]:
            return "BA" if self.in_cba[x] else "BA∖cBA"
        return "cBA∖BA" if self.in_cba[x] else "DL∖cBA"


def classify_model(M: Model) -> Classification:
    t = _tables(M)
    el = M.lattice.elements()
    A = t["A"]
    in_dl = tuple(membership_dl(M, x) for x in el)
    in_ba = tuple(membership_ba(M, x) for x in el)
    in_cba = tuple(d and A[A[x]] == x for x, d in zip(el, in_dl))
    for x in el:
        if in_ba[x] and not in_dl[x]:
            _breach("%s is in BA but not in DL" % M.label(x))
    return Classification(
        names=M.names,
        pc=t["pc"],
        retract=t["r"],
        A=A,
        A2=tuple(A[A[x]] for x in el),
        in_dl=in_dl,
        in_ba=in_ba,
        in_cba=in_cba,
    )


# -- structural flags ---------------------------------------------------------

@dataclass(frozen=True)
class Flag:
    holds: bool
    witness: tuple = ()
    sampled: bool = False
    checked: int = 0


@dataclass(frozen=True)
class FlagReport:
    P1_a2_identity: Flag
    P2_DL_meet_closed: Flag
    P3_smash_is_DL_meet: Flag
    P4_A_joins_to_meets: Flag

    def items(self):
        return [
            ("P1", self.P1_a2_identity),
            ("P2", self.P2_DL_meet_closed),
            ("P3", self.P3_smash_is_DL_meet),
            ("P4", self.P4_A_joins_to_meets),
        ]

    def holds(self, name: str) -> bool:
        return dict(self.items())[name].holds


def flag_p1(M, x):
    return pc(M, pc(M, x)) == x


def flag_p2(M, x, y):
    m = meet_of(M.lattice, (x, y))
    return retract(M, m) == m


def flag_p3(M, x, y):
    return M.smash[x][y] == retract(M, meet_of(M.lattice, (x, y)))


def flag_p4(M, S):
    return ra_op(M, join_of(M.lattice, S)) == meet_of(M.lattice, [ra_op(M, x) for x in S])


def subsets(elements, cap, seed=None, samples=4096):
    """Yield subsets smallest-first, each size scanned from the top down.

    Beyond ``cap`` elements this yields all pairs plus a seeded random sample,
    or raises SubsetCapExceeded when no seed is given.  Tuples come out sorted
    ascending.
    """
    elements = sorted(elements, reverse=True)
    if len(elements) <= cap:
        for r in range(len(elements) + 1):
            for S in combinations(elements, r):
                yield S[::-1]
        return
    if seed is None:
        raise SubsetCapExceeded(len(elements), cap)
    yield ()
    for x in elements:
        yield (x,)
    for S in combinations(elements, 2):
        yield S[::-1]
    rng = random.Random(seed)
    for _ in range(samples):
        k = rng.randint(3, len(elements))
        yield tuple(sorted(rng.sample(elements, k)))


def structural_flags(M: Model, subset_cap: int = 16, seed: int | None = None) -> FlagReport:
    el = list(M.lattice.elements())
    dl = [x for x in el if membership_dl(M, x)]

    p1 = next(((x,) for x in el if not flag_p1(M, x)), None)
    pairs = list(combinations(dl, 2))
    p2 = next((p for p in pairs if not flag_p2(M, *p)), None)
    p3 = next((p for p in pairs if not flag_p3(M, *p)), None)

    p4 = None
    checked = 0
    for S in subsets(el, subset_cap, seed):
        checked += 1
        if not flag_p4(M, S):
            p4 = S
            break
    sampled = len(el) > subset_cap
    return FlagReport(
        Flag(p1 is None, p1 or (), checked=len(el)),
        Flag(p2 is None, p2 or (), checked=len(pairs)),
        Flag(p3 is None, p3 or (), checked=len(pairs)),
        Flag(p4 is None, p4 or (), sampled=sampled, checked=checked),
    )
