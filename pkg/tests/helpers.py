"""Shared model collections and label translation for the test suite."""
import json
import os
from functools import lru_cache

from smashlat.models import TruncationParams, all_valid_builtins, truncation_label
from smashlat.search import models_of_size

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


@lru_cache(maxsize=None)
def golden():
    with open(os.path.join(FIXTURES, "golden.json")) as fh:
        return json.load(fh)


def golden_truncation(params):
    for entry in golden()["truncation"]:
        if tuple(entry["params"]) == tuple(params):
            return entry
    raise KeyError(params)


def oracle_key_to_label(p: TruncationParams, key: str) -> str:
    """Oracle keys look like '{0,inf}|1' or 'S'; map them to engine labels."""
    if key == "S":
        return "top"
    body, b = key.split("|")
    T = set()
    for tok in filter(None, body.strip("{}").split(",")):
        if tok == "inf":
            T.add("kinf")
        elif tok.startswith("t"):
            T.add(tok)
        else:
            T.add("k" + tok)
    return truncation_label(p, frozenset(T), int(b))


@lru_cache(maxsize=None)
def enumerated_upto(n):
    return tuple(M for size in range(1, n + 1) for M in models_of_size(size))


@lru_cache(maxsize=None)
def builtins():
    return tuple(all_valid_builtins())


def model_id(M):
    return M.name


def _subsets_with_join_and_meet(L, values, f):
    """Yield (S, join S, meet of f over S) for every subset S of ``values``."""
    out = []

    def rec(i, S, j, m):
        if i == len(values):
            out.append((tuple(S), j, m))
            return
        rec(i + 1, S, j, m)
        x = values[i]
        S.append(x)
        rec(i + 1, S, L.join(j, x), L.meet(m, f(x)))
        S.pop()

    rec(0, [], L.bottom, L.top)
    return out


def universal_violations(M):
    """Names of the universal laws that fail on M (empty when all hold)."""
    from smashlat.ops import (
        curlyvee_op, membership_ba, membership_cba, membership_dl, pc, ra_op, retract,
    )
    L = M.lattice
    el = list(L.elements())
    s = M.smash
    le = L.le
    dl = [x for x in el if membership_dl(M, x)]
    A = lambda x: ra_op(M, x)  # noqa: E731
    bad = []

    def law(name, ok):
        if not ok:
            bad.append(name)

    law("pc annihilates", all(s[pc(M, x)][x] == L.bottom for x in el))
    law("pc is largest annihilator",
        all(le(z, pc(M, x)) for x in el for z in el if s[z][x] == L.bottom))
    law("pc antitone", all(le(pc(M, y), pc(M, x)) for x in el for y in el if le(x, y)))
    law("x <= pc2 x", all(le(x, pc(M, pc(M, x))) for x in el))
    law("pc3 = pc", all(pc(M, pc(M, pc(M, x))) == pc(M, x) for x in el))
    law("pc turns joins into meets",
        all(pc(M, j) == m for _, j, m in _subsets_with_join_and_meet(L, el, lambda x: pc(M, x))))
    law("DL join-closed", all(membership_dl(M, L.join(x, y)) for x in dl for y in dl))
    law("DL smash-closed", all(membership_dl(M, s[x][y]) for x in dl for y in dl))
    law("bounds in DL", membership_dl(M, L.bottom) and membership_dl(M, L.top))
    law("retract in DL", all(membership_dl(M, retract(M, x)) for x in el))
    law("retract deflationary", all(le(retract(M, x), x) for x in el))
    law("retract idempotent", all(retract(M, retract(M, x)) == retract(M, x) for x in el))
    law("retract monotone",
        all(le(retract(M, x), retract(M, y)) for x in el for y in el if le(x, y)))
    law("retract fixes exactly DL", all((retract(M, x) == x) == membership_dl(M, x) for x in el))
    law("A lands in DL", all(membership_dl(M, A(x)) for x in el))
    law("A antitone", all(le(A(y), A(x)) for x in el for y in el if le(x, y)))
    law("x <= A2 x on DL", all(le(x, A(A(x))) for x in dl))
    law("A3 = A on DL", all(A(A(A(x))) == A(x) for x in dl))
    law("A x = top iff x = bottom", all((A(x) == L.top) == (x == L.bottom) for x in el))
    law("BA within DL", all(membership_dl(M, x) for x in el if membership_ba(M, x)))
    law("pc preserves BA", all(membership_ba(M, pc(M, x)) for x in el if membership_ba(M, x)))
    law("curlyvee lands in cBA",
        all(membership_cba(M, curlyvee_op(M, S))
            for S, _, _ in _subsets_with_join_and_meet(L, dl, lambda x: x)))
    if all(pc(M, pc(M, x)) == x for x in el):
        law("P1 gives BA within cBA",
            all(membership_cba(M, x) for x in el if membership_ba(M, x)))
    return bad
