"""Evaluate lemma statements on a concrete model.

Each check evaluates the statement, not its proof.  ``flags`` lists the
structural properties the original argument relies on, so a failure can be
read against the flag battery of the same model.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .ops import (
    SubsetCapExceeded, membership_ba, membership_cba, membership_dl, ra_op,
    structural_flags, subsets, FlagReport,
)
from .order import join_of, meet_of
from .quantale import Model

HOLDS, FAILS, VACUOUS, SAMPLED = "holds", "fails", "vacuous", "sampled"


@dataclass(frozen=True)
class Caps:
    subset_cap: int = 16
    seed: int = 0


@dataclass
class LemmaResult:
    name: str
    status: str
    witnesses: list = field(default_factory=list)
    flags: tuple = ()
    checked: int = 0
    notes: dict = field(default_factory=dict)
    engine_bug: bool = False


@dataclass
class LemmaReport:
    model: str
    lemmas: list
    flags: FlagReport

    def get(self, name) -> LemmaResult:
        return next(r for r in self.lemmas if r.name == name)


def _status(failed, qualifying, sampled):
    if failed:
        return FAILS
    if not qualifying:
        return VACUOUS
    return SAMPLED if sampled else HOLDS


def _sets(elements, caps):
    elements = list(elements)
    return subsets(elements, caps.subset_cap, caps.seed), len(elements) > caps.subset_cap


# -- individual statements; each returns True when the statement holds --------

def join_ba_holds(M, X):
    joined = join_of(M.lattice, X)
    return ra_op(M, ra_op(M, joined)) == joined and membership_cba(M, joined)


def meet_join_qualifies(M, X):
    A = lambda x: ra_op(M, x)  # noqa: E731
    if not all(membership_dl(M, x) and A(A(x)) == x for x in X):
        return False
    j = join_of(M.lattice, [A(x) for x in X])
    return A(A(j)) == j


def meet_join_holds(M, X):
    return ra_op(M, meet_of(M.lattice, X)) == join_of(M.lattice, [ra_op(M, x) for x in X])


def zeroone_holds(M, e):
    L = M.lattice
    return (ra_op(M, e) != L.top) == (e != L.bottom)


def dichotomy_hypotheses(M, x, y, e):
    L = M.lattice
    return (membership_dl(M, x) and membership_dl(M, y) and M.smash[x][y] == L.bottom
            and e != L.bottom and L.le(e, x) and L.le(e, y))


def dichotomy_holds(M, x, y, e):
    return not (membership_cba(M, x) and membership_cba(M, y))


# -- checks --------------------------------------------------------------------

def check_join_ba(M: Model, caps: Caps = Caps()) -> LemmaResult:
    ba = [x for x in M.lattice.elements() if membership_ba(M, x)]
    it, sampled = _sets(ba, caps)
    bad, n = [], 0
    for X in it:
        n += 1
        if not join_ba_holds(M, X):
            bad.append(X)
    return LemmaResult("join_ba", _status(bad, n, sampled), bad, ("P1", "P2"), n)


def check_meet_join(M: Model, caps: Caps = Caps()) -> LemmaResult:
    dl = [x for x in M.lattice.elements() if membership_dl(M, x)]
    it, sampled = _sets(dl, caps)
    bad, n, qualifying = [], 0, 0
    for X in it:
        n += 1
        if not meet_join_qualifies(M, X):
            continue
        qualifying += 1
        if not meet_join_holds(M, X):
            bad.append(X)
    r = LemmaResult("meet_join", _status(bad, qualifying, sampled), bad, ("P4",), n)
    r.notes["qualifying"] = qualifying
    return r


def check_zeroone(M: Model) -> LemmaResult:
    bad = [(e,) for e in M.lattice.elements() if not zeroone_holds(M, e)]
    r = LemmaResult("zeroone", _status(bad, M.size, False), bad, (), M.size)
    # holds in every valid model; a failure means the engine is wrong
    r.engine_bug = bool(bad)
    return r


def check_dichotomy(M: Model) -> LemmaResult:
    L = M.lattice
    el = list(L.elements())
    bad, qualifying, n = [], 0, 0
    meet_mismatch = []
    for x, y in combinations(el, 2):
        common = [e for e in el if e != L.bottom and L.le(e, x) and L.le(e, y)]
        if bool(common) != (L.meet(x, y) != L.bottom):
            meet_mismatch.append((x, y))
        for e in el:
            n += 1
            if not dichotomy_hypotheses(M, x, y, e):
                continue
            qualifying += 1
            if not dichotomy_holds(M, x, y, e):
                bad.append((x, y, e))
    r = LemmaResult("dichotomy", _status(bad, qualifying, False), bad, ("P3", "P4"), n)
    r.notes["qualifying"] = qualifying
    r.notes["meet_nonzero_equivalence"] = not meet_mismatch
    return r


def check_inclusions(M: Model) -> LemmaResult:
    el = list(M.lattice.elements())
    ba = [x for x in el if membership_ba(M, x)]
    dl = {x for x in el if membership_dl(M, x)}
    cba = {x for x in el if membership_cba(M, x)}
    ba_dl = [("BA<=DL", x) for x in ba if x not in dl]
    cba_dl = [("cBA<=DL", x) for x in cba if x not in dl]
    ba_cba = [("BA<=cBA", x) for x in ba if x not in cba]
    bad = ba_dl + cba_dl + ba_cba
    r = LemmaResult("inclusions", _status(bad, el, False), bad, ("P1",), len(el))
    r.engine_bug = bool(ba_dl or cba_dl)
    return r


def run_harness(M: Model, caps: Caps = Caps()) -> LemmaReport:
    try:
        flags = structural_flags(M, caps.subset_cap)
    except SubsetCapExceeded:
        flags = structural_flags(M, caps.subset_cap, seed=caps.seed)
    lemmas = [
        check_join_ba(M, caps),
        check_meet_join(M, caps),
        check_zeroone(M),
        check_dichotomy(M),
        check_inclusions(M),
    ]
    return LemmaReport(M.name, lemmas, flags)


def replay(M: Model, lemma: str, witness) -> bool:
    """True when ``witness`` still violates ``lemma`` evaluated on its own."""
    if lemma == "join_ba":
        return all(membership_ba(M, x) for x in witness) and not join_ba_holds(M, witness)
    if lemma == "meet_join":
        return meet_join_qualifies(M, witness) and not meet_join_holds(M, witness)
    if lemma == "zeroone":
        return not zeroone_holds(M, witness[0])
    if lemma == "dichotomy":
        return dichotomy_hypotheses(M, *witness) and not dichotomy_holds(M, *witness)
    if lemma == "inclusions":
        kind, x = witness
        sub, sup = kind.split("<=")
        test = {"BA": membership_ba, "DL": membership_dl, "cBA": membership_cba}
        return test[sub](M, x) and not test[sup](M, x)
    raise KeyError(lemma)
