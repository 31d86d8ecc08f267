"""One test per acceptance criterion; see the summary section printed by pytest.

Each test clears the engine caches it depends on and measures its own wall
time against the stated limit.
"""
import json
import os
import re
import time

import pytest

import oracles
from smashlat import search
from smashlat.harness import check_dichotomy, check_join_ba, check_zeroone
from smashlat.modelio import (
    ParseError, export_dot, model_from_spec, parse_model, serialize_model,
)
from smashlat.models import (
    TruncationParams, all_valid_builtins, chain_i_model, idempotent_chain_model,
    k_truncation_model, naive_sphere_model, powerset_model,
)
from smashlat.ops import classify_model, curlyvee_op, structural_flags
from smashlat.order import join_of
from smashlat.quantale import AxiomViolation, validate_axioms

from helpers import FIXTURES, golden_truncation, oracle_key_to_label, universal_violations


class Clock:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, "took %.2fs, limit %.0fs" % (self.elapsed, self.limit)


def fresh_search():
    search._all_models.cache_clear()
    search.enumerate_lattices.cache_clear()


def labels(M, xs):
    return [M.lattice.names[x] for x in xs]


def test_ac1_axiom_gate():
    with Clock(5.0):
        accepted = [powerset_model(n) for n in range(4)]
        accepted += [chain_i_model(), idempotent_chain_model(), k_truncation_model(TruncationParams(2, 2))]
        for M in accepted:
            assert validate_axioms(M).passed, M.name
        with pytest.raises(AxiomViolation) as e:
            model_from_spec(naive_sphere_model(2))
        first = e.value.report.violations[0]
        assert first.axiom == "unit"
        assert [e.value.lattice.names[w] for w in first.witness] == ["i"]


def test_ac2_golden_classification():
    g = golden_truncation((2, 2, 0))
    p = TruncationParams(2, 2)
    with Clock(1.0):
        M = k_truncation_model(p)
        C = classify_model(M)
    s = C.summary
    assert (s["size"], s["DL"], s["cBA"], s["BA"]) == (12, 9, 8, 2)
    assert (g["size"], g["dl"], g["cba"], g["ba"]) == (12, 9, 8, 2)
    gap = labels(M, C.members("DL∖cBA"))
    assert gap == ["k0+k1+kinf"]
    assert gap == [oracle_key_to_label(p, k) for k in g["dl_minus_cba"]]
    # the gap element is the pair (all atoms, 1)
    assert M.lattice.join_mask(sum(1 << M.lattice.index(a) for a in p.omega)) == \
        M.lattice.index(gap[0])


def test_ac3_universal_invariant_suite():
    with Clock(300.0):
        fresh_search()
        pool = list(all_valid_builtins())
        pool += [M for n in range(1, 6) for M in search.models_of_size(n)]
        failures = {M.name: universal_violations(M) for M in pool}
    assert len(pool) == 10 + 1 + 1 + 2 + 7 + 26
    assert {k: v for k, v in failures.items() if v} == {}


def test_ac4_harness_fidelity():
    with Clock(60.0):
        kt = k_truncation_model()
        d = check_dichotomy(kt)
        assert d.status == "fails"
        assert labels(kt, d.witnesses[0]) == ["kinf", "k0+k1", "i"]
        F = structural_flags(kt)
        assert not F.P1_a2_identity.holds
        assert labels(kt, F.P1_a2_identity.witness) == ["k0"]
        assert not F.P4_A_joins_to_meets.holds
        assert labels(kt, F.P4_A_joins_to_meets.witness) == ["kinf", "k0+k1"]

        p2 = powerset_model(2)
        assert check_dichotomy(p2).status == "vacuous"
        assert all(f.holds for _, f in structural_flags(p2).items())

        fresh_search()
        for n in range(1, 6):
            for M in search.models_of_size(n):
                assert check_zeroone(M).status == "holds", M.name


def test_ac5_join_of_ba_and_curly_join():
    for M in (powerset_model(3), chain_i_model(), k_truncation_model()):
        r = check_join_ba(M)
        assert r.status == "holds", M.name
    kt = k_truncation_model()
    L = kt.lattice
    S = [L.index("k0"), L.index("k1")]
    target = L.index("k0+k1")
    assert curlyvee_op(kt, S) == join_of(L, S) == target
    assert classify_model(kt).region(target) == "cBA∖BA"
    assert L.le(L.index("i"), target)


def test_ac6_search():
    with Clock(60.0):
        fresh_search()
        counts = [search.enumerate_models(n).models for n in (1, 2, 3)]
        assert counts == [1, 1, 2]
        assert [oracles.count_models(n)[1] for n in (1, 2, 3)] == counts

        found = search.find_witnesses(range(1, 4), "DL-ne-cBA")
        assert len(found) == 1
        assert search.canonical_code(found[0]) == search.canonical_code(idempotent_chain_model())

        def run(workers):
            fresh_search()
            docs = [search.enumerate_models(n, workers=workers).as_dict() for n in range(1, 5)]
            return json.dumps(docs, sort_keys=True).encode()

        single = run(1)
        many = run(max(2, search.default_workers()))
    assert single == many
    assert [d["models"] for d in json.loads(single)] == [1, 1, 2, 7]


def test_ac7_io():
    for M in all_valid_builtins():
        text = serialize_model(M)
        M2 = model_from_spec(parse_model(text))
        assert M2.names == M.names and M2.smash == M.smash, M.name
        assert validate_axioms(M2).passed
        assert serialize_model(M2) == text

        dot = export_dot(M, classify_model(M))
        assert len(re.findall(r"^\s*n\d+ -> n\d+", dot, re.M)) == len(M.lattice.covers)

    positions = []
    for name in ("bad_undeclared.sml", "bad_conflict.sml", "bad_syntax.sml"):
        with open(os.path.join(FIXTURES, "sml", name)) as fh:
            text = fh.read()
        with pytest.raises(ParseError) as e:
            parse_model(text)
        line = text.splitlines()[e.value.line - 1]
        assert 1 <= e.value.column <= len(line)
        assert not line[e.value.column - 1].isspace()
        positions.append((e.value.line, e.value.column))
    assert positions == [(4, 8), (8, 13), (5, 15)]
