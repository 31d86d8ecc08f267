import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from smashlat.modelio import parse_model, model_from_spec
from smashlat.models import idempotent_chain_model, chain_i_model
from smashlat.order import build_lattice
from smashlat.quantale import Model, validate_axioms
from smashlat.search import (
    MAX_SEARCH_SIZE, PREDICATES, SizeCapExceeded, canonical_code, enumerate_lattices,
    default_workers, enumerate_models, find_witnesses, join_irreducibles, models_of_size,
)

from helpers import builtins, enumerated_upto, golden

# regression lock for the engine's own enumeration beyond the oracle's reach
WITNESS_COUNTS = {
    3: {"not-P1": 1, "not-P4": 0, "DL-ne-cBA": 1, "BA-not-in-cBA": 0,
        "dichotomy-fails": 0, "join-ba-fails": 0, "meet-ne-smash-on-DL": 0},
    4: {"not-P1": 4, "not-P4": 0, "DL-ne-cBA": 4, "BA-not-in-cBA": 0,
        "dichotomy-fails": 0, "join-ba-fails": 0, "meet-ne-smash-on-DL": 0},
    5: {"not-P1": 23, "not-P4": 0, "DL-ne-cBA": 19, "BA-not-in-cBA": 0,
        "dichotomy-fails": 0, "join-ba-fails": 0, "meet-ne-smash-on-DL": 0},
    6: {"not-P1": 117, "not-P4": 1, "DL-ne-cBA": 95, "BA-not-in-cBA": 0,
        "dichotomy-fails": 1, "join-ba-fails": 0, "meet-ne-smash-on-DL": 1},
}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_counts_match_oracle(n):
    want = golden()["enumeration"][str(n)]
    assert oracles.count_models(n) == (want["lattices"], want["models"])
    assert len(enumerate_lattices(n)) == want["lattices"]
    assert len(models_of_size(n)) == want["models"]


def test_counts_beyond_oracle():
    assert [len(enumerate_lattices(n)) for n in (5, 6)] == [5, 15]
    assert [len(models_of_size(n)) for n in (5, 6)] == [26, 129]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_emitted_models_valid_and_distinct(n):
    ms = models_of_size(n)
    assert all(validate_axioms(M).passed for M in ms)
    codes = [canonical_code(M) for M in ms]
    assert len(set(codes)) == len(codes)
    assert codes == sorted(codes)


@pytest.mark.parametrize("n", [5, 6])
def test_summary_counts_locked(n):
    s = enumerate_models(n)
    assert s.witness_counts == WITNESS_COUNTS[n]


def test_worker_count_does_not_change_results():
    one = enumerate_models(5, workers=1).as_dict()
    many = enumerate_models(5, workers=3).as_dict()
    assert one == many
    a = [canonical_code(M) for M in models_of_size(6, workers=1)]
    b = [canonical_code(M) for M in models_of_size(6, workers=4)]
    assert a == b


def test_dl_ne_cba_minimal_witness_is_idempotent_chain():
    found = find_witnesses(range(1, 4), "DL-ne-cBA")
    assert len(found) == 1
    assert canonical_code(found[0]) == canonical_code(idempotent_chain_model())


def test_not_p1_picks_idempotent_chain_over_chain_i():
    found = find_witnesses(range(1, 4), "not-P1")
    codes = [canonical_code(M) for M in found]
    assert codes == [canonical_code(idempotent_chain_model())]
    assert canonical_code(chain_i_model()) not in codes


@pytest.mark.parametrize("pred", sorted(PREDICATES))
def test_witnesses_reevaluate(pred):
    for M in find_witnesses(range(1, 7), pred, limit=5):
        assert PREDICATES[pred].evaluate(M)
        assert validate_axioms(M).passed


def test_first_witness_roundtrips():
    s = enumerate_models(4)
    text = s.first_witness["DL-ne-cBA"]
    M = model_from_spec(parse_model(text))
    assert PREDICATES["DL-ne-cBA"].evaluate(M)


def test_limits_and_errors():
    assert len(find_witnesses(range(1, 6), "not-P1", limit=2)) == 2
    with pytest.raises(KeyError):
        find_witnesses([3], "no-such-predicate")
    with pytest.raises(SizeCapExceeded):
        find_witnesses([MAX_SEARCH_SIZE + 1], "not-P1")
    with pytest.raises(SizeCapExceeded):
        models_of_size(MAX_SEARCH_SIZE + 1)
    assert models_of_size(0) == []


def test_join_irreducibles():
    M = builtins()[6]
    L = M.lattice
    # top has the single lower cover k0+k1+kinf, so it is join-irreducible too
    assert [L.names[j] for j in join_irreducibles(L)] == ["i", "k0", "k1", "kinf", "top"]


def relabelled(M, rng):
    """Same model with shuffled label names, hence a different index order."""
    L = M.lattice
    fresh = ["v%02d" % k for k in range(M.size)]
    rng.shuffle(fresh)
    L2 = build_lattice(fresh, [(fresh[x], fresh[y]) for x, y in L.covers])
    pos = [L2.index(fresh[x]) for x in range(M.size)]
    t = [[None] * M.size for _ in range(M.size)]
    for x in range(M.size):
        for y in range(M.size):
            t[pos[x]][pos[y]] = pos[M.smash[x][y]]
    return Model(L2, tuple(map(tuple, t)))


POOL = builtins()[:8] + enumerated_upto(5)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(POOL), st.integers(0, 2 ** 32))
def test_canonical_code_is_isomorphism_invariant(M, seed):
    M2 = relabelled(M, random.Random(seed))
    assert canonical_code(M2) == canonical_code(M)


def test_size_three_models_are_the_two_chains():
    codes = {canonical_code(M) for M in models_of_size(3)}
    assert codes == {canonical_code(chain_i_model()), canonical_code(idempotent_chain_model())}


def test_size_seven_counts_and_dichotomy_finding():
    from smashlat.harness import check_dichotomy
    from smashlat.ops import structural_flags
    ms = models_of_size(7, workers=max(2, default_workers()))
    assert (len(enumerate_lattices(7)), len(ms)) == (53, 723)
    failing = [M for M in ms if check_dichotomy(M).status == "fails"]
    assert len(failing) == 5
    both = 0
    for M in ms:
        F = structural_flags(M, subset_cap=32)
        if F.holds("P3") and F.holds("P4"):
            both += 1
            assert check_dichotomy(M).notes["qualifying"] == 0, M.name
    assert both == 718
