import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from imperfect_games.game import (
    CoverGameStructure,
    GameError,
    GameStructure,
    Objective,
    encode_overlapping,
    knowledge_update,
    make_absorbing,
    post,
    validate,
)
from imperfect_games.io import GameFileError, dump_game, parse_game
from imperfect_games.oracle import random_game


def names(G, mask):
    return set(G.state_names(mask))


def test_fig1_is_valid(fig1):
    G, obj = fig1
    assert validate(G, obj).ok
    assert len(G.states) == 6 and len(G.observations) == 4


def test_missing_transition_is_a_totality_violation():
    G = GameStructure(["l"], "l", ["a"], [], ["o"], {"o": ["l"]})
    rep = validate(G)
    assert not rep.ok
    assert [v.invariant for v in rep.violations] == ["totality"]
    assert "'l'" in rep.violations[0].detail and "'a'" in rep.violations[0].detail


def test_dropping_a_state_from_gamma_breaks_the_partition(fig1):
    G, _ = fig1
    gamma = dict(G.gamma)
    gamma["o2"] = {"l2"}
    H = GameStructure(G.states, G.initial, G.alphabet, G.transitions, G.observations, gamma)
    rep = validate(H)
    assert [v.invariant for v in rep.violations] == ["partition"]
    assert "l2'" in rep.violations[0].detail


def test_overlapping_observations_are_reported():
    G = GameStructure(["x", "y"], "x", ["a"], [("x", "a", "y"), ("y", "a", "x")],
                      ["o1", "o2"], {"o1": ["x", "y"], "o2": ["y"]})
    assert [v.invariant for v in validate(G).violations] == ["partition"]


def test_objective_naming_a_state_is_rejected(fig1):
    G, _ = fig1
    rep = validate(G, Objective.reach(["l4"]))
    assert not rep.ok and "is a state" in rep.violations[0].detail


def test_parity_needs_every_priority(fig1):
    G, _ = fig1
    rep = validate(G, Objective.parity({"o1": 0, "o2": 1}))
    assert {v.detail for v in rep.violations} == {
        "no priority for observation 'o3'", "no priority for observation 'o4'"}


@pytest.mark.parametrize("target", [[], ["o1", "o2", "o3", "o4"]])
def test_degenerate_objectives_are_accepted(fig1, target):
    G, _ = fig1
    assert validate(G, Objective.reach(target)).ok


def test_post_examples(fig1):
    G, _ = fig1
    assert names(G, post(G, G.stateset(["l1"]), "a")) == {"l2", "l2'"}
    assert post(G, 0, "a") == 0
    assert names(G, post(G, G.stateset(["l2", "l2'"]), "b")) == {"l3", "l3'"}


def test_post_rejects_unknown_names(fig1):
    G, _ = fig1
    with pytest.raises(GameError):
        post(G, G.stateset(["l1"]), "c")
    with pytest.raises(GameError):
        G.stateset(["nowhere"])


def test_knowledge_update_examples(fig1):
    G, _ = fig1
    l1 = G.stateset(["l1"])
    assert names(G, knowledge_update(G, l1, "a", "o2")) == {"l2", "l2'"}
    assert knowledge_update(G, l1, "a", "o4") == 0
    assert names(G, knowledge_update(G, G.stateset(["l2", "l2'"]), "a", "o3")) == {"l3", "l3'"}


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(1, 7), k=st.integers(1, 3),
       m=st.integers(1, 4), data=st.data())
def test_post_splits_into_disjoint_knowledge_updates(seed, n, k, m, data):
    G = random_game(seed, n, k, min(m, n))
    assert validate(G).ok
    s = data.draw(st.integers(1, G.full))
    for a in G.alphabet:
        parts = [knowledge_update(G, s, a, o) for o in G.observations]
        union = 0
        for p in parts:
            assert p & union == 0
            union |= p
        assert union == post(G, s, a)
        assert any(parts)


def test_encode_partition_is_isomorphic(fig1):
    G, _ = fig1
    E = encode_overlapping(G)
    assert validate(E).ok
    assert sorted(E.states) == sorted(f"{l}|{G.observation_of(l)}" for l in G.states)
    assert len(E.transitions) == len(G.transitions)


def test_encode_two_state_covering():
    G = CoverGameStructure(["l1", "l2"], "l1", ["a"], [("l1", "a", "l2"), ("l2", "a", "l1")],
                           ["o1", "o2"], {"o1": ["l1", "l2"], "o2": ["l2"]})
    assert validate(G).ok
    E = encode_overlapping(G)
    assert sorted(E.states) == ["l1|o1", "l2|o1", "l2|o2"]
    assert validate(E).ok
    assert E.gamma["o2"] == {"l2|o2"}


def test_encode_rejects_uncovered_state():
    G = CoverGameStructure(["x", "y"], "x", ["a"], [("x", "a", "y"), ("y", "a", "x")],
                           ["o"], {"o": ["x"]})
    with pytest.raises(GameError):
        encode_overlapping(G)


@pytest.mark.parametrize("seed", range(25))
def test_encode_random_covering_counts_pairs(seed):
    rng = random.Random(seed)
    base = random_game(seed, 4, 2, 2)
    obs = ["p", "q", "r"]
    gamma = {o: {s for s in base.states if rng.random() < 0.5} for o in obs}
    for s in base.states:
        if not any(s in g for g in gamma.values()):
            gamma[rng.choice(obs)].add(s)
    obs = [o for o in obs if gamma[o]]
    gamma = {o: gamma[o] for o in obs}
    G = CoverGameStructure(base.states, base.initial, base.alphabet, base.transitions, obs, gamma)
    E = encode_overlapping(G)
    assert validate(E).ok
    pairs = {(l, o) for o in obs for l in gamma[o]}
    assert len(E.states) == sum(len(g) for g in gamma.values()) == len(pairs)
    assert set(E.states) == {f"{l}|{o}" for l, o in pairs}


def test_make_absorbing_turns_targets_into_sinks(fig1):
    G, _ = fig1
    A = make_absorbing(G, ["o3"])
    assert validate(A).ok
    for a in A.alphabet:
        assert names(A, post(A, A.stateset(["l3"]), a)) == {"l3"}


def test_game_file_round_trip(fig1):
    G, obj = fig1
    G2, obj2 = parse_game(dump_game(G, obj))
    assert G2.states == G.states and G2.transitions == G.transitions
    assert G2.gamma == G.gamma and obj2 == obj


def test_parse_error_reports_line():
    with pytest.raises(GameFileError, match=r":3:"):
        parse_game('{\n "states": ["a"],\n "initial": ,\n}', "g.game")


def test_schema_error_reports_field():
    data = {"states": ["a"], "initial": "a", "alphabet": ["x"],
            "transitions": [["a", "x"]], "observations": {"o": ["a"]}}
    with pytest.raises(GameFileError, match=r"\$\.transitions\[0\]"):
        parse_game(json.dumps(data))
    data["transitions"] = [["a", "x", "a"]]
    data["objective"] = {"kind": "Reach"}
    with pytest.raises(GameFileError, match=r"\$\.objective"):
        parse_game(json.dumps(data))
