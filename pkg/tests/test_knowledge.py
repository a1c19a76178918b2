import pytest
from hypothesis import given, settings, strategies as st

from imperfect_games.game import GameError, GameStructure, post
from imperfect_games.knowledge import build_gk, build_knw, buchi_targets, map_prefix_h
from imperfect_games.oracle import random_game

# Knw(G) for the fig1 fixture, traced by hand from its edges.
FIG4_EDGES = {
    ("{l1}|l1", "a", "{l2,l2'}|l2"), ("{l1}|l1", "a", "{l2,l2'}|l2'"),
    ("{l1}|l1", "b", "{l2,l2'}|l2"), ("{l1}|l1", "b", "{l2,l2'}|l2'"),
    ("{l2,l2'}|l2", "a", "{l3,l3'}|l3"), ("{l2,l2'}|l2", "b", "{l3,l3'}|l3'"),
    ("{l2,l2'}|l2'", "a", "{l3,l3'}|l3'"), ("{l2,l2'}|l2'", "b", "{l3,l3'}|l3"),
    ("{l3,l3'}|l3", "a", "{l1}|l1"), ("{l3,l3'}|l3", "b", "{l1}|l1"),
    ("{l3,l3'}|l3'", "a", "{l4}|l4"), ("{l3,l3'}|l3'", "b", "{l4}|l4"),
    ("{l4}|l4", "a", "{l4}|l4"), ("{l4}|l4", "b", "{l4}|l4"),
}


def knw_edges(H):
    A = H.game.alphabet
    return {(H.name(q), A[a], H.name(t))
            for q, row in enumerate(H.succ) for a, ts in enumerate(row) for t in ts}


def small_games():
    return st.builds(lambda seed, n, k, m: random_game(seed, n, k, min(m, n)),
                     st.integers(0, 10**6), st.integers(1, 6), st.integers(1, 3),
                     st.integers(1, 3))


def test_fig1_gk_states(fig1):
    G, _ = fig1
    GK = build_gk(G)
    assert {GK.name(s) for s in GK.states} == {"{l1}", "{l2,l2'}", "{l3,l3'}", "{l4}"}
    l33 = G.stateset(["l3", "l3'"])
    assert {GK.name(t) for t in GK.successors(l33, G.letter("a"))} == {"{l1}", "{l4}"}


def test_fig1_knw_is_fig4(fig1):
    G, _ = fig1
    H = build_knw(G)
    assert len(H) == 6
    assert knw_edges(H) == FIG4_EDGES
    assert H.class_of(H.initial) == (H.initial,)
    assert len(H.class_of(H.lookup(["l2", "l2'"], "l2"))) == 2


def test_buchi_targets_fig1(fig1):
    G, _ = fig1
    H = build_knw(G)
    assert {H.name(q) for q in buchi_targets(H, ["o4"])} == {"{l4}|l4"}
    assert {H.name(q) for q in buchi_targets(H, ["o3"])} == {"{l3,l3'}|l3", "{l3,l3'}|l3'"}


def test_perfect_information_constructions_are_isomorphic():
    G0 = random_game(7, 5, 2, 5)
    G = GameStructure(G0.states, G0.initial, G0.alphabet, G0.transitions,
                      G0.states, {s: [s] for s in G0.states})
    GK, H = build_gk(G), build_knw(G)
    assert all(s.bit_count() == 1 for s in GK.states)
    assert all(s == 1 << l for s, l in H.states)
    assert len(GK) == len(H)
    for i, s in enumerate(GK.states):
        for a in range(len(G.alphabet)):
            assert {GK.states[j] for j in GK.succ[i][a]} == {1 << l for l in
                                                             _bits(post(G, s, G.alphabet[a]))}


def _bits(m):
    return [i for i in range(m.bit_length()) if m >> i & 1]


@settings(max_examples=80, deadline=None)
@given(small_games())
def test_gk_invariants(G):
    GK = build_gk(G)
    assert len(GK) <= 2 ** G.n - 1
    for i, s in enumerate(GK.states):
        for m in G.obs_masks:
            assert s & m in (0, s)
        for a in range(len(G.alphabet)):
            p = post(G, s, G.alphabet[a])
            want = {p & m for m in G.obs_masks if p & m}
            assert {GK.states[j] for j in GK.succ[i][a]} == want
            assert want


@settings(max_examples=80, deadline=None)
@given(small_games())
def test_knw_invariants(G):
    H = build_knw(G)
    gk = set(build_gk(G).states)
    assert {s for s, _ in H.states} == gk
    assert len(H) <= sum(s.bit_count() for s in gk)
    edges = set()
    for q, (s, l) in enumerate(H.states):
        assert s >> l & 1
        for a in range(len(G.alphabet)):
            assert H.succ[q][a]
            by_target_state = {}
            for t in H.succ[q][a]:
                s2, l2 = H.states[t]
                assert G.succ[a][l] >> l2 & 1
                assert s2 == post(G, s, G.alphabet[a]) & G.obs_masks[G.obs_of[l2]]
                by_target_state.setdefault(l2, set()).add(s2)
                edges.add((q, a, t))
            assert all(len(v) == 1 for v in by_target_state.values())
    # backward class closure
    for q1, a, t1 in edges:
        for t2 in H.class_of(t1):
            assert any((q2, a, t2) in edges for q2 in H.class_of(q1))


def test_map_prefix_h_examples(fig1):
    G, _ = fig1
    assert map_prefix_h(G, ["l1"]) == [(G.stateset(["l1"]), "l1")]
    got = map_prefix_h(G, ["l1", "a", "l2", "b", "l3'"])
    assert got == [(G.stateset(["l1"]), "l1"), "a", (G.stateset(["l2", "l2'"]), "l2"),
                   "b", (G.stateset(["l3", "l3'"]), "l3'")]


def test_map_prefix_h_equivalent_prefixes(fig1):
    G, _ = fig1
    p1 = map_prefix_h(G, ["l1", "a", "l2", "b", "l3'"])
    p2 = map_prefix_h(G, ["l1", "a", "l2'", "b", "l3"])
    assert [x[0] if isinstance(x, tuple) else x for x in p1] == \
           [x[0] if isinstance(x, tuple) else x for x in p2]


@pytest.mark.parametrize("prefix", [[], ["l2"], ["l1", "a"], ["l1", "a", "l4"]])
def test_map_prefix_h_rejects_illegal(fig1, prefix):
    G, _ = fig1
    with pytest.raises(GameError):
        map_prefix_h(G, prefix)


@settings(max_examples=50, deadline=None)
@given(small_games(), st.randoms(use_true_random=False))
def test_map_prefix_h_lands_in_knw(G, rng):
    H = build_knw(G)
    prefix = [G.initial]
    for _ in range(6):
        l = G.state_index[prefix[-1]]
        a = rng.randrange(len(G.alphabet))
        prefix += [G.alphabet[a], G.states[rng.choice(_bits(G.succ[a][l]))]]
    mapped = map_prefix_h(G, prefix)
    for x in mapped[::2]:
        H.lookup(x[0], x[1])
