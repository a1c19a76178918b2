from itertools import combinations

from hypothesis import given, settings, strategies as st

from imperfect_games.antichain import BOTTOM, Antichain, dominates, join, leq, maximal, meet

N = 6


def m(*elems):
    return sum(1 << e for e in elems)


def down(q):
    """Explicit downward closure as a set of nonempty masks."""
    out = set()
    for s in q:
        bits = [i for i in range(N) if s >> i & 1]
        for r in range(1, len(bits) + 1):
            for c in combinations(bits, r):
                out.add(sum(1 << i for i in c))
    return out


antichains = st.lists(st.integers(1, (1 << N) - 1), max_size=6).map(maximal)


def test_maximal_examples():
    assert maximal([m(1), m(1, 2), m(3)]) == Antichain([m(1, 2), m(3)])
    assert maximal([0]) == BOTTOM
    assert maximal(range(1, 8)) == Antichain([m(0, 1, 2)])


def test_leq_examples():
    assert leq(BOTTOM, Antichain([m(1)]))
    assert leq(Antichain([m(1)]), Antichain([m(1, 2)]))
    assert not leq(Antichain([m(1, 2)]), Antichain([m(1)]))


def test_join_meet_examples():
    q = Antichain([m(1), m(2, 3)])
    assert join(q, BOTTOM) == q
    assert join(Antichain([m(1)]), Antichain([m(1, 2)])) == Antichain([m(1, 2)])
    assert meet(q, Antichain([(1 << N) - 1])) == q
    assert meet(Antichain([m(1, 2)]), Antichain([m(2, 3)])) == Antichain([m(2)])


def test_dominates_examples():
    assert not dominates(BOTTOM, m(1))
    assert dominates(Antichain([m(1, 2)]), m(1))


def test_canonical_order_is_deterministic():
    a = Antichain([m(3), m(0, 1), m(2)])
    b = Antichain([m(2), m(3), m(0, 1)])
    assert a == b and a.elements == b.elements == (m(2), m(3), m(0, 1))


@settings(max_examples=200, deadline=None)
@given(antichains)
def test_invariants(q):
    assert 0 not in q.elements
    for s in q:
        for t in q:
            assert s == t or s & t != s


@settings(max_examples=200, deadline=None)
@given(antichains, antichains)
def test_leq_join_meet_match_enumeration(q, r):
    assert leq(q, r) == (down(q) <= down(r))
    assert down(join(q, r)) == down(q) | down(r)
    assert down(meet(q, r)) == down(q) & down(r)


@settings(max_examples=200, deadline=None)
@given(antichains, st.integers(1, (1 << N) - 1))
def test_dominates_matches_enumeration(q, s):
    assert dominates(q, s) == (s in down(q))


@settings(max_examples=150, deadline=None)
@given(antichains, antichains, antichains)
def test_partial_order_and_lattice_laws(a, b, c):
    assert leq(a, a)
    if leq(a, b) and leq(b, a):
        assert a == b
    if leq(a, b) and leq(b, c):
        assert leq(a, c)
    j, mt = join(a, b), meet(a, b)
    assert leq(a, j) and leq(b, j) and leq(mt, a) and leq(mt, b)
    if leq(a, c) and leq(b, c):
        assert leq(j, c)
    if leq(c, a) and leq(c, b):
        assert leq(c, mt)


@settings(max_examples=150, deadline=None)
@given(antichains)
def test_maximal_is_idempotent_and_ignores_closure(q):
    assert maximal(q) == q
    assert maximal(down(q)) == q
