"""Perfect-information games over Player 1's knowledge.

``build_gk`` gives the knowledge-based subset construction used for sure
winning; ``build_knw`` gives the game over (knowledge, state) pairs used for
almost-sure winning.  Both are built breadth-first from the initial state.
The ``full=True`` variants enumerate the whole state space instead and only
exist so that tests can compare against unpruned lattices.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .game import GameError, GameStructure, iter_bits, post_mask


@dataclass(frozen=True, eq=False)
class SubsetGame:
    """Knowledge sets with ``(s, a, s')`` iff ``s' = Post_a(s) & gamma(o)`` is nonempty.

    ``succ[i][a]`` lists the indices of the ``a``-successors of ``states[i]``.
    """

    game: GameStructure
    states: tuple
    succ: tuple
    full: bool = False
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {s: i for i, s in enumerate(self.states)})

    @property
    def initial(self) -> int:
        return self.game.initial_mask

    def __len__(self):
        return len(self.states)

    def observation(self, s: int):
        return self.game.observation_of_set(s)

    def successors(self, s: int, a: int) -> tuple:
        return tuple(self.states[j] for j in self.succ[self.index[s]][a])

    def name(self, s: int) -> str:
        return "{" + ",".join(self.game.state_names(s)) + "}"


def _successor_sets(G: GameStructure, s: int, a: int):
    p = post_mask(G, s, a)
    return [p & m for m in G.obs_masks if p & m]


def build_gk(G: GameStructure, full: bool = False) -> SubsetGame:
    """Knowledge-based subset construction, reachable from ``{l0}`` unless ``full``."""
    letters = range(len(G.alphabet))
    if full:
        states = sorted(range(1, G.full + 1), key=lambda m: (m.bit_count(), m))
    else:
        states = [G.initial_mask]
        seen = {G.initial_mask}
        queue = deque(states)
        while queue:
            s = queue.popleft()
            for a in letters:
                for t in _successor_sets(G, s, a):
                    if t not in seen:
                        seen.add(t)
                        states.append(t)
                        queue.append(t)
    index = {s: i for i, s in enumerate(states)}
    succ = tuple(
        tuple(tuple(index[t] for t in _successor_sets(G, s, a)) for a in letters)
        for s in states
    )
    return SubsetGame(G, tuple(states), succ, full)


@dataclass(frozen=True, eq=False)
class KnwGame:
    """Game over pairs ``(s, l)``; ``states[i] = (mask, state_index)``.

    ``classes`` maps a knowledge mask to the indices of all states sharing it
    (the equivalence classes of pairs with equal knowledge).
    """

    game: GameStructure
    states: tuple
    succ: tuple
    full: bool = False
    index: dict = field(init=False, repr=False)
    classes: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {q: i for i, q in enumerate(self.states)})
        classes: dict = {}
        for i, (s, _) in enumerate(self.states):
            classes.setdefault(s, []).append(i)
        object.__setattr__(self, "classes", {s: tuple(v) for s, v in classes.items()})

    initial = 0

    def __len__(self):
        return len(self.states)

    def class_of(self, q: int) -> tuple:
        return self.classes[self.states[q][0]]

    def name(self, q: int) -> str:
        s, l = self.states[q]
        return "{" + ",".join(self.game.state_names(s)) + "}|" + self.game.states[l]

    def lookup(self, knowledge, state: str) -> int:
        """Index of the pair with the given knowledge (names or mask) and state."""
        G = self.game
        s = knowledge if isinstance(knowledge, int) else G.stateset(knowledge)
        return self.index[(s, G.state_index[state])]


def _knw_successors(G: GameStructure, s: int, l: int, a: int):
    p = post_mask(G, s, a)
    out = []
    for l2 in iter_bits(G.succ[a][l]):
        out.append((p & G.obs_masks[G.obs_of[l2]], l2))
    return out


def build_knw(G: GameStructure, full: bool = False) -> KnwGame:
    """Knowledge/state product, reachable from ``({l0}, l0)`` unless ``full``."""
    letters = range(len(G.alphabet))
    q0 = (G.initial_mask, G.state_index[G.initial])
    if full:
        states = [q0]
        seen = {q0}
        for m in G.obs_masks:
            idx = list(iter_bits(m))
            for r in range(1, len(idx) + 1):
                for combo in combinations(idx, r):
                    s = sum(1 << i for i in combo)
                    for l in combo:
                        if (s, l) not in seen:
                            seen.add((s, l))
                            states.append((s, l))
    else:
        states = [q0]
        seen = {q0}
        queue = deque(states)
        while queue:
            s, l = queue.popleft()
            for a in letters:
                for q in _knw_successors(G, s, l, a):
                    if q not in seen:
                        seen.add(q)
                        states.append(q)
                        queue.append(q)
    index = {q: i for i, q in enumerate(states)}
    succ = tuple(
        tuple(tuple(sorted({index[t] for t in _knw_successors(G, s, l, a)})) for a in letters)
        for (s, l) in states
    )
    return KnwGame(G, tuple(states), succ, full)


def buchi_targets(H: KnwGame, targets) -> frozenset:
    """Pairs whose knowledge lies inside a target observation."""
    G = H.game
    masks = [G.obs_masks[G.obs_index[o]] for o in targets]
    return frozenset(i for i, (s, _) in enumerate(H.states) if any(s & ~m == 0 for m in masks))


def map_prefix_h(G: GameStructure, prefix) -> list:
    """Map a play prefix ``[l0, a0, l1, ...]`` of ``G`` to the matching prefix of Knw(G).

    States of the result are ``(knowledge_mask, state_name)`` pairs.
    """
    prefix = list(prefix)
    if not prefix or len(prefix) % 2 == 0:
        raise GameError("a prefix alternates states and letters and ends with a state")
    if prefix[0] != G.initial:
        raise GameError(f"prefix must start at the initial state {G.initial!r}")
    s = G.initial_mask
    out = [(s, prefix[0])]
    for i in range(1, len(prefix), 2):
        a, src, dst = prefix[i], prefix[i - 1], prefix[i + 1]
        if (src, a, dst) not in G.transitions:
            raise GameError(f"illegal step {(src, a, dst)!r}")
        k = G.obs_of[G.state_index[dst]]
        s = post_mask(G, s, G.letter(a)) & G.obs_masks[k]
        out.extend([a, (s, dst)])
    return out
