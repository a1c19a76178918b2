"""Fixed-point evaluation on the subset and antichain lattices, and sure winning.

``eval_subset`` works on an explicit :class:`SubsetGame`; ``eval_antichain``
works directly on the imperfect-information game and never enumerates
knowledge sets.  On downward-closed valuations the maximal elements of the
first equal the second.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, field

from .antichain import BOTTOM, Antichain, dominates, join, maximal, meet, top
from .formula import (And, Atom, FormulaError, Mu, Nu, Or, Pre, Var, disj, false_formula,
                      free_vars)
from .game import GameStructure, Objective, ObjectiveKind, iter_bits, post_mask
from .knowledge import SubsetGame
from .report import SolveReport


@dataclass
class EvalStats:
    """Iteration counts per bound variable and the largest lattice value seen."""

    iterations: dict = field(default_factory=dict)
    evaluations: dict = field(default_factory=dict)
    max_size: int = 0

    def record(self, var, iters, size):
        self.iterations[var] = self.iterations.get(var, 0) + iters
        self.evaluations[var] = self.evaluations.get(var, 0) + 1
        self.max_size = max(self.max_size, size)

    def as_dict(self):
        return {
            "iterations": dict(sorted(self.iterations.items())),
            "fixpoint_evaluations": dict(sorted(self.evaluations.items())),
            "max_lattice_size": self.max_size,
        }


def _evaluate(lat, phi, env, stats):
    match phi:
        case Atom(o):
            return lat.atom(o)
        case Var(name):
            try:
                return env[name]
            except KeyError:
                raise FormulaError(f"unbound variable {name!r}") from None
        case Or(l, r):
            return lat.join(_evaluate(lat, l, env, stats), _evaluate(lat, r, env, stats))
        case And(l, r):
            return lat.meet(_evaluate(lat, l, env, stats), _evaluate(lat, r, env, stats))
        case Pre(b):
            return lat.cpre(_evaluate(lat, b, env, stats))
        case Mu(v, b) | Nu(v, b):
            x = lat.bottom if isinstance(phi, Mu) else lat.top
            n = 0
            biggest = lat.size(x)
            while True:
                n += 1
                nx = _evaluate(lat, b, {**env, v: x}, stats)
                biggest = max(biggest, lat.size(nx))
                if nx == x:
                    break
                x = nx
            stats.record(v, n, biggest)
            return x
    raise FormulaError(f"not a formula: {phi!r}")


# -- subset lattice -----------------------------------------------------------


class _SubsetLattice:
    """Values are bit masks over the indices of the subset game's states."""

    def __init__(self, GK: SubsetGame):
        self.GK = GK
        G = GK.game
        n = len(GK.states)
        self.bottom = 0
        self.top = (1 << n) - 1
        self.succ_masks = [
            [sum(1 << j for j in row) for row in per_letter] for per_letter in GK.succ
        ]
        self._atoms = {}
        for k, o in enumerate(G.observations):
            m = G.obs_masks[k]
            self._atoms[o] = sum(1 << i for i, s in enumerate(GK.states) if s & ~m == 0)

    def atom(self, o):
        try:
            return self._atoms[o]
        except KeyError:
            raise FormulaError(f"unknown observation {o!r}") from None

    def join(self, a, b):
        return a | b

    def meet(self, a, b):
        return a & b

    def cpre(self, q):
        out = 0
        nq = ~q
        for i, rows in enumerate(self.succ_masks):
            for m in rows:
                if m & nq == 0:
                    out |= 1 << i
                    break
        return out

    def size(self, q):
        return q.bit_count()

    def encode(self, family) -> int:
        idx = self.GK.index
        out = 0
        for s in family:
            if s not in idx:
                raise FormulaError(f"state set {s:#x} is not a state of the subset game")
            out |= 1 << idx[s]
        return out

    def decode(self, q) -> frozenset:
        return frozenset(self.GK.states[i] for i in iter_bits(q))


def cpre_subset(GK: SubsetGame, q) -> frozenset:
    """Knowledge sets with a letter whose every successor lies in ``q``."""
    lat = _SubsetLattice(GK)
    return lat.decode(lat.cpre(lat.encode(q)))


def eval_subset(GK: SubsetGame, phi, env=None, stats: EvalStats | None = None) -> frozenset:
    """Value of ``phi`` in the lattice of sets of knowledge sets (states of ``GK``)."""
    lat = _SubsetLattice(GK)
    env = {k: lat.encode(v) for k, v in (env or {}).items()}
    _check_bound(phi, env)
    return lat.decode(_evaluate(lat, phi, env, stats if stats is not None else EvalStats()))


# -- antichain lattice -----------------------------------------------------------

_PRE_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _pre_tables(G: GameStructure):
    """Per ``(letter, observation)``: ``(bit_l, succ_a(l) & gamma(o))`` pairs."""
    tables = _PRE_CACHE.get(G)
    if tables is None:
        tables = []
        for a in range(len(G.alphabet)):
            row = G.succ[a]
            per_obs = []
            for m in G.obs_masks:
                per_obs.append(tuple((1 << l, row[l] & m) for l in range(G.n)))
            tables.append(tuple(per_obs))
        tables = tuple(tables)
        _PRE_CACHE[G] = tables
    return tables


def _pre_set(pairs, f: int) -> int:
    # {l | succ_a(l) & gamma(o) subset of f}
    nf = ~f
    out = 0
    for bit, need in pairs:
        if need & nf == 0:
            out |= bit
    return out


def cpre_letter(G: GameStructure, q: Antichain, a: int) -> Antichain:
    """Maximal ``s`` with ``Post_a(s) & gamma(o)`` inside an element of ``q`` for all ``o``.

    For a fixed letter the condition factors over observations, so the answer
    is the meet over ``o`` of the antichains of per-element preimages; this is
    the same as enumerating every choice function ``o -> q`` and keeping the
    maximal candidates.
    """
    if not q:
        return BOTTOM
    acc = None
    for pairs in _pre_tables(G)[a]:
        layer = maximal(_pre_set(pairs, f) for f in q.elements)
        acc = layer if acc is None else meet(acc, layer)
        if not acc:
            return BOTTOM
    return acc


def cpre_antichain(G: GameStructure, q: Antichain) -> Antichain:
    """Antichain controllable predecessor, computed on ``G`` itself."""
    out = BOTTOM
    for a in range(len(G.alphabet)):
        out = join(out, cpre_letter(G, q, a))
    return out


class _AntichainLattice:
    def __init__(self, G: GameStructure):
        self.G = G
        self.bottom = BOTTOM
        self.top = top(G)
        self._atoms = {o: Antichain((G.obs_masks[k],)) for k, o in enumerate(G.observations)}

    def atom(self, o):
        try:
            return self._atoms[o]
        except KeyError:
            raise FormulaError(f"unknown observation {o!r}") from None

    join = staticmethod(join)
    meet = staticmethod(meet)

    def cpre(self, q):
        return cpre_antichain(self.G, q)

    def size(self, q):
        return len(q)


def eval_antichain(G: GameStructure, phi, env=None, stats: EvalStats | None = None) -> Antichain:
    """Value of ``phi`` in the lattice of antichains over ``G``."""
    env = dict(env or {})
    _check_bound(phi, env)
    return _evaluate(_AntichainLattice(G), phi, env, stats if stats is not None else EvalStats())


def _check_bound(phi, env):
    missing = free_vars(phi) - set(env)
    if missing:
        raise FormulaError(f"unbound variables: {sorted(missing)}")


# -- characteristic formulas -------------------------------------------------------


def _target_atom(targets, observations):
    order = list(observations) if observations is not None else sorted(targets)
    return disj((Atom(o) for o in order if o in targets), false_var="Ff")


def characteristic_formula(obj: Objective, observations=None):
    """Closed formula whose value is the sure-winning region for ``obj``.

    ``observations`` only fixes the order of atoms in the disjunctions.
    """
    T = obj.target
    match obj.kind:
        case ObjectiveKind.REACH:
            return Mu("X", Or(_target_atom(T, observations), Pre(Var("X"))))
        case ObjectiveKind.SAFE:
            return Nu("X", And(_target_atom(T, observations), Pre(Var("X"))))
        case ObjectiveKind.BUCHI:
            return Nu("Y", Mu("X", Or(Pre(Var("X")),
                                      And(_target_atom(T, observations), Pre(Var("Y"))))))
        case ObjectiveKind.COBUCHI:
            return Mu("Y", Nu("X", Or(And(_target_atom(T, observations), Pre(Var("X"))),
                                      Pre(Var("Y")))))
        case ObjectiveKind.PARITY:
            prio = obj.priority
            order = list(observations) if observations is not None else sorted(prio)
            d = max(prio.values(), default=0)
            parts = []
            for i in range(d + 1):
                cls = [o for o in order if prio.get(o) == i]
                if cls:
                    parts.append(And(disj(Atom(o) for o in cls), Pre(Var(f"X{i}"))))
            body = disj(parts, false_var="Ff")
            for i in reversed(range(d + 1)):
                body = (Nu if i % 2 == 0 else Mu)(f"X{i}", body)
            return body
    raise ValueError(f"unsupported objective kind {obj.kind}")


# -- sure winning ------------------------------------------------------------------


def _successors_dominated(G, w, a, q) -> bool:
    p = post_mask(G, w, a)
    for m in G.obs_masks:
        t = p & m
        if t and not dominates(q, t):
            return False
    return True


@dataclass(frozen=True)
class KnowledgeStrategy:
    """Letter choice as a function of Player 1's current knowledge.

    ``entries`` are ``(rank, element, letter)``: at knowledge ``s`` play the
    letter of the first entry (lowest rank, canonical order) whose element
    contains ``s``.  Reachability-style entries of rank ``r > 0`` lead to
    knowledge of rank below ``r``.
    """

    entries: tuple

    def letter_for(self, s: int):
        for _, e, a in self.entries:
            if s & e == s:
                return a
        return None

    def as_json(self, G):
        return [
            {"rank": r, "knowledge": sorted(G.state_names(e)), "letter": G.alphabet[a]}
            for r, e, a in self.entries
        ]


def _first_letter(G, w, q):
    for a in range(len(G.alphabet)):
        if _successors_dominated(G, w, a, q):
            return a
    return None


def extract_strategy(G: GameStructure, obj: Objective, winning: Antichain):
    """Knowledge-based witness for Reach, Safe and Buchi; ``None`` otherwise."""
    tmasks = [G.obs_masks[G.obs_index[o]] for o in G.observations if o in obj.target]
    target = Antichain(tmasks)

    def in_target(w):
        return any(w & ~m == 0 for m in tmasks)

    if obj.kind is ObjectiveKind.SAFE:
        return KnowledgeStrategy(tuple((0, w, _first_letter(G, w, winning)) for w in winning))
    if obj.kind is ObjectiveKind.REACH:
        entries = [(0, w, 0) for w in target]
        prev = target
        stage = 0
        while True:
            stage += 1
            cur = join(target, cpre_antichain(G, prev))
            if cur == prev:
                break
            entries += [(stage, w, _first_letter(G, w, prev)) for w in cur
                        if not dominates(prev, w)]
            prev = cur
        return KnowledgeStrategy(tuple(entries))
    if obj.kind is ObjectiveKind.BUCHI:
        stay = meet(target, cpre_antichain(G, winning))
        entries = [(0, w, _first_letter(G, w, winning)) for w in stay]
        prev = stay
        stage = 0
        while True:
            stage += 1
            cur = join(cpre_antichain(G, prev), stay)
            if cur == prev:
                break
            for w in cur:
                if dominates(prev, w):
                    continue
                a = _first_letter(G, w, prev)
                if a is None and in_target(w):
                    a = _first_letter(G, w, winning)
                entries.append((stage, w, a))
            prev = cur
        return KnowledgeStrategy(tuple(entries))
    return None


def solve_sure(G: GameStructure, obj: Objective) -> SolveReport:
    """Sure winning from ``l0`` with a deterministic observation-based strategy."""
    phi = characteristic_formula(obj, G.observations)
    stats = EvalStats()
    winning = eval_antichain(G, phi, stats=stats)
    verdict = dominates(winning, G.initial_mask)
    strategy = extract_strategy(G, obj, winning) if verdict else None
    return SolveReport(
        verdict=verdict,
        mode="sure",
        objective=obj,
        winning={"antichain": winning.to_names(G)},
        strategy=strategy.as_json(G) if strategy is not None else None,
        stats={"formula": str(phi), **stats.as_dict(), "antichain_size": len(winning),
               "states": G.n},
        raw_winning=winning,
        raw_strategy=strategy,
    )


__all__ = [
    "EvalStats", "KnowledgeStrategy", "characteristic_formula", "cpre_antichain",
    "cpre_letter", "cpre_subset", "eval_antichain", "eval_subset", "extract_strategy",
    "false_formula", "solve_sure",
]
