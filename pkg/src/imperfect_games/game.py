"""Game structures of imperfect information.

A game is an arena ``(L, l0, Sigma, Delta, O, gamma)``: Player 1 picks a
letter, Player 2 resolves the nondeterminism, and Player 1 only sees the
observation ``o`` with ``l in gamma(o)``.

State sets are plain Python ints used as bit vectors over the canonical
state order (bit ``i`` is ``states[i]``).  Python ints are arbitrary
precision, so there is no fixed ceiling on the number of states; the
practical limit comes from the exponential constructions built on top.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping


class GameError(ValueError):
    """Malformed input: unknown names, bad masks, illegal prefixes."""


def iter_bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class GameStructure:
    """Imperfect-information arena.

    The constructor only normalises its inputs; totality and the partition
    property are checked by :func:`validate`, which reports violations as
    data instead of raising.
    """

    states: tuple
    initial: str
    alphabet: tuple
    transitions: frozenset
    observations: tuple
    gamma: Mapping[str, frozenset] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "observations", tuple(self.observations))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        object.__setattr__(
            self, "gamma", {o: frozenset(self.gamma.get(o, ())) for o in self.observations}
        )
        for name, seq in (("states", self.states), ("alphabet", self.alphabet),
                          ("observations", self.observations)):
            if len(set(seq)) != len(seq):
                raise GameError(f"duplicate entries in {name}")

    # -- interning -----------------------------------------------------------

    @cached_property
    def state_index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def letter_index(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def obs_index(self) -> dict:
        return {o: i for i, o in enumerate(self.observations)}

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def full(self) -> int:
        """The set ``L`` of all states."""
        return (1 << len(self.states)) - 1

    def stateset(self, names: Iterable[str]) -> int:
        mask = 0
        idx = self.state_index
        for name in names:
            try:
                mask |= 1 << idx[name]
            except KeyError:
                raise GameError(f"unknown state {name!r}") from None
        return mask

    def state_names(self, mask: int) -> tuple:
        return tuple(self.states[i] for i in iter_bits(mask))

    def check_mask(self, mask: int) -> int:
        if mask < 0 or mask >> self.n:
            raise GameError(f"state set {mask:#x} is not a subset of L")
        return mask

    def letter(self, sigma: str) -> int:
        try:
            return self.letter_index[sigma]
        except KeyError:
            raise GameError(f"unknown letter {sigma!r}") from None

    # -- derived tables ------------------------------------------------------

    @cached_property
    def succ(self) -> tuple:
        """``succ[a][l]`` is the bit mask of ``a``-successors of state ``l``."""
        table = [[0] * self.n for _ in self.alphabet]
        sidx, aidx = self.state_index, self.letter_index
        for src, a, dst in self.transitions:
            if src not in sidx or dst not in sidx or a not in aidx:
                raise GameError(f"transition {(src, a, dst)!r} references unknown names")
            table[aidx[a]][sidx[src]] |= 1 << sidx[dst]
        return tuple(tuple(row) for row in table)

    @cached_property
    def obs_masks(self) -> tuple:
        """Bit mask of ``gamma(o)`` for each observation, in declaration order."""
        return tuple(self.stateset(self.gamma[o]) for o in self.observations)

    @cached_property
    def obs_of(self) -> tuple:
        """Index of the observation of each state (first one, for coverings)."""
        out = [-1] * self.n
        for k, m in enumerate(self.obs_masks):
            for i in iter_bits(m):
                if out[i] < 0:
                    out[i] = k
        return tuple(out)

    @cached_property
    def initial_mask(self) -> int:
        return self.stateset([self.initial])

    def observation_of(self, state: str) -> str:
        return self.observations[self.obs_of[self.state_index[state]]]

    def observation_of_set(self, mask: int):
        """The unique observation containing ``mask``, or ``None``."""
        for k, m in enumerate(self.obs_masks):
            if mask & ~m == 0:
                return self.observations[k]
        return None

    def with_initial(self, state: str) -> "GameStructure":
        return type(self)(self.states, state, self.alphabet, self.transitions,
                          self.observations, self.gamma)


class CoverGameStructure(GameStructure):
    """Variant whose observations may overlap (a covering of ``L``)."""


class ObjectiveKind(str, Enum):
    REACH = "Reach"
    SAFE = "Safe"
    BUCHI = "Buchi"
    COBUCHI = "CoBuchi"
    PARITY = "Parity"


@dataclass(frozen=True)
class Objective:
    """Objective over observations: a target set or a priority map."""

    kind: ObjectiveKind
    target: frozenset = frozenset()
    priority: Mapping[str, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ObjectiveKind(self.kind))
        object.__setattr__(self, "target", frozenset(self.target))
        if self.priority is not None:
            object.__setattr__(self, "priority", dict(self.priority))

    @classmethod
    def reach(cls, target):
        return cls(ObjectiveKind.REACH, frozenset(target))

    @classmethod
    def safe(cls, target):
        return cls(ObjectiveKind.SAFE, frozenset(target))

    @classmethod
    def buchi(cls, target):
        return cls(ObjectiveKind.BUCHI, frozenset(target))

    @classmethod
    def cobuchi(cls, target):
        return cls(ObjectiveKind.COBUCHI, frozenset(target))

    @classmethod
    def parity(cls, priority):
        return cls(ObjectiveKind.PARITY, priority=dict(priority))

    def __hash__(self):
        prio = tuple(sorted(self.priority.items())) if self.priority else None
        return hash((self.kind, self.target, prio))


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    invariant: str
    detail: str

    def as_dict(self):
        return {"invariant": self.invariant, "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"valid": self.ok, "violations": [v.as_dict() for v in self.violations]}


def validate(G: GameStructure, objective: Objective | None = None) -> ValidationReport:
    """Check references, totality and the partition (or covering) property."""
    out = []
    states = set(G.states)
    letters = set(G.alphabet)
    if G.initial not in states:
        out.append(Violation("initial", f"initial state {G.initial!r} not in L"))
    bad_refs = False
    for src, a, dst in sorted(G.transitions):
        for role, name, pool in (("source", src, states), ("target", dst, states),
                                 ("letter", a, letters)):
            if name not in pool:
                bad_refs = True
                out.append(Violation("transitions", f"{role} {name!r} of {(src, a, dst)} unknown"))
    for o in G.observations:
        unknown = G.gamma[o] - states
        if unknown:
            bad_refs = True
            out.append(Violation("observations", f"{o!r} names unknown states {sorted(unknown)}"))

    if not bad_refs:
        for a_idx, a in enumerate(G.alphabet):
            row = G.succ[a_idx]
            for i, s in enumerate(G.states):
                if not row[i]:
                    out.append(Violation("totality", f"no {a!r}-successor from {s!r}"))
        covering = isinstance(G, CoverGameStructure)
        seen = {}
        for o in G.observations:
            if not G.gamma[o]:
                out.append(Violation("partition", f"observation {o!r} is empty"))
            for s in sorted(G.gamma[o]):
                if s in seen and not covering:
                    out.append(Violation("partition",
                                         f"state {s!r} in both {seen[s]!r} and {o!r}"))
                seen.setdefault(s, o)
        for s in G.states:
            if s not in seen:
                out.append(Violation("partition", f"state {s!r} uncovered by observations"))

    if objective is not None:
        out.extend(_check_objective(G, objective))
    return ValidationReport(tuple(out))


def _check_objective(G, obj):
    out = []
    obs = set(G.observations)

    def describe(name):
        if name in G.state_index:
            return f"{name!r} is a state, objectives must name observations"
        return f"unknown observation {name!r}"

    if obj.kind is ObjectiveKind.PARITY:
        prio = obj.priority or {}
        for o in sorted(set(prio) - obs):
            out.append(Violation("objective", describe(o)))
        for o in G.observations:
            if o not in prio:
                out.append(Violation("objective", f"no priority for observation {o!r}"))
            elif not isinstance(prio[o], int) or prio[o] < 0:
                out.append(Violation("objective", f"priority of {o!r} must be a nonnegative int"))
    else:
        for o in sorted(obj.target - obs):
            out.append(Violation("objective", describe(o)))
    return out


# -- knowledge primitives -------------------------------------------------------


def post_mask(G: GameStructure, s: int, a: int) -> int:
    """``Post_a(s)`` with a letter index; no input checks (hot path)."""
    row = G.succ[a]
    out = 0
    while s:
        low = s & -s
        out |= row[low.bit_length() - 1]
        s ^= low
    return out


def post(G: GameStructure, s: int, sigma: str) -> int:
    """States reachable from some member of ``s`` by one ``sigma`` transition."""
    return post_mask(G, G.check_mask(s), G.letter(sigma))


def knowledge_update(G: GameStructure, s: int, sigma: str, o: str) -> int:
    """Knowledge after playing ``sigma`` from knowledge ``s`` and observing ``o``.

    An empty result means ``o`` cannot be observed.
    """
    try:
        k = G.obs_index[o]
    except KeyError:
        raise GameError(f"unknown observation {o!r}") from None
    return post(G, s, sigma) & G.obs_masks[k]


def split_by_observation(G: GameStructure, mask: int):
    """Nonempty pieces ``mask & gamma(o)``, in observation order."""
    return [mask & m for m in G.obs_masks if mask & m]


# -- transformations -------------------------------------------------------------


def encode_overlapping(G: CoverGameStructure, initial_observation: str | None = None) -> GameStructure:
    """Turn a covering into a partition over pairs ``(l, o)`` with ``l in gamma(o)``.

    Pair ``(l, o)`` is named ``"l|o"``.  The initial pair uses the first
    observation (in declaration order) that contains ``l0`` unless
    ``initial_observation`` is given.
    """
    report = validate(CoverGameStructure(G.states, G.initial, G.alphabet, G.transitions,
                                         G.observations, G.gamma))
    if not report.ok:
        raise GameError("not a covering game: " + "; ".join(v.detail for v in report.violations))

    def pair(l, o):
        return f"{l}|{o}"

    members = {l: [o for o in G.observations if l in G.gamma[o]] for l in G.states}
    states = [pair(l, o) for l in G.states for o in members[l]]
    if initial_observation is None:
        initial_observation = members[G.initial][0]
    elif initial_observation not in members[G.initial]:
        raise GameError(f"{G.initial!r} is not in gamma({initial_observation!r})")
    transitions = {
        (pair(l, o), a, pair(l2, o2))
        for (l, a, l2) in G.transitions
        for o in members[l]
        for o2 in members[l2]
    }
    gamma = {o: {pair(l, o) for l in G.gamma[o]} for o in G.observations}
    return GameStructure(states, pair(G.initial, initial_observation), G.alphabet,
                         transitions, G.observations, gamma)


def make_absorbing(G: GameStructure, targets: Iterable[str]) -> GameStructure:
    """Replace every outgoing edge of a target-observation state by a self-loop.

    Reachability of ``targets`` then coincides with visiting them infinitely
    often, which lets a Buchi solver decide reachability.
    """
    tgt = set()
    for o in targets:
        tgt |= G.gamma[o]
    transitions = {t for t in G.transitions if t[0] not in tgt}
    transitions |= {(s, a, s) for s in tgt for a in G.alphabet}
    return GameStructure(G.states, G.initial, G.alphabet, transitions,
                         G.observations, G.gamma)


def perfect_information(G: GameStructure) -> GameStructure:
    """Same arena with every state observable on its own (``gamma(l) = {l}``)."""
    return GameStructure(G.states, G.initial, G.alphabet, G.transitions,
                         G.states, {s: {s} for s in G.states})
