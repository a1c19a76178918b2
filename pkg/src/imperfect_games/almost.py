"""Almost-sure winning for Buchi objectives.

The explicit solver runs the nested fixed point
``nu Y . mu X . Apre(Y, X) or (B and Spre(Y))`` on the knowledge/state game
``H``; letters are only allowed if they keep *every* state with the same
knowledge inside ``Y``, which is what makes the resulting uniform strategy
observation-based.

The direct solver computes the same set without building ``H``: a set of
pairs ``(s, l)`` that is downward closed for ``(s, l) <= (s', l)`` iff
``s`` is a subset of ``s'`` is stored as one antichain of knowledge sets per
state ``l``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .antichain import BOTTOM, Antichain, dominates, join, maximal, meet
from .game import GameStructure, Objective, ObjectiveKind, iter_bits, make_absorbing
from .knowledge import KnwGame, build_knw, buchi_targets
from .mucalc import cpre_letter
from .report import SolveReport


class UnsupportedObjective(ValueError):
    pass


def _check_subset(H, Y):
    bad = [q for q in Y if not 0 <= q < len(H.states)]
    if bad:
        raise ValueError(f"not states of H: {bad[:5]}")


def allow(H: KnwGame, q: int, Y) -> frozenset:
    """Letters whose successors from ``q`` all lie in ``Y``."""
    G = H.game
    return frozenset(
        G.alphabet[a] for a, succ in enumerate(H.succ[q]) if all(t in Y for t in succ)
    )


def _allow_idx(H, q, Y):
    return {a for a, succ in enumerate(H.succ[q]) if all(t in Y for t in succ)}


def allow_class(H: KnwGame, cls, Y) -> frozenset:
    """Letters allowed from every member of an equivalence class."""
    letters = set(range(len(H.game.alphabet)))
    for q in cls:
        letters &= _allow_idx(H, q, Y)
        if not letters:
            break
    return frozenset(H.game.alphabet[a] for a in sorted(letters))


class _ClassAllow:
    """Memoised ``Allow([q], Y)`` for one fixed ``Y`` (letter indices)."""

    def __init__(self, H, Y):
        self.H, self.Y = H, Y
        self.cache = {}

    def __call__(self, q):
        s = self.H.states[q][0]
        out = self.cache.get(s)
        if out is None:
            letters = set(range(len(self.H.game.alphabet)))
            for member in self.H.classes[s]:
                letters &= _allow_idx(self.H, member, self.Y)
                if not letters:
                    break
            out = self.cache[s] = frozenset(letters)
        return out


def apre(H: KnwGame, Y, X) -> frozenset:
    """States of ``Y`` with a class-allowed letter whose successors all lie in ``X``."""
    Y, X = frozenset(Y), frozenset(X)
    if not X <= Y:
        raise ValueError("apre requires X to be a subset of Y")
    _check_subset(H, Y)
    cls_allow = _ClassAllow(H, Y)
    return frozenset(
        q for q in Y if any(all(t in X for t in H.succ[q][a]) for a in cls_allow(q))
    )


def spre(H: KnwGame, Y) -> frozenset:
    """States of ``Y`` whose class has at least one allowed letter."""
    Y = frozenset(Y)
    _check_subset(H, Y)
    cls_allow = _ClassAllow(H, Y)
    return frozenset(q for q in Y if cls_allow(q))


@dataclass(frozen=True)
class AlmostResult:
    """Winning set ``Z``, uniform strategy on it, and ranks.

    ``strategy`` maps a knowledge mask to the allowed letters (played
    uniformly); ``ranks`` maps each state of ``Z`` to its rank and
    ``witness`` to the letters that lower its rank.
    """

    H: KnwGame
    targets: frozenset
    Z: frozenset
    strategy: dict
    ranks: dict
    witness: dict
    outer_iterations: int
    inner_iterations: int

    @property
    def verdict(self) -> bool:
        return self.H.initial in self.Z


def solve_almost_buchi(H: KnwGame, targets) -> AlmostResult:
    """Almost-sure Buchi winning set of ``H`` for target states ``targets``."""
    B = frozenset(targets)
    _check_subset(H, B)
    Y = frozenset(range(len(H.states)))
    outer = inner = 0
    while True:
        outer += 1
        cls_allow = _ClassAllow(H, Y)
        good = frozenset(q for q in Y if cls_allow(q))
        base = B & good
        X = frozenset()
        while True:
            inner += 1
            nx = base | frozenset(
                q for q in Y
                if any(all(t in X for t in H.succ[q][a]) for a in cls_allow(q))
            )
            if nx == X:
                break
            X = nx
        if X == Y:
            break
        Y = X
    Z = Y
    cls_allow = _ClassAllow(H, Z)
    strategy = {}
    for q in Z:
        s = H.states[q][0]
        if s not in strategy:
            strategy[s] = tuple(sorted(cls_allow(q)))
    ranks, witness = _ranks(H, B, Z, cls_allow)
    return AlmostResult(H, B, Z, strategy, ranks, witness, outer, inner)


def _ranks(H, B, Z, cls_allow):
    ranks = {q: 0 for q in B & Z}
    witness = {}
    j = 0
    while True:
        layer = {}
        for q in Z:
            if q in ranks:
                continue
            lower = tuple(a for a in sorted(cls_allow(q))
                          if all(t in ranks for t in H.succ[q][a]))
            if lower:
                layer[q] = lower
        if not layer:
            break
        j += 1
        for q, letters in layer.items():
            ranks[q] = j
            witness[q] = letters
    return ranks, witness


def check_structure(res: AlmostResult) -> list:
    """Closure and progress facts behind the probability-1 argument.

    Returns a list of violation messages; empty when all hold:
    ranks cover exactly ``Z``, every class in ``Z`` has an allowed letter,
    allowed letters never leave ``Z``, and every ranked non-target state has
    an allowed letter into strictly lower ranks.
    """
    H, Z = res.H, res.Z
    errs = []
    if set(res.ranks) != set(Z):
        errs.append("ranked states differ from Z")
    for q in Z:
        s = H.states[q][0]
        letters = res.strategy.get(s, ())
        if not letters:
            errs.append(f"{H.name(q)}: no allowed letter")
        for a in letters:
            for t in H.succ[q][a]:
                if t not in Z:
                    errs.append(f"{H.name(q)}: letter {H.game.alphabet[a]} leaves Z")
        if q in res.targets:
            continue
        r = res.ranks.get(q)
        if r is None:
            continue
        if not any(all(res.ranks.get(t, r) < r for t in H.succ[q][a]) for a in letters):
            errs.append(f"{H.name(q)}: no rank-decreasing letter")
    return errs


def _lift_objective(G: GameStructure, obj: Objective):
    if obj.kind is ObjectiveKind.BUCHI:
        return G, obj.target
    if obj.kind is ObjectiveKind.REACH:
        return make_absorbing(G, obj.target), obj.target
    if obj.kind in (ObjectiveKind.COBUCHI, ObjectiveKind.PARITY):
        raise UnsupportedObjective(
            f"almost-sure {obj.kind.value} winning is an open problem; "
            "only Buchi (and Reach via absorbing targets) are supported")
    raise UnsupportedObjective(
        "almost-sure and sure winning coincide for Safe objectives; use the sure solver")


def solve_almost(G: GameStructure, obj: Objective) -> AlmostResult:
    """Explicit almost-sure solve; Reach targets are made absorbing first."""
    G2, T = _lift_objective(G, obj)
    H = build_knw(G2)
    return solve_almost_buchi(H, buchi_targets(H, T))


def almost_report(res: AlmostResult, obj: Objective, ranks: bool = False) -> SolveReport:
    H = res.H
    G = H.game
    winning = sorted(
        [sorted(G.state_names(H.states[q][0])), G.states[H.states[q][1]]] for q in res.Z
    )
    strategy = {
        ",".join(sorted(G.state_names(s))): [G.alphabet[a] for a in letters]
        for s, letters in sorted(res.strategy.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))
    }
    extra = {}
    if ranks:
        extra["ranks"] = [
            {"knowledge": sorted(G.state_names(H.states[q][0])),
             "state": G.states[H.states[q][1]], "rank": r}
            for q, r in sorted(res.ranks.items(), key=lambda kv: (kv[1], H.name(kv[0])))
        ]
    return SolveReport(
        verdict=res.verdict,
        mode="almost-buchi",
        objective=obj,
        winning={"pairs": winning},
        strategy=strategy,
        stats={
            "algorithm": "explicit",
            "knw_states": len(H.states),
            "knowledge_classes": len(H.classes),
            "winning_states": len(res.Z),
            "outer_iterations": res.outer_iterations,
            "inner_iterations": res.inner_iterations,
            "max_rank": max(res.ranks.values(), default=0),
        },
        raw_winning=res.Z,
        raw_strategy=res.strategy,
        extra=extra,
    )


# -- direct antichain algorithm ----------------------------------------------------


@dataclass(frozen=True)
class DirectResult:
    """Per-state antichains: ``(s, l)`` wins iff ``s`` is inside an element of ``winning[l]``."""

    game: GameStructure
    winning: tuple
    outer_iterations: int
    inner_iterations: int

    @property
    def verdict(self) -> bool:
        G = self.game
        return dominates(self.winning[G.state_index[G.initial]], G.initial_mask)

    def contains(self, s: int, l: int) -> bool:
        return bool(s >> l & 1) and dominates(self.winning[l], s)


def _with_state(q: Antichain, l: int) -> Antichain:
    bit = 1 << l
    return q.restrict(lambda s: s & bit)


def _pair_family(G: GameStructure, Y) -> Antichain:
    """Knowledge sets ``t`` with ``(t, l')`` in ``Y`` for every ``l'`` in ``t``."""
    acc = Antichain((G.full,), _trusted=True)
    for l in range(G.n):
        escape = Antichain((G.full & ~(1 << l),)) if G.n > 1 else BOTTOM
        acc = meet(acc, join(escape, Y[l]))
        if not acc:
            break
    return acc


def _preimage_layer(G, a, l2, X):
    # {s | Post_a(s) & gamma(o(l2)) inside an element of X[l2]}
    k = G.obs_of[l2]
    row = G.succ[a]
    m = G.obs_masks[k]
    out = []
    for f in X[l2].elements:
        nf = ~f
        pre = 0
        for l in range(G.n):
            if row[l] & m & nf == 0:
                pre |= 1 << l
        out.append(pre)
    return maximal(out)


def solve_almost_buchi_direct(G: GameStructure, targets) -> DirectResult:
    """Almost-sure Buchi winning pairs as per-state antichains, without building H."""
    T = set(targets)
    n, letters = G.n, range(len(G.alphabet))
    cell = [Antichain((G.obs_masks[G.obs_of[l]],)) for l in range(n)]
    in_target = [G.observations[G.obs_of[l]] in T for l in range(n)]
    Y = tuple(_with_state(cell[l], l) for l in range(n))
    outer = inner = 0
    while True:
        outer += 1
        fam = _pair_family(G, Y)
        allowed = [cpre_letter(G, fam, a) for a in letters]
        spre = tuple(
            _with_state(meet(Y[l], _join_all(allowed)), l) for l in range(n)
        )
        base = tuple(spre[l] if in_target[l] else BOTTOM for l in range(n))
        X = tuple(BOTTOM for _ in range(n))
        while True:
            inner += 1
            nx = []
            for l in range(n):
                acc = BOTTOM
                for a in letters:
                    if not allowed[a]:
                        continue
                    part = meet(Y[l], allowed[a])
                    for l2 in iter_bits(G.succ[a][l]):
                        if not part:
                            break
                        part = meet(part, _preimage_layer(G, a, l2, X))
                    acc = join(acc, part)
                nx.append(_with_state(join(acc, base[l]), l))
            nx = tuple(nx)
            if nx == X:
                break
            X = nx
        if X == Y:
            break
        Y = X
    return DirectResult(G, Y, outer, inner)


def _join_all(qs):
    out = BOTTOM
    for q in qs:
        out = join(out, q)
    return out


def direct_report(res: DirectResult, obj: Objective) -> SolveReport:
    G = res.game
    winning = {G.states[l]: res.winning[l].to_names(G) for l in range(G.n)}
    return SolveReport(
        verdict=res.verdict,
        mode="almost-buchi",
        objective=obj,
        winning={"per_state": winning},
        strategy=None,
        stats={
            "algorithm": "direct",
            "states": G.n,
            "antichain_elements": sum(len(q) for q in res.winning),
            "outer_iterations": res.outer_iterations,
            "inner_iterations": res.inner_iterations,
        },
        raw_winning=res.winning,
    )


def solve_almost_direct(G: GameStructure, obj: Objective) -> DirectResult:
    G2, T = _lift_objective(G, obj)
    return solve_almost_buchi_direct(G2, T)
