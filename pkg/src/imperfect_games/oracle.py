"""Brute-force reference solvers, random instances and strategy simulation.

Nothing here reuses the symbolic code paths: perfect-information games are
solved with attractors and Zielonka's recursion on an explicit bipartite
arena, and mu-calculus formulas are evaluated over explicitly enumerated
frozensets of states.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .formula import And, Atom, Mu, Nu, Or, Pre, Var
from .game import GameStructure, Objective, ObjectiveKind

# -- explicit perfect-information games ---------------------------------------------


@dataclass(frozen=True)
class ExplicitGame:
    """Perfect-information game: ``succ[v][a]`` is a tuple of node indices.

    ``label[v]`` is the observation that node ``v`` lies in, which is what
    objectives refer to.
    """

    names: tuple
    initial: int
    letters: tuple
    succ: tuple
    label: tuple

    def __len__(self):
        return len(self.names)


def explicit_from_game(G: GameStructure) -> ExplicitGame:
    """View ``G`` as perfect information; node labels are its observations."""
    idx = {s: i for i, s in enumerate(G.states)}
    lidx = {a: i for i, a in enumerate(G.alphabet)}
    succ = [[set() for _ in G.alphabet] for _ in G.states]
    for src, a, dst in G.transitions:
        succ[idx[src]][lidx[a]].add(idx[dst])
    label = []
    for s in G.states:
        label.append(next(o for o in G.observations if s in G.gamma[o]))
    return ExplicitGame(tuple(G.states), idx[G.initial], tuple(G.alphabet),
                        tuple(tuple(tuple(sorted(x)) for x in row) for row in succ), tuple(label))


def explicit_from_subset(GK) -> ExplicitGame:
    """View a knowledge-based subset game as perfect information."""
    names = tuple(GK.name(s) for s in GK.states)
    label = tuple(GK.observation(s) for s in GK.states)
    return ExplicitGame(names, GK.index[GK.initial], GK.game.alphabet, GK.succ, label)


def explicit_from_knw(H) -> ExplicitGame:
    G = H.game
    names = tuple(H.name(q) for q in range(len(H.states)))
    label = tuple(G.observation_of_set(s) for s, _ in H.states)
    return ExplicitGame(names, H.initial, G.alphabet, H.succ, label)


class _Arena:
    """Bipartite arena: node ``v < n`` belongs to Player 1, node ``n + v*k + a``
    is the Player 2 node reached after letter ``a`` at ``v``."""

    def __init__(self, E: ExplicitGame):
        n, k = len(E), len(E.letters)
        self.n, self.k = n, k
        self.size = n + n * k
        self.out = [None] * self.size
        for v in range(n):
            self.out[v] = tuple(n + v * k + a for a in range(k))
            for a in range(k):
                self.out[n + v * k + a] = E.succ[v][a]
        self.pred = [[] for _ in range(self.size)]
        for u, targets in enumerate(self.out):
            for w in targets:
                self.pred[w].append(u)

    def owner(self, u):
        return 0 if u < self.n else 1

    def base(self, u):
        return u if u < self.n else (u - self.n) // self.k

    def attractor(self, player, U, S):
        """Nodes of ``S`` from which ``player`` forces a visit to ``U``, with strategy."""
        attr = set(U) & S
        strat = {}
        count = {u: sum(1 for w in self.out[u] if w in S) for u in S}
        queue = deque(attr)
        while queue:
            w = queue.popleft()
            for u in self.pred[w]:
                if u not in S or u in attr:
                    continue
                if self.owner(u) == player:
                    attr.add(u)
                    strat[u] = w
                    queue.append(u)
                else:
                    count[u] -= 1
                    if count[u] == 0:
                        attr.add(u)
                        queue.append(u)
        return attr, strat

    def stay(self, u, S):
        return next(w for w in self.out[u] if w in S)


def _to_letters(arena, strat):
    """Project a bipartite Player 1 strategy onto letters of the original game."""
    return {v: (w - arena.n) % arena.k for v, w in strat.items() if v < arena.n}


def _zielonka(arena, prio, S):
    """Min-parity game on subgame ``S``; player 0 likes even priorities.

    Returns ``(W0, W1, s0, s1)`` with positional strategies as successor maps.
    """
    if not S:
        return set(), set(), {}, {}
    p = min(prio[u] for u in S)
    i = p % 2
    U = {u for u in S if prio[u] == p}
    A, sa = arena.attractor(i, U, S)
    W = [None, None]
    s = [None, None]
    W[0], W[1], s[0], s[1] = _zielonka(arena, prio, S - A)
    if not W[1 - i]:
        strat = dict(s[i])
        strat.update(sa)
        for u in U:
            if arena.owner(u) == i:
                strat[u] = arena.stay(u, S)
        out_w = [None, None]
        out_s = [None, None]
        out_w[i], out_w[1 - i] = set(S), set()
        out_s[i], out_s[1 - i] = strat, {}
        return out_w[0], out_w[1], out_s[0], out_s[1]
    B, sb = arena.attractor(1 - i, W[1 - i], S)
    W2 = [None, None]
    s2 = [None, None]
    W2[0], W2[1], s2[0], s2[1] = _zielonka(arena, prio, S - B)
    res_w = [None, None]
    res_s = [None, None]
    res_w[i] = W2[i]
    res_s[i] = s2[i]
    res_w[1 - i] = W2[1 - i] | B
    strat = dict(s2[1 - i])
    strat.update({u: w for u, w in s[1 - i].items() if u in W[1 - i]})
    strat.update(sb)
    res_s[1 - i] = strat
    return res_w[0], res_w[1], res_s[0], res_s[1]


def _priorities(E: ExplicitGame, obj: Objective):
    if obj.kind is ObjectiveKind.PARITY:
        return [obj.priority[o] for o in E.label]
    inT = [o in obj.target for o in E.label]
    if obj.kind is ObjectiveKind.BUCHI:
        return [0 if t else 1 for t in inT]
    if obj.kind is ObjectiveKind.COBUCHI:
        return [2 if t else 1 for t in inT]
    raise ValueError(obj.kind)


@dataclass(frozen=True)
class PerfectSolution:
    """Winning nodes of both players and positional witnesses.

    ``strategy`` maps Player 1 winning nodes to a letter index;
    ``spoiler`` maps ``(node, letter)`` pairs in Player 2's region to the
    chosen successor.
    """

    win: frozenset
    lose: frozenset
    strategy: dict
    spoiler: dict


def _buchi(arena, target, S, player):
    """Classical Buchi iteration for ``player`` on subgame ``S``."""
    W = set(S)
    while True:
        R, _ = arena.attractor(player, target & W, W)
        trap = W - R
        if not trap:
            break
        A, _ = arena.attractor(1 - player, trap, W)
        W -= A
    R, strat = arena.attractor(player, target & W, W)
    for u in target & W:
        if arena.owner(u) == player:
            strat[u] = arena.stay(u, W)
    return W, strat


def solve_perfect(E: ExplicitGame, obj: Objective) -> PerfectSolution:
    """Player 1 sure-winning nodes of a perfect-information game."""
    arena = _Arena(E)
    nodes = set(range(arena.size))
    lab = [E.label[arena.base(u)] for u in range(arena.size)]
    kind = obj.kind
    if kind is ObjectiveKind.PARITY:
        prio = [obj.priority[o] for o in lab]
        W0, W1, s0, s1 = _zielonka(arena, prio, nodes)
    else:
        T = {u for u in nodes if lab[u] in obj.target}
        if kind is ObjectiveKind.REACH:
            W0, s0 = arena.attractor(0, T, nodes)
            for u in T:
                if arena.owner(u) == 0:
                    s0[u] = arena.out[u][0]
            W1 = nodes - W0
            s1 = {u: arena.stay(u, W1) for u in W1 if arena.owner(u) == 1}
        elif kind is ObjectiveKind.SAFE:
            W1, s1 = arena.attractor(1, nodes - T, nodes)
            W0 = nodes - W1
            for u in W1 - T:
                if arena.owner(u) == 1:
                    s1[u] = next((w for w in arena.out[u] if w in W1), arena.out[u][0])
            s0 = {u: arena.stay(u, W0) for u in W0 if arena.owner(u) == 0}
        elif kind is ObjectiveKind.BUCHI:
            W0, s0 = _buchi(arena, T, nodes, 0)
            W1 = nodes - W0
            s1 = _spoil_from_zielonka(arena, [0 if u in T else 1 for u in range(arena.size)], nodes)
        else:
            W1, s1 = _buchi(arena, nodes - T, nodes, 1)
            W0 = nodes - W1
            s0 = _win_from_zielonka(arena, [2 if u in T else 1 for u in range(arena.size)], nodes)
    win = frozenset(v for v in W0 if v < arena.n)
    strategy = {v: a for v, a in _to_letters(arena, s0).items() if v in win}
    spoiler = {}
    for u, w in s1.items():
        if u >= arena.n and u in W1:
            v, a = divmod(u - arena.n, arena.k)
            spoiler[(v, a)] = w
    return PerfectSolution(win, frozenset(range(arena.n)) - win, strategy, spoiler)


def _spoil_from_zielonka(arena, prio, nodes):
    return _zielonka(arena, prio, nodes)[3]


def _win_from_zielonka(arena, prio, nodes):
    return _zielonka(arena, prio, nodes)[2]


def check_strategy(E: ExplicitGame, obj: Objective, sol: PerfectSolution) -> list:
    """Verify Player 1's positional witness on its winning region.

    With Player 1 fixed, Player 2 picks successors freely; the objective
    must hold on every path from every winning node.  Returns a list of
    violation messages.
    """
    errs = []
    win = sol.win
    for v in win:
        a = sol.strategy.get(v)
        if a is None:
            errs.append(f"{E.names[v]}: no letter")
            continue
        reached = obj.kind is ObjectiveKind.REACH and E.label[v] in obj.target
        if not reached and any(w not in win for w in E.succ[v][a]):
            errs.append(f"{E.names[v]}: letter leaves the winning region")
    if errs:
        return errs
    edges = {v: E.succ[v][sol.strategy[v]] for v in win}
    prio = {v: p for v, p in zip(range(len(E)), _objective_priorities(E, obj))}
    if obj.kind is ObjectiveKind.REACH:
        # no cycle avoiding the target
        sub = {v for v in win if E.label[v] not in obj.target}
        if _has_cycle(edges, sub):
            errs.append("a cycle avoids the target")
        return errs
    if obj.kind is ObjectiveKind.SAFE:
        if any(E.label[v] not in obj.target for v in win):
            errs.append("winning region contains unsafe nodes")
        return errs
    for p in sorted({prio[v] for v in win}):
        if p % 2 == 0:
            continue
        sub = {v for v in win if prio[v] >= p}
        for scc in _sccs(edges, sub):
            if any(prio[v] == p for v in scc) and _nontrivial(scc, edges):
                errs.append(f"odd priority {p} can recur")
                break
    return errs


def _objective_priorities(E, obj):
    if obj.kind in (ObjectiveKind.REACH, ObjectiveKind.SAFE):
        return [0] * len(E)
    return _priorities(E, obj)


def _nontrivial(scc, edges):
    if len(scc) > 1:
        return True
    (v,) = scc
    return v in edges[v]


def _sccs(edges, sub):
    index, low, stack, on, out = {}, {}, [], set(), []
    counter = [0]

    def strong(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on.add(v)
        for w in edges[v]:
            if w not in sub:
                continue
            if w not in index:
                strong(w)
                low[v] = min(low[v], low[w])
            elif w in on:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = set()
            while True:
                w = stack.pop()
                on.discard(w)
                comp.add(w)
                if w == v:
                    break
            out.append(comp)

    for v in sorted(sub):
        if v not in index:
            strong(v)
    return out


def _has_cycle(edges, sub):
    return any(_nontrivial(c, edges) for c in _sccs(edges, sub))


# -- naive mu-calculus over the full powerset ------------------------------------


class CeilingExceeded(ValueError):
    pass


def all_nonempty_subsets(n: int):
    return [frozenset(c) for r in range(1, n + 1) for c in combinations(range(n), r)]


def eval_subset_full(G: GameStructure, phi, env=None, ceiling: int = 12) -> frozenset:
    """Subset semantics over every nonempty subset of ``L``.

    State sets are frozensets of state indices; ``env`` maps variables to
    sets of such frozensets.
    """
    n = len(G.states)
    if n > ceiling:
        raise CeilingExceeded(f"{n} states exceeds the enumeration ceiling of {ceiling}")
    universe = frozenset(all_nonempty_subsets(n))
    idx = {s: i for i, s in enumerate(G.states)}
    gamma = {o: frozenset(idx[s] for s in G.gamma[o]) for o in G.observations}
    posts = {}
    for src, a, dst in G.transitions:
        posts.setdefault((idx[src], a), set()).add(idx[dst])

    def post(s, a):
        out = set()
        for l in s:
            out |= posts.get((l, a), set())
        return frozenset(out)

    def cpre(q):
        res = set()
        for s in universe:
            for a in G.alphabet:
                p = post(s, a)
                if all((p & gamma[o]) in q for o in G.observations if p & gamma[o]):
                    res.add(s)
                    break
        return frozenset(res)

    def ev(f, env):
        if isinstance(f, Atom):
            return frozenset(s for s in universe if s <= gamma[f.obs])
        if isinstance(f, Var):
            return env[f.name]
        if isinstance(f, Or):
            return ev(f.left, env) | ev(f.right, env)
        if isinstance(f, And):
            return ev(f.left, env) & ev(f.right, env)
        if isinstance(f, Pre):
            return cpre(ev(f.body, env))
        if isinstance(f, (Mu, Nu)):
            cur = frozenset() if isinstance(f, Mu) else universe
            while True:
                nxt = ev(f.body, {**env, f.var: cur})
                if nxt == cur:
                    return cur
                cur = nxt
        raise TypeError(f)

    return ev(phi, dict(env or {}))


def to_masks(family) -> frozenset:
    return frozenset(sum(1 << i for i in s) for s in family)


def downward_closed(family) -> bool:
    fam = set(family)
    for s in fam:
        for r in range(1, len(s)):
            for c in combinations(sorted(s), r):
                if frozenset(c) not in fam:
                    return False
    return True


# -- random instances ---------------------------------------------------------------


def random_game(seed, n_states: int, n_letters: int, n_observations: int,
                density: float = 0.3) -> GameStructure:
    """Valid random game: each edge present with probability ``density``,
    missing successors filled uniformly, observations a random surjection."""
    if not 1 <= n_observations <= n_states:
        raise ValueError("need 1 <= n_observations <= n_states")
    rng = random.Random(seed)
    states = [f"s{i}" for i in range(n_states)]
    letters = "abcdefghijklmnopqrstuvwxyz"[:n_letters] if n_letters <= 26 else [
        f"a{i}" for i in range(n_letters)]
    transitions = set()
    for s in states:
        for a in letters:
            succ = [t for t in states if rng.random() < density]
            if not succ:
                succ = [rng.choice(states)]
            transitions.update((s, a, t) for t in succ)
    obs = [f"o{k}" for k in range(n_observations)]
    assign = list(range(n_observations)) + [rng.randrange(n_observations)
                                            for _ in range(n_states - n_observations)]
    rng.shuffle(assign)
    gamma = {o: set() for o in obs}
    for s, k in zip(states, assign):
        gamma[obs[k]].add(s)
    return GameStructure(states, states[0], list(letters), transitions, obs, gamma)


def random_objective(rng: random.Random, G: GameStructure, kind: ObjectiveKind) -> Objective:
    obs = list(G.observations)
    if kind is ObjectiveKind.PARITY:
        return Objective.parity({o: rng.randrange(4) for o in obs})
    target = [o for o in obs if rng.random() < 0.4]
    return Objective(kind, target)


def random_formula(rng: random.Random, observations, max_depth: int = 4,
                   max_binders: int = 2):
    """Closed formula of depth at most ``max_depth`` with at most
    ``max_binders`` nested fixed points.

    Binder bodies are mostly guarded (``or``/``and`` of a subformula and a
    ``pre``) since unguarded bodies like ``mu X . X`` collapse to bottom or
    top and exercise little.
    """
    obs = list(observations)
    names = iter(f"X{i}" for i in range(1000))

    def leaf(bound):
        if bound and rng.random() < 0.5:
            return Var(rng.choice(bound))
        return Atom(rng.choice(obs))

    def gen(d, bound, binders):
        if d <= 0:
            return leaf(bound)
        choices = ["leaf", "or", "and", "pre", "pre"]
        if binders > 0 and d >= 2:
            choices += ["bind", "bind"]
        c = rng.choice(choices)
        if c == "leaf":
            return leaf(bound)
        if c == "pre":
            return Pre(gen(d - 1, bound, binders))
        if c in ("or", "and"):
            op = Or if c == "or" else And
            return op(gen(d - 1, bound, binders), gen(d - 1, bound, binders))
        return bind(d, bound, binders)

    def bind(d, bound, binders):
        v = next(names)
        inner = bound + [v]
        if d >= 3 and rng.random() < 0.8:
            op = Or if rng.random() < 0.5 else And
            side = gen(d - 2, inner, binders - 1)
            body = op(side, Pre(gen(d - 3, inner, binders - 1)))
            if rng.random() < 0.5:
                body = op(body.right, body.left)
        else:
            body = gen(d - 1, inner, binders - 1)
        return (Mu if rng.random() < 0.5 else Nu)(v, body)

    if max_depth >= 2 and max_binders > 0:
        return bind(max_depth, [], max_binders)
    return gen(max_depth, [], 0)


# -- Monte Carlo simulation ---------------------------------------------------------


@dataclass(frozen=True)
class SimulationStats:
    visits: np.ndarray
    exits: np.ndarray
    steps: int
    seed: int

    @property
    def trials(self) -> int:
        return len(self.visits)

    def fraction_at_least(self, k: int) -> float:
        return float(np.mean(self.visits >= k))

    def as_dict(self, k: int = 5) -> dict:
        return {
            "trials": self.trials,
            "steps": self.steps,
            "seed": self.seed,
            "z_exits": int(self.exits.sum()),
            "min_visits": int(self.visits.min()),
            "mean_visits": round(float(self.visits.mean()), 6),
            f"fraction_visits_ge_{k}": self.fraction_at_least(k),
        }


ADVERSARIES = ("uniform", "positional", "max-rank")


def simulate(H, strategy: dict, targets, Z, steps: int, trials: int, seed: int,
             adversary: str = "uniform", ranks: dict | None = None) -> SimulationStats:
    """Play the uniform randomized strategy on ``H`` against a random resolver.

    ``strategy`` maps a knowledge mask to letter indices.  Outside the
    domain of ``strategy`` the letter is uniform over the whole alphabet.
    ``adversary`` is ``"uniform"`` (fresh uniform successor each step),
    ``"positional"`` (one successor per state and letter, drawn once from
    the seed) or ``"max-rank"`` (always the successor of largest rank, ties
    broken by the seed).
    """
    if adversary not in ADVERSARIES:
        raise ValueError(f"unknown adversary {adversary!r}")
    rng = np.random.default_rng(seed)
    nq = len(H.states)
    k = len(H.game.alphabet)
    letters = np.full((nq, k), -1, dtype=np.int64)
    nlet = np.zeros(nq, dtype=np.int64)
    for q, (s, _) in enumerate(H.states):
        ls = strategy.get(s) or tuple(range(k))
        nlet[q] = len(ls)
        letters[q, :len(ls)] = ls
    width = max(len(t) for row in H.succ for t in row)
    succ = np.full((nq, k, width), -1, dtype=np.int64)
    nsucc = np.zeros((nq, k), dtype=np.int64)
    for q, row in enumerate(H.succ):
        for a, t in enumerate(row):
            order = list(t)
            if adversary == "max-rank":
                rk = ranks or {}
                order = sorted(t, key=lambda x: -rk.get(x, 1 << 30))
                best = rk.get(order[0], 1 << 30)
                order = [x for x in order if rk.get(x, 1 << 30) == best]
            if adversary in ("positional", "max-rank"):
                order = [order[int(rng.integers(len(order)))]]
            nsucc[q, a] = len(order)
            succ[q, a, :len(order)] = order
    is_target = np.zeros(nq, dtype=bool)
    is_target[list(targets)] = True
    in_z = np.zeros(nq, dtype=bool)
    in_z[list(Z)] = True

    cur = np.full(trials, H.initial, dtype=np.int64)
    visits = np.zeros(trials, dtype=np.int64)
    exits = np.zeros(trials, dtype=np.int64)
    visits += is_target[cur]
    for _ in range(steps):
        a = letters[cur, (rng.random(trials) * nlet[cur]).astype(np.int64)]
        j = (rng.random(trials) * nsucc[cur, a]).astype(np.int64)
        nxt = succ[cur, a, j]
        exits += in_z[cur] & ~in_z[nxt]
        cur = nxt
        visits += is_target[cur]
    return SimulationStats(visits, exits, steps, seed)


# -- sweeps -------------------------------------------------------------------------


@dataclass
class SweepResult:
    name: str
    checked: int = 0
    disagreements: list = None

    def __post_init__(self):
        if self.disagreements is None:
            self.disagreements = []

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def as_dict(self):
        return {"name": self.name, "checked": self.checked, "ok": self.ok,
                "disagreements": self.disagreements[:20]}


def _game_params(rng, max_states, max_letters=3, max_obs=3):
    n = rng.randint(2, max(2, max_states))
    return n, rng.randint(1, max_letters), rng.randint(1, min(max_obs, n))


def sweep_correspondence(seed: int, count: int, formulas: int = 20, max_states: int = 6,
                         max_depth: int = 4) -> SweepResult:
    """maximal(subset semantics) == antichain semantics on random closed formulas."""
    from .antichain import maximal
    from .mucalc import eval_antichain

    res = SweepResult("correspondence")
    rng = random.Random(seed)
    for i in range(count):
        gseed = rng.getrandbits(32)
        G = random_game(gseed, *_game_params(rng, max_states))
        for _ in range(formulas):
            phi = random_formula(rng, G.observations, max_depth=max_depth)
            want = maximal(to_masks(eval_subset_full(G, phi)))
            got = eval_antichain(G, phi)
            res.checked += 1
            if got != want:
                res.disagreements.append({"game_seed": gseed, "formula": str(phi)})
    return res


def sweep_sure(seed: int, count: int, max_states: int = 6, kinds=tuple(ObjectiveKind)) -> SweepResult:
    """Antichain sure verdict == perfect-information verdict on G^K."""
    from .knowledge import build_gk
    from .mucalc import solve_sure

    res = SweepResult("sure")
    rng = random.Random(seed)
    for _ in range(count):
        gseed = rng.getrandbits(32)
        G = random_game(gseed, *_game_params(rng, max_states))
        E = explicit_from_subset(build_gk(G))
        for kind in kinds:
            obj = random_objective(rng, G, kind)
            want = E.initial in solve_perfect(E, obj).win
            got = solve_sure(G, obj).verdict
            res.checked += 1
            if got != want:
                res.disagreements.append({"game_seed": gseed, "objective": kind.value,
                                          "antichain": got, "oracle": want})
    return res


def sweep_almost(seed: int, count: int, max_states: int = 6) -> SweepResult:
    """Direct antichain almost-sure solver == explicit solver on Knw(G)."""
    from .almost import (check_structure, solve_almost_buchi, solve_almost_buchi_direct)
    from .knowledge import build_knw, buchi_targets

    res = SweepResult("almost")
    rng = random.Random(seed)
    for _ in range(count):
        gseed = rng.getrandbits(32)
        G = random_game(gseed, *_game_params(rng, max_states))
        T = [o for o in G.observations if rng.random() < 0.4]
        problems = compare_almost(G, T)
        H = build_knw(G)
        ex = solve_almost_buchi(H, buchi_targets(H, T))
        problems += check_structure(ex)
        res.checked += 1
        if problems:
            res.disagreements.append({"game_seed": gseed, "target": T, "problems": problems[:5]})
    return res


def compare_almost(G: GameStructure, T) -> list:
    """Differences between the direct and explicit almost-sure solvers.

    Checks the verdict, membership of every reachable pair, and that the
    per-state maximal knowledge sets of the explicit solution over the full
    pair space equal the direct antichains.
    """
    from .almost import solve_almost_buchi, solve_almost_buchi_direct
    from .antichain import maximal
    from .knowledge import build_knw, buchi_targets

    out = []
    d = solve_almost_buchi_direct(G, T)
    H = build_knw(G)
    ex = solve_almost_buchi(H, buchi_targets(H, T))
    if ex.verdict != d.verdict:
        out.append(f"verdict explicit={ex.verdict} direct={d.verdict}")
    for q, (s, l) in enumerate(H.states):
        if (q in ex.Z) != d.contains(s, l):
            out.append(f"reachable pair {H.name(q)} differs")
    Hf = build_knw(G, full=True)
    exf = solve_almost_buchi(Hf, buchi_targets(Hf, T))
    for l in range(G.n):
        want = maximal(s for q, (s, l2) in enumerate(Hf.states) if l2 == l and q in exf.Z)
        if want != d.winning[l]:
            out.append(f"maximal sets at {G.states[l]} differ")
    return out
