"""Bounded-tape alternating Turing machines and their encoding as games.

``build_game`` produces a reachability game of imperfect information in
which Player 1 simulates the machine, announcing the symbol under the
head, while Player 2 secretly monitors one tape cell ``(k, sigma)`` and
sends the play to ``sink`` whenever Player 1 lies about it.  Player 1 wins
(surely, or almost surely) iff the machine accepts the word.

Tape symbols are ``0``, ``1`` and the blank ``2``; head moves are ``-1`` or
``+1``; positions are 1-based.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .game import GameError, GameStructure, Objective

OR, AND = "or", "and"
BLANK = 2
_MODE_ALIASES = {"or": OR, "∨": OR, "and": AND, "∧": AND}
DEFAULT_CEILING = 200_000


class ATMError(GameError):
    pass


@dataclass(frozen=True)
class Transition:
    src: str
    read: int
    dst: str
    write: int
    move: int

    @property
    def name(self) -> str:
        return f"{self.src}.{self.read}.{self.dst}.{self.write}.{'+' if self.move > 0 else '-'}"

    def as_list(self):
        return [self.src, self.read, self.dst, self.write, self.move]


@dataclass(frozen=True)
class ATM:
    states: tuple
    initial: str
    modes: dict
    delta: tuple
    accepting: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "delta", tuple(
            t if isinstance(t, Transition) else Transition(t[0], int(t[1]), t[2], int(t[3]), int(t[4]))
            for t in self.delta))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        modes = {}
        for q, m in dict(self.modes).items():
            if m not in _MODE_ALIASES:
                raise ATMError(f"mode of {q!r} must be 'or' or 'and', got {m!r}")
            modes[q] = _MODE_ALIASES[m]
        object.__setattr__(self, "modes", modes)
        self._check()

    def _check(self):
        qs = set(self.states)
        if len(qs) != len(self.states):
            raise ATMError("duplicate control states")
        for q in self.states:
            if any(c in q for c in "|:.") or not q:
                raise ATMError(f"control state name {q!r} may not be empty or contain '|', ':' or '.'")
            if q not in self.modes:
                raise ATMError(f"no mode for control state {q!r}")
        if self.initial not in qs:
            raise ATMError(f"initial state {self.initial!r} unknown")
        if self.modes[self.initial] != OR:
            raise ATMError("the initial control state must be an or-state")
        if not self.accepting <= qs:
            raise ATMError(f"unknown accepting states {sorted(self.accepting - qs)}")
        for t in self.delta:
            if t.src not in qs or t.dst not in qs:
                raise ATMError(f"transition {t.as_list()} names unknown states")
            if t.read not in (0, 1, 2) or t.write not in (0, 1, 2):
                raise ATMError(f"transition {t.as_list()} uses symbols outside 0, 1, 2")
            if t.move not in (-1, 1):
                raise ATMError(f"transition {t.as_list()} must move -1 or +1")
            if self.modes[t.src] == self.modes[t.dst]:
                raise ATMError(f"transition {t.as_list()} does not alternate or/and states")
        if len({t.name for t in self.delta}) != len(self.delta):
            raise ATMError("duplicate transitions")

    def mode(self, q):
        return self.modes[q]

    def as_dict(self):
        return {
            "states": list(self.states),
            "initial": self.initial,
            "modes": dict(self.modes),
            "delta": [t.as_list() for t in self.delta],
            "accepting": sorted(self.accepting),
        }


def _check_word(word: str, cells: int):
    if cells < 1:
        raise ATMError("need at least one tape cell")
    if any(c not in "01" for c in word):
        raise ATMError(f"word {word!r} must be over 0 and 1")
    if len(word) > cells:
        raise ATMError(f"word of length {len(word)} does not fit on {cells} cells")


def initial_tape(word: str, cells: int) -> tuple:
    return tuple(int(c) for c in word) + (BLANK,) * (cells - len(word))


def and_or_graph(M: ATM, cells: int, word: str, ceiling: int = DEFAULT_CEILING):
    """Reachable configurations ``(q, h, tape)`` and their successor lists."""
    _check_word(word, cells)
    if len(M.states) * cells * 3 ** cells > ceiling:
        raise ATMError(f"configuration space |Q|*cells*3^cells exceeds the ceiling {ceiling}")
    start = (M.initial, 1, initial_tape(word, cells))
    succ = {}
    queue = deque([start])
    succ[start] = None
    while queue:
        c = queue.popleft()
        q, h, tape = c
        out = []
        for t in M.delta:
            if t.src != q or t.read != tape[h - 1] or not 1 <= h + t.move <= cells:
                continue
            nt = tape[:h - 1] + (t.write,) + tape[h:]
            n = (t.dst, h + t.move, nt)
            out.append(n)
            if n not in succ:
                succ[n] = None
                queue.append(n)
        succ[c] = out
    return start, succ


def atm_accepts(M: ATM, cells: int, word: str, ceiling: int = DEFAULT_CEILING) -> bool:
    """Alternating reachability of an accepting configuration (least fixed point).

    An or-configuration needs one accepted successor, an and-configuration
    needs at least one successor and all of them accepted.
    """
    start, succ = and_or_graph(M, cells, word, ceiling)
    good = {c for c in succ if c[0] in M.accepting}
    changed = True
    while changed:
        changed = False
        for c, out in succ.items():
            if c in good:
                continue
            if M.mode(c[0]) == OR:
                ok = any(n in good for n in out)
            else:
                ok = bool(out) and all(n in good for n in out)
            if ok:
                good.add(c)
                changed = True
    return start in good


# -- the game ---------------------------------------------------------------------


EPS = "eps"


def _letter(t: Transition, g: int) -> str:
    return f"{t.name}:{g}"


def _name(s) -> str:
    if s[0] in ("init", "sink"):
        return s[0]
    return "|".join(str(x) for x in s)


def _observation(s) -> str:
    if s[0] in ("init", "sink"):
        return s[0]
    if s[0] == "L1":
        _, t, q, h, _k, _sig = s
        return f"O1|{t}|{q}|{h}"
    _, q, h, g, _k, _sig = s
    return f"O2|{q}|{h}|{g}"


def _control(s):
    if s[0] == "L1":
        return s[2]
    if s[0] == "L2":
        return s[1]
    return None


@dataclass(frozen=True)
class ATMGame:
    game: GameStructure
    objective: Objective
    stats: dict


def build_game(M: ATM, cells: int, word: str, ceiling: int = DEFAULT_CEILING) -> ATMGame:
    """Reachable part of the monitoring game for ``M`` on ``word``.

    State names: ``init``, ``sink``, ``L1|t|q|h|k|s`` and ``L2|q|h|g|k|s``
    where ``t`` is the transition last chosen by Player 2 (``-`` at the
    start), ``g`` the symbol Player 1 claims is under the head and
    ``(k, s)`` the monitored cell.  Letters are ``eps`` and
    ``<transition>:<symbol>``.

    Player 1's move from an L1 state goes to L2 only if no sink guard
    fires: the transition must start in the current control state, keep
    the head on the tape, and agree with the monitored cell both under the
    head and at the next head position.
    """
    _check_word(word, cells)
    nd = len(M.delta)
    l1_size = (nd + 1) * len(M.states) * cells * cells * 3
    l2_size = len(M.states) * cells * 3 * cells * 3
    if 2 + l1_size + l2_size > ceiling:
        raise ATMError(f"game with up to {2 + l1_size + l2_size} states exceeds the ceiling {ceiling}")
    tape = initial_tape(word, cells)
    letters = [(t, g) for t in M.delta for g in (0, 1, 2)]
    alphabet = [EPS] + [_letter(t, g) for t, g in letters]
    init, sink = ("init",), ("sink",)

    def moves(s):
        """Yield (letter, successor) pairs."""
        if s == init:
            for k in range(1, cells + 1):
                yield EPS, ("L1", "-", M.initial, 1, k, tape[k - 1])
            for t, g in letters:
                yield _letter(t, g), sink
        elif s == sink:
            for a in alphabet:
                yield a, sink
        elif s[0] == "L1":
            _, _, q, h, k, sig = s
            yield EPS, sink
            for t, g3 in letters:
                h2 = h + t.move
                if t.src != q or not 1 <= h2 <= cells:
                    yield _letter(t, g3), sink
                elif (h == k and t.read != sig) or (h2 == k and g3 != sig):
                    yield _letter(t, g3), sink
                else:
                    sig2 = t.write if h == k else sig
                    yield _letter(t, g3), ("L2", t.dst, h2, g3, k, sig2)
        else:
            _, q, h, g1, k, sig = s
            for t, g in letters:
                yield _letter(t, g), sink
            valid = [t for t in M.delta
                     if t.src == q and t.read == g1 and 1 <= h + t.move <= cells]
            if not valid:
                yield EPS, sink
            for t in valid:
                sig2 = t.write if h == k else sig
                yield EPS, ("L1", t.name, t.dst, h + t.move, k, sig2)

    order = [init, sink]
    seen = set(order)
    transitions = set()
    queue = deque(order)
    while queue:
        s = queue.popleft()
        for a, n in moves(s):
            transitions.add((_name(s), a, _name(n)))
            if n not in seen:
                seen.add(n)
                order.append(n)
                queue.append(n)
    observations = {}
    for s in order:
        observations.setdefault(_observation(s), []).append(_name(s))
    G = GameStructure([_name(s) for s in order], "init", alphabet, transitions,
                      list(observations), observations)
    target = sorted({_observation(s) for s in order if _control(s) in M.accepting})
    stats = {
        "L1_bound": l1_size,
        "L2_bound": l2_size,
        "L1_reachable": sum(1 for s in order if s[0] == "L1"),
        "L2_reachable": sum(1 for s in order if s[0] == "L2"),
        "states": len(order),
        "observations": len(observations),
        "letters": len(alphabet),
    }
    return ATMGame(G, Objective.reach(target), stats)


# -- files and examples -------------------------------------------------------------


def atm_from_dict(data: dict):
    """``(ATM, cells, word)`` from the JSON description."""
    try:
        states = data["states"]
        M = ATM(states, data.get("initial", states[0] if states else None),
                data["modes"], data["delta"], data.get("accepting", []))
        return M, int(data["cells"]), str(data.get("word", ""))
    except KeyError as e:
        raise ATMError(f"missing field {e.args[0]!r}") from None
    except (TypeError, ValueError, IndexError) as e:
        if isinstance(e, ATMError):
            raise
        raise ATMError(f"malformed ATM description: {e}") from None


def load_atm(path):
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ATMError(f"{path}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None
    except OSError as e:
        raise ATMError(f"{path}: {e.strerror}") from None
    return atm_from_dict(data)


def accept_all(accepting: bool = True) -> ATM:
    """Step right into an and-state; accepts everything iff that state is accepting."""
    return ATM(["q0", "qa"], "q0", {"q0": OR, "qa": AND},
               [("q0", x, "qa", x, 1) for x in (0, 1, 2)], ["qa"] if accepting else [])


def first_symbol_is_one() -> ATM:
    """Accept iff cell 1 holds ``1``; reading ``0`` leads to a dead and-state."""
    return ATM(["q0", "qa", "qr"], "q0", {"q0": OR, "qa": AND, "qr": AND},
               [("q0", 1, "qa", 1, 1), ("q0", 0, "qr", 0, 1)], ["qa"])


def second_symbol_is_one() -> ATM:
    """Move right without looking, then an and-state checks cell 2."""
    return ATM(["q0", "q1", "qa"], "q0", {"q0": OR, "q1": AND, "qa": OR},
               [("q0", x, "q1", x, 1) for x in (0, 1, 2)] + [("q1", 1, "qa", 1, -1)],
               ["qa"])


def both_ones(loop_branch: bool = False) -> ATM:
    """Accept ``11`` using universal branching at cell 2.

    The and-state reading ``1`` branches into two configurations (writing 1
    or 0) and both must then see ``1`` in cell 1.  With ``loop_branch`` a
    third branch returns to the start and cycles forever, so nothing is
    accepted.
    """
    delta = [("q0", x, "q1", x, 1) for x in (0, 1, 2)]
    delta += [("q1", 1, "qc", 1, -1), ("q1", 1, "qc", 0, -1), ("qc", 1, "qf", 1, 1)]
    if loop_branch:
        delta.append(("q1", 1, "q0", 1, -1))
    return ATM(["q0", "q1", "qc", "qf"], "q0", {"q0": OR, "q1": AND, "qc": OR, "qf": AND},
               delta, ["qf"])


def or_choice() -> ATM:
    """Existential choice: only one of two moves from the start leads to acceptance."""
    return ATM(["q0", "qa", "qr"], "q0", {"q0": OR, "qa": AND, "qr": AND},
               [(("q0", x, "qr", x, 1)) for x in (0, 1, 2)]
               + [("q0", x, "qa", 2, 1) for x in (0, 1)],
               ["qa"])


def examples():
    """Named hand-built machines with the words they should accept or reject."""
    return {
        "accept-all": (accept_all(True), 2, ["", "0", "1", "10", "11"]),
        "accept-none": (accept_all(False), 2, ["", "0", "1", "10", "11"]),
        "first-is-1": (first_symbol_is_one(), 2, ["1", "0", "10", "01", "11"]),
        "second-is-1": (second_symbol_is_one(), 2, ["01", "11", "10", "00", "1"]),
        "both-ones": (both_ones(False), 2, ["11", "10", "01", "1"]),
        "both-ones-loop": (both_ones(True), 2, ["11", "10"]),
        "or-choice": (or_choice(), 2, ["0", "1", "", "01"]),
    }
