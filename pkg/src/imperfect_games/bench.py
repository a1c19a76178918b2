"""Scripted game families where the knowledge-based subset construction blows up."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .antichain import dominates
from .game import GameStructure, Objective
from .knowledge import build_gk
from .mucalc import EvalStats, characteristic_formula, eval_antichain, eval_subset


def shift_register(n: int) -> tuple:
    """Blind ring of ``n`` cells plus an observable ``bad`` state.

    Letters: ``rot`` rotates every cell one step round the ring; ``add``
    lets cell 0 also spawn cell 1; ``merge`` moves cell 0 onto cell 1;
    ``test`` sends cell 0 to ``bad`` and leaves the others in place.  From
    ``{c0}`` the first three letters reach every nonempty set of cells, so
    the reachable subset construction has ``2^n`` states, while the safe
    region is described by a single set.
    """
    if n < 2:
        raise ValueError("need at least two cells")
    cells = [f"c{i}" for i in range(n)]
    tr = set()
    for i, c in enumerate(cells):
        tr.add((c, "rot", cells[(i + 1) % n]))
        tr.add((c, "add", c))
        tr.add((c, "merge", cells[1] if i == 0 else c))
        tr.add((c, "test", "bad" if i == 0 else c))
    tr.add((cells[0], "add", cells[1]))
    letters = ["rot", "add", "merge", "test"]
    for a in letters:
        tr.add(("bad", a, "bad"))
    G = GameStructure(cells + ["bad"], cells[0], letters, tr,
                      ["ring", "alarm"], {"ring": cells, "alarm": ["bad"]})
    return G, Objective.safe(["ring"])


@dataclass(frozen=True)
class Comparison:
    gk_states: int
    antichain_max: int
    antichain_seconds: float
    explicit_build_seconds: float
    explicit_eval_seconds: float
    verdict_antichain: bool
    verdict_explicit: bool

    @property
    def explicit_seconds(self) -> float:
        return self.explicit_build_seconds + self.explicit_eval_seconds

    @property
    def speedup(self) -> float:
        return self.explicit_seconds / max(self.antichain_seconds, 1e-9)

    def as_dict(self):
        return {
            "gk_states": self.gk_states,
            "antichain_max_elements": self.antichain_max,
            "antichain_seconds": round(self.antichain_seconds, 6),
            "explicit_build_seconds": round(self.explicit_build_seconds, 6),
            "explicit_eval_seconds": round(self.explicit_eval_seconds, 6),
            "speedup": round(self.speedup, 2),
            "verdicts": [self.verdict_antichain, self.verdict_explicit],
        }


def compare(G: GameStructure, obj: Objective) -> Comparison:
    """Time the antichain solve against building G^K and evaluating on it."""
    phi = characteristic_formula(obj, G.observations)
    stats = EvalStats()
    t0 = time.perf_counter()
    win = eval_antichain(G, phi, stats=stats)
    t1 = time.perf_counter()
    GK = build_gk(G)
    t2 = time.perf_counter()
    sub = eval_subset(GK, phi)
    t3 = time.perf_counter()
    return Comparison(
        gk_states=len(GK.states),
        antichain_max=stats.max_size,
        antichain_seconds=t1 - t0,
        explicit_build_seconds=t2 - t1,
        explicit_eval_seconds=t3 - t2,
        verdict_antichain=dominates(win, G.initial_mask),
        verdict_explicit=G.initial_mask in sub,
    )
