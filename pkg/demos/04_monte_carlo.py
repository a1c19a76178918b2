"""
Probability one, empirically
============================

The almost-sure strategy plays uniformly among allowed letters.  Two facts
make it win with probability one: allowed letters never leave the winning
region, and from every winning pair some allowed letter lowers the rank.
Here we simulate it against three opponents and count goal visits.
"""

# %%
import numpy as np

from imperfect_games import build_knw, buchi_targets, solve_almost_buchi
from imperfect_games.io import fixture_path, load_game
from imperfect_games.oracle import simulate

G, _ = load_game(fixture_path("fig3.game"))
H = build_knw(G)
res = solve_almost_buchi(H, buchi_targets(H, ["o4"]))
print("winning:", res.verdict, "pairs in Z:", len(res.Z), "max rank:", max(res.ranks.values()))

# %%
for adversary in ("uniform", "positional", "max-rank"):
    sim = simulate(H, res.strategy, res.targets, res.Z, steps=200, trials=10_000, seed=1,
                   adversary=adversary, ranks=res.ranks)
    print(f"{adversary:10s} exits={int(sim.exits.sum())}  min visits={sim.visits.min()}  "
          f"median={np.median(sim.visits):.0f}  P(visits>=5)={sim.fraction_at_least(5):.4f}")

# %%
# A histogram of visit counts for the uniform opponent.
sim = simulate(H, res.strategy, res.targets, res.Z, steps=200, trials=10_000, seed=1)
counts, edges = np.histogram(sim.visits, bins=8)
for c, lo, hi in zip(counts, edges, edges[1:]):
    print(f"{lo:5.0f}-{hi:5.0f} {'#' * int(60 * c / counts.max())}")
