"""
Alternating Turing machines as games
====================================

A machine with two tape cells is turned into a game where Player 1 proposes
moves for or-states, Player 2 picks branches at and-states, and a secretly
monitored tape cell catches Player 1 lying about the tape.  Player 1 wins
(surely, and almost surely) exactly when the machine accepts.
"""

# %%
from imperfect_games import solve_almost, solve_sure
from imperfect_games.atm import atm_accepts, build_game, examples

for name, (M, cells, words) in examples().items():
    for w in words:
        g = build_game(M, cells, w)
        acc = atm_accepts(M, cells, w)
        sure = solve_sure(g.game, g.objective).verdict
        almost = solve_almost(g.game, g.objective).verdict
        print(f"{name:15s} w={w!r:5s} accepts={acc!s:5s} sure={sure!s:5s} almost={almost!s:5s} "
              f"states={len(g.game.states)}")

# %%
# Observations hide the monitored cell, so the game is only as informative
# to Player 1 as the configuration itself.
M, cells, _ = examples()["both-ones"]
g = build_game(M, cells, "11")
print(g.stats)
