"""
Sure versus almost-sure winning on a small blind-guessing game
==============================================================

Player 1 sees only which layer the token is in.  From l1 the opponent
silently picks l2 or l2'; the letter Player 1 plays next decides whether the
token moves to the safe-looking l3' (which leads on to the goal l4) or back
towards the start.  No fixed letter works against both of the opponent's
choices, but guessing at random works with probability one.
"""

# %%
from imperfect_games import build_knw, buchi_targets, solve_almost_buchi, solve_sure
from imperfect_games.io import fixture_path, load_game

G, reach = load_game(fixture_path("fig1.game"))
print(G.states, G.alphabet)
print({o: sorted(G.gamma[o]) for o in G.observations})

# %%
# Sure winning works over knowledge sets.  The winning antichain lists the
# largest knowledge sets from which the goal can be forced; {l1} is not
# below any of them.
rep = solve_sure(G, reach)
print("sure:", rep.verdict, rep.winning["antichain"])

# %%
# Almost-sure winning works on pairs (knowledge, true state).  Every pair is
# winning, and the uniform strategy may use both letters everywhere.
H = build_knw(G)
res = solve_almost_buchi(H, buchi_targets(H, ["o4"]))
print("almost-sure:", res.verdict, len(res.Z), "of", len(H.states), "pairs")
for q in sorted(res.Z, key=lambda q: res.ranks[q]):
    print(f"  rank {res.ranks[q]}  {H.name(q)}")

# %%
# Ranks say how many lucky guesses separate a pair from the goal.  The pair
# ({l3,l3'}, l3) has the highest rank: it must go all the way round again.
