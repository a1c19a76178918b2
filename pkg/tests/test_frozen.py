"""Regression against verdicts frozen from the explicit oracles.

The table is produced by ``data/make_frozen.py``, which uses only the
perfect-information solver on the knowledge-based subset game.
"""
import json
from pathlib import Path

import pytest

from imperfect_games.antichain import dominates
from imperfect_games.game import Objective, ObjectiveKind
from imperfect_games.knowledge import build_gk
from imperfect_games.mucalc import solve_sure
from imperfect_games.oracle import random_game

ROWS = json.loads(Path(__file__).with_name("data").joinpath("frozen_verdicts.json").read_text())


def _objective(row):
    kind = ObjectiveKind(row["kind"])
    if kind is ObjectiveKind.PARITY:
        return Objective.parity(row["priority"])
    return Objective(kind, row["target"])


def test_table_is_not_degenerate():
    verdicts = [r["sure"] for r in ROWS]
    assert len(ROWS) == 1000 and 0.2 < sum(verdicts) / len(verdicts) < 0.8


@pytest.mark.parametrize("row", ROWS, ids=lambda r: f"{r['seed']}-{r['kind']}")
def test_frozen_verdict(row):
    G = random_game(row["seed"], row["states"], row["letters"], row["observations"])
    rep = solve_sure(G, _objective(row))
    assert rep.verdict is row["sure"]
    GK = build_gk(G)
    winning = sorted(GK.name(s) for s in GK.states if dominates(rep.raw_winning, s))
    assert winning == row["gk_winning"]
