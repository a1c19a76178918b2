"""Sure and almost-sure winning in games of imperfect information.

Sure winning for parity-expressible objectives is decided by evaluating a
mu-calculus formula over antichains of knowledge sets; almost-sure Buchi
winning is decided on the knowledge/state product game.
"""
from .antichain import Antichain, dominates, join, leq, maximal, meet
from .game import (
    CoverGameStructure,
    GameError,
    GameStructure,
    Objective,
    ObjectiveKind,
    encode_overlapping,
    knowledge_update,
    post,
    validate,
)
from .io import dump_game, load_game, parse_game
from .knowledge import build_gk, build_knw, buchi_targets, map_prefix_h
from .mucalc import (
    characteristic_formula,
    cpre_antichain,
    cpre_subset,
    eval_antichain,
    eval_subset,
    solve_sure,
)
from .almost import (
    allow,
    allow_class,
    apre,
    solve_almost,
    solve_almost_buchi,
    solve_almost_buchi_direct,
    spre,
)
from .formula import parse as parse_formula

__version__ = "0.1.0"
