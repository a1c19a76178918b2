"""Reading and writing the JSON game format."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .game import CoverGameStructure, GameError, GameStructure, Objective


class GameFileError(GameError):
    """A game file that cannot be parsed; the message names line or field."""


@lru_cache(maxsize=None)
def schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("data/game.schema.json").read_text())


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture such as ``"fig1.game"``."""
    return Path(str(resources.files(__package__).joinpath("data", name)))


def _field_path(err) -> str:
    parts = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
    return "$" + parts


def parse_game(text: str, source: str = "<string>"):
    """Parse game JSON into ``(GameStructure, Objective or None)``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GameFileError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None
    return game_from_dict(data, source)


def game_from_dict(data, source: str = "<dict>"):
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise GameFileError(f"{source}: field {_field_path(e)}: {e.message}")
    cls = CoverGameStructure if data.get("covering") else GameStructure
    G = cls(
        states=data["states"],
        initial=data["initial"],
        alphabet=data["alphabet"],
        transitions=[tuple(t) for t in data["transitions"]],
        observations=list(data["observations"]),
        gamma=data["observations"],
    )
    obj = None
    if "objective" in data:
        o = data["objective"]
        obj = Objective(o["kind"], o.get("target", ()), o.get("priority"))
    return G, obj


def load_game(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise GameFileError(f"{path}: {e.strerror}") from None
    return parse_game(text, str(path))


def game_to_dict(G: GameStructure, obj: Objective | None = None) -> dict:
    out = {
        "states": list(G.states),
        "initial": G.initial,
        "alphabet": list(G.alphabet),
        "transitions": [list(t) for t in sorted(G.transitions, key=lambda t: (
            G.state_index.get(t[0], -1), G.letter_index.get(t[1], -1), G.state_index.get(t[2], -1)))],
        "observations": {o: sorted(G.gamma[o], key=G.state_index.get) for o in G.observations},
    }
    if isinstance(G, CoverGameStructure):
        out["covering"] = True
    if obj is not None:
        o = {"kind": obj.kind.value}
        if obj.priority is not None:
            o["priority"] = dict(obj.priority)
        else:
            o["target"] = sorted(obj.target)
        out["objective"] = o
    return out


def dump_game(G: GameStructure, obj: Objective | None = None) -> str:
    return json.dumps(game_to_dict(G, obj), indent=2)
