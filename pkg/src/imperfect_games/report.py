"""Solver reports with a stable JSON rendering."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

REPORT_VERSION = "1"


def objective_json(obj):
    if obj is None:
        return None
    out = {"kind": obj.kind.value}
    if obj.priority is not None:
        out["priority"] = dict(sorted(obj.priority.items()))
    else:
        out["target"] = sorted(obj.target)
    return out


@dataclass
class SolveReport:
    verdict: bool
    mode: str
    objective: object = None
    winning: dict = field(default_factory=dict)
    strategy: object = None
    stats: dict = field(default_factory=dict)
    # Solver-native values, not serialised.
    raw_winning: object = field(default=None, repr=False)
    raw_strategy: object = field(default=None, repr=False)
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        out = {
            "version": REPORT_VERSION,
            "mode": self.mode,
            "verdict": self.verdict,
            "objective": objective_json(self.objective),
            "winning": self.winning,
            "strategy": self.strategy,
            "stats": self.stats,
        }
        out.update(self.extra)
        return out

    def to_json(self, indent=2) -> str:
        return json.dumps(self.as_dict(), indent=indent, sort_keys=False)
