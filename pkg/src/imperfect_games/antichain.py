"""Antichains of nonempty state sets.

An antichain stands for the downward-closed family of all nonempty subsets
of its elements.  Elements are int bit masks (see :mod:`imperfect_games.game`)
kept in canonical order: by cardinality, then by mask value.  The empty
antichain is the bottom of the lattice and ``{L}`` its top; neither is
special-cased.
"""
from __future__ import annotations

from typing import Iterable


def _key(s: int):
    return (s.bit_count(), s)


class Antichain:
    """Immutable, canonically ordered antichain of nonempty bit masks."""

    __slots__ = ("elements", "_hash")

    def __init__(self, elements: Iterable[int] = (), *, _trusted: bool = False):
        if _trusted:
            elems = tuple(elements)
        else:
            elems = _maximal_tuple(elements)
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "_hash", hash(elems))

    def __setattr__(self, name, value):
        raise AttributeError("Antichain is immutable")

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __bool__(self):
        return bool(self.elements)

    def __eq__(self, other):
        if isinstance(other, Antichain):
            return self.elements == other.elements
        return NotImplemented

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(bin(s) for s in self.elements)
        return f"Antichain([{inner}])"

    def __le__(self, other):
        return leq(self, other)

    def __or__(self, other):
        return join(self, other)

    def __and__(self, other):
        return meet(self, other)

    def dominates(self, s: int) -> bool:
        return dominates(self, s)

    def restrict(self, pred) -> "Antichain":
        """Keep the elements satisfying ``pred``; the result is still maximal."""
        return Antichain((s for s in self.elements if pred(s)), _trusted=True)

    def to_names(self, G) -> list:
        """Sorted arrays of sorted state names, for reports."""
        return sorted(sorted(G.state_names(s)) for s in self.elements)


def _maximal_tuple(q: Iterable[int]) -> tuple:
    # Insert largest first; a set survives only if no kept set contains it.
    cands = sorted({s for s in q if s}, key=_key, reverse=True)
    kept: list[int] = []
    for s in cands:
        for k in kept:
            if s & k == s:
                break
        else:
            kept.append(s)
    kept.sort(key=_key)
    return tuple(kept)


def maximal(q: Iterable[int]) -> Antichain:
    """The maximal nonempty elements of a family of state sets."""
    return Antichain(q)


def leq(q: Antichain, q2: Antichain) -> bool:
    """``q`` below ``q2``: every element of ``q`` is inside some element of ``q2``."""
    return all(dominates(q2, s) for s in q.elements)


def join(q: Antichain, q2: Antichain) -> Antichain:
    if not q:
        return q2
    if not q2:
        return q
    return Antichain(q.elements + q2.elements)


def meet(q: Antichain, q2: Antichain) -> Antichain:
    return Antichain(a & b for a in q.elements for b in q2.elements)


def dominates(q: Antichain, s: int) -> bool:
    """Is ``s`` in the downward closure of ``q``?"""
    for e in q.elements:
        if s & e == s:
            return True
    return False


BOTTOM = Antichain(())


def top(G) -> Antichain:
    """``{L}`` for the game ``G``."""
    return Antichain((G.full,), _trusted=True)
