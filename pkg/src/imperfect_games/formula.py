"""Mu-calculus formulas over observation atoms.

The syntax has atoms, variables, binary ``or``/``and``, the controllable
predecessor ``pre`` and the two fixed-point binders.  There is no native
negation: ``not o`` is sugar for the disjunction of all other atoms, and
``false`` is encoded as ``mu X . X`` so that every formula stays inside the
grammar.

Text syntax (prefix form)::

    mu X . or(atom o4, pre(X))
    nu Y . mu X . or(pre(X), and(atom o4, pre(Y)))
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import count


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    obs: str

    def __str__(self):
        return f"atom {_quote(self.obs)}"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Or:
    left: object
    right: object

    def __str__(self):
        return f"or({self.left}, {self.right})"


@dataclass(frozen=True)
class And:
    left: object
    right: object

    def __str__(self):
        return f"and({self.left}, {self.right})"


@dataclass(frozen=True)
class Pre:
    body: object

    def __str__(self):
        return f"pre({self.body})"


@dataclass(frozen=True)
class Mu:
    var: str
    body: object

    def __str__(self):
        return f"mu {self.var} . {self.body}"


@dataclass(frozen=True)
class Nu:
    var: str
    body: object

    def __str__(self):
        return f"nu {self.var} . {self.body}"


Formula = Atom | Var | Or | And | Pre | Mu | Nu
BINDERS = (Mu, Nu)

_WORD = re.compile(r"[A-Za-z0-9_'\-{}|@:]+$")


def _quote(name: str) -> str:
    if _WORD.match(name) and name not in _KEYWORDS:
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def false_formula(var: str = "F") -> Mu:
    return Mu(var, Var(var))


def disj(parts, false_var: str = "F"):
    """Right-nested disjunction; the empty disjunction is ``false``."""
    parts = list(parts)
    if not parts:
        return false_formula(false_var)
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def conj(parts):
    parts = list(parts)
    if not parts:
        raise FormulaError("empty conjunction has no encoding without observations")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def neg(o: str, observations) -> object:
    """``not o`` as the disjunction of the remaining observation atoms."""
    return disj(Atom(x) for x in observations if x != o)


def true_formula(observations) -> object:
    return disj(Atom(x) for x in observations)


def free_vars(phi) -> frozenset:
    match phi:
        case Atom():
            return frozenset()
        case Var(name):
            return frozenset([name])
        case Or(l, r) | And(l, r):
            return free_vars(l) | free_vars(r)
        case Pre(b):
            return free_vars(b)
        case Mu(v, b) | Nu(v, b):
            return free_vars(b) - {v}
    raise FormulaError(f"not a formula: {phi!r}")


def is_closed(phi) -> bool:
    return not free_vars(phi)


def atoms(phi) -> frozenset:
    match phi:
        case Atom(o):
            return frozenset([o])
        case Var():
            return frozenset()
        case Or(l, r) | And(l, r):
            return atoms(l) | atoms(r)
        case Pre(b) | Mu(_, b) | Nu(_, b):
            return atoms(b)
    raise FormulaError(f"not a formula: {phi!r}")


def depth(phi) -> int:
    match phi:
        case Atom() | Var():
            return 0
        case Or(l, r) | And(l, r):
            return 1 + max(depth(l), depth(r))
        case Pre(b) | Mu(_, b) | Nu(_, b):
            return 1 + depth(b)
    raise FormulaError(f"not a formula: {phi!r}")


def rename_apart(phi):
    """Rename binders so no variable is bound twice on a root-to-leaf path."""
    fresh = count(1)
    used = _all_vars(phi)

    def new_name(base):
        while True:
            cand = f"{base}_{next(fresh)}"
            if cand not in used:
                used.add(cand)
                return cand

    def go(f, env, bound):
        match f:
            case Atom():
                return f
            case Var(name):
                return Var(env.get(name, name))
            case Or(l, r):
                return Or(go(l, env, bound), go(r, env, bound))
            case And(l, r):
                return And(go(l, env, bound), go(r, env, bound))
            case Pre(b):
                return Pre(go(b, env, bound))
            case Mu(v, b) | Nu(v, b):
                nv = new_name(v) if v in bound else v
                inner = go(b, {**env, v: nv}, bound | {nv})
                return type(f)(nv, inner)
        raise FormulaError(f"not a formula: {f!r}")

    return go(phi, {}, frozenset())


def _all_vars(phi) -> set:
    match phi:
        case Atom():
            return set()
        case Var(name):
            return {name}
        case Or(l, r) | And(l, r):
            return _all_vars(l) | _all_vars(r)
        case Pre(b):
            return _all_vars(b)
        case Mu(v, b) | Nu(v, b):
            return {v} | _all_vars(b)
    raise FormulaError(f"not a formula: {phi!r}")


# -- parser ----------------------------------------------------------------------

_KEYWORDS = {"mu", "nu", "or", "and", "pre", "atom", "not", "true", "false"}
_TOKEN = re.compile(r'\s*(?:(?P<punct>[(),.])|"(?P<str>(?:[^"\\]|\\.)*)"|(?P<word>[^\s(),."]+))')


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaError(f"unexpected character at column {pos + 1}: {text[pos:pos + 10]!r}")
        if m.group("punct"):
            out.append(("punct", m.group("punct"), m.start("punct")))
        elif m.group("str") is not None:
            s = re.sub(r"\\(.)", r"\1", m.group("str"))
            out.append(("name", s, m.start("str") - 1))
        else:
            out.append(("word", m.group("word"), m.start("word")))
        pos = m.end()
    return out


def parse(text: str, observations=None):
    """Parse the prefix syntax; ``not`` and ``true`` need ``observations``."""
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("eof", None, len(text))

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] == "eof":
            raise FormulaError("unexpected end of formula")
        if kind and tok[0] != kind or value and tok[1] != value:
            want = value or kind
            raise FormulaError(f"expected {want!r} at column {tok[2] + 1}, got {tok[1]!r}")
        pos += 1
        return tok

    def name():
        tok = peek()
        if tok[0] in ("word", "name"):
            take()
            return tok[1]
        raise FormulaError(f"expected a name at column {tok[2] + 1}")

    def need_obs(what):
        if observations is None:
            raise FormulaError(f"{what!r} needs the game's observation list")
        return list(observations)

    def formula():
        tok = peek()
        if tok[0] == "punct" and tok[1] == "(":
            take()
            f = formula()
            take("punct", ")")
            return f
        if tok[0] == "name":
            raise FormulaError(f"quoted name at column {tok[2] + 1} must follow 'atom' or 'not'")
        word = take("word")[1]
        if word in ("mu", "nu"):
            v = name()
            take("punct", ".")
            body = formula()
            return Mu(v, body) if word == "mu" else Nu(v, body)
        if word in ("or", "and"):
            take("punct", "(")
            parts = [formula()]
            while peek()[1] == ",":
                take()
                parts.append(formula())
            take("punct", ")")
            if len(parts) < 2:
                raise FormulaError(f"{word} needs at least two arguments")
            return disj(parts) if word == "or" else conj(parts)
        if word == "pre":
            take("punct", "(")
            f = formula()
            take("punct", ")")
            return Pre(f)
        if word == "atom":
            return Atom(name())
        if word == "not":
            return neg(name(), need_obs("not"))
        if word == "true":
            return true_formula(need_obs("true"))
        if word == "false":
            return false_formula()
        return Var(word)

    phi = formula()
    if pos != len(toks):
        raise FormulaError(f"trailing input at column {toks[pos][2] + 1}")
    if observations is not None:
        unknown = atoms(phi) - set(observations)
        if unknown:
            raise FormulaError(f"unknown observations in formula: {sorted(unknown)}")
    return rename_apart(phi)
