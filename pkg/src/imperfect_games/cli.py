"""Command-line interface.

Machine-readable JSON goes to stdout, a short human summary to stderr.
Exit status: 0 verdict true / pass, 1 verdict false / invalid game,
2 input error, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .almost import (
    UnsupportedObjective,
    almost_report,
    check_structure,
    direct_report,
    solve_almost,
    solve_almost_direct,
)
from .atm import ATMError, atm_accepts, build_game, load_atm
from .formula import FormulaError, parse
from .game import (
    CoverGameStructure,
    GameError,
    GameStructure,
    Objective,
    ObjectiveKind,
    encode_overlapping,
    validate,
)
from .io import dump_game, game_to_dict, load_game
from .knowledge import build_gk, build_knw
from .mucalc import EvalStats, eval_antichain, solve_sure
from .report import REPORT_VERSION

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


class InvariantViolation(Exception):
    pass


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _say(msg):
    print(msg, file=sys.stderr)


def _load_checked(path, need_objective=True):
    G, obj = load_game(path)
    if isinstance(G, CoverGameStructure):
        report = validate(G, obj)
        if report.ok:
            G = encode_overlapping(G)
            _say(f"{path}: overlapping observations encoded as {len(G.states)} (state, observation) pairs")
    report = validate(G, obj)
    if not report.ok:
        details = "; ".join(f"{v.invariant}: {v.detail}" for v in report.violations[:5])
        raise InputError(f"{path}: invalid game: {details}")
    if need_objective and obj is None:
        raise InputError(f"{path}: no objective given")
    return G, obj


# -- commands -------------------------------------------------------------------


def cmd_validate(args):
    G, obj = load_game(args.file)
    report = validate(G, obj)
    _emit({"version": REPORT_VERSION, "command": "validate", **report.as_dict(),
           "states": len(G.states), "letters": len(G.alphabet),
           "observations": len(G.observations)})
    if report.ok:
        _say(f"{args.file}: valid ({len(G.states)} states, {len(G.observations)} observations)")
        return EXIT_TRUE
    for v in report.violations:
        _say(f"{args.file}: {v.invariant}: {v.detail}")
    return EXIT_FALSE


def _witness(G, obj):
    from .oracle import explicit_from_subset, solve_perfect

    GK = build_gk(G)
    E = explicit_from_subset(GK)
    sol = solve_perfect(E, obj)
    out = {"gk_states": len(E)}
    if E.initial in sol.win:
        out["player1"] = {E.names[v]: G.alphabet[a] for v, a in sorted(sol.strategy.items())}
    else:
        out["player2"] = [
            {"knowledge": E.names[v], "letter": G.alphabet[a], "successor": E.names[w]}
            for (v, a), w in sorted(sol.spoiler.items())
        ]
    return out, E.initial in sol.win


def cmd_solve_sure(args):
    G, obj = _load_checked(args.file)
    t0 = time.perf_counter()
    rep = solve_sure(G, obj)
    if args.witness:
        witness, oracle_verdict = _witness(G, obj)
        if oracle_verdict != rep.verdict:
            raise InvariantViolation("antichain verdict disagrees with the explicit solver on G^K")
        rep.extra["witness"] = witness
    _emit(rep.as_dict())
    _say(f"sure {obj.kind.value}: {'winning' if rep.verdict else 'not winning'} "
         f"from {G.initial} ({rep.stats['antichain_size']} antichain elements, "
         f"{time.perf_counter() - t0:.3f}s)")
    return EXIT_TRUE if rep.verdict else EXIT_FALSE


def cmd_solve_almost(args):
    G, obj = _load_checked(args.file)
    t0 = time.perf_counter()
    try:
        if args.direct:
            res = solve_almost_direct(G, obj)
            rep = direct_report(res, obj)
        else:
            res = solve_almost(G, obj)
            errs = check_structure(res)
            if errs:
                raise InvariantViolation("; ".join(errs[:5]))
            rep = almost_report(res, obj, ranks=args.ranks)
    except UnsupportedObjective as e:
        raise InputError(str(e)) from None
    if args.direct and args.ranks:
        _say("note: ranks are only computed by the explicit solver")
    _emit(rep.as_dict())
    _say(f"almost-sure {obj.kind.value} ({rep.stats['algorithm']}): "
         f"{'winning' if rep.verdict else 'not winning'} from {G.initial} "
         f"({time.perf_counter() - t0:.3f}s)")
    return EXIT_TRUE if rep.verdict else EXIT_FALSE


def _lift_objective(obj, label_of, names):
    """Objective over singleton observations of a constructed game."""
    if obj is None:
        return None
    if obj.kind is ObjectiveKind.PARITY:
        return Objective.parity({n: obj.priority[label_of[n]] for n in names})
    return Objective(obj.kind, [n for n in names if label_of[n] in obj.target])


def _constructed(G, obj, which):
    if which == "gk":
        C = build_gk(G)
        names = [C.name(s) for s in C.states]
        labels = {C.name(s): C.observation(s) for s in C.states}
        succ = C.succ
        initial = C.name(C.initial)
    else:
        C = build_knw(G)
        names = [C.name(q) for q in range(len(C.states))]
        labels = {C.name(q): G.observation_of_set(s) for q, (s, _) in enumerate(C.states)}
        succ = C.succ
        initial = names[C.initial]
    transitions = [(names[i], G.alphabet[a], names[j])
                   for i, row in enumerate(succ) for a, js in enumerate(row) for j in js]
    H = GameStructure(names, initial, G.alphabet, transitions, names, {n: [n] for n in names})
    return H, _lift_objective(obj, labels, names), labels


def _dot(H, labels):
    lines = ["digraph G {", "  rankdir=LR;"]
    for n in H.states:
        shape = "doublecircle" if n == H.initial else "ellipse"
        lines.append(f"  {json.dumps(n)} [shape={shape}, xlabel={json.dumps(labels[n])}];")
    edges = {}
    for src, a, dst in sorted(H.transitions):
        edges.setdefault((src, dst), []).append(a)
    for (src, dst), letters in sorted(edges.items()):
        lines.append(f"  {json.dumps(src)} -> {json.dumps(dst)} [label={json.dumps(','.join(letters))}];")
    lines.append("}")
    return "\n".join(lines)


def cmd_construct(args):
    G, obj = _load_checked(args.file, need_objective=False)
    H, lifted, labels = _constructed(G, obj, args.which)
    if args.dot:
        print(_dot(H, labels))
    else:
        out = {"version": REPORT_VERSION, **game_to_dict(H, lifted)}
        out["source_observation"] = {n: labels[n] for n in H.states}
        _emit(out)
    _say(f"{args.which}: {len(H.states)} states, {len(H.transitions)} transitions")
    return EXIT_TRUE


def cmd_eval(args):
    G, _ = _load_checked(args.file, need_objective=False)
    try:
        phi = parse(args.formula, G.observations)
    except FormulaError as e:
        raise InputError(f"formula: {e}") from None
    stats = EvalStats()
    try:
        value = eval_antichain(G, phi, stats=stats)
    except FormulaError as e:
        raise InputError(f"formula: {e}") from None
    verdict = value.dominates(G.initial_mask)
    _emit({"version": REPORT_VERSION, "command": "eval", "formula": str(phi),
           "verdict": verdict, "antichain": value.to_names(G), "stats": stats.as_dict()})
    _say(f"{phi}: {len(value)} antichain elements; initial state "
         f"{'included' if verdict else 'not included'}")
    return EXIT_TRUE if verdict else EXIT_FALSE


def cmd_oracle_sweep(args):
    from .oracle import sweep_almost, sweep_correspondence, sweep_sure

    results = []
    kinds = ["correspondence", "sure", "almost"] if args.kind == "all" else [args.kind]
    for k in kinds:
        if k == "correspondence":
            r = sweep_correspondence(args.seed, args.count, formulas=args.formulas,
                                     max_states=args.states)
        elif k == "sure":
            r = sweep_sure(args.seed, args.count, max_states=args.states)
        else:
            r = sweep_almost(args.seed, args.count, max_states=args.states)
        results.append(r)
    ok = all(r.ok for r in results)
    _emit({"version": REPORT_VERSION, "command": "oracle sweep", "seed": args.seed,
           "count": args.count, "states": args.states, "ok": ok,
           "results": [r.as_dict() for r in results]})
    _say(f"{'check':<16}{'cases':>8}  result")
    for r in results:
        _say(f"{r.name:<16}{r.checked:>8}  {'pass' if r.ok else 'FAIL (%d)' % len(r.disagreements)}")
    return EXIT_TRUE if ok else EXIT_INTERNAL


def cmd_gen_atm(args):
    M, cells, word = load_atm(args.file)
    g = build_game(M, cells, word)
    text = dump_game(g.game, g.objective)
    stats = dict(g.stats)
    if args.check:
        stats["atm_accepts"] = atm_accepts(M, cells, word)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        _emit({"version": REPORT_VERSION, "command": "gen-atm", "output": args.output,
               "stats": stats})
    else:
        print(text)
    if args.stats or args.output:
        _say(" ".join(f"{k}={v}" for k, v in stats.items()))
    return EXIT_TRUE


def cmd_simulate(args):
    from .oracle import simulate

    G, obj = _load_checked(args.file)
    try:
        res = solve_almost(G, obj)
    except UnsupportedObjective as e:
        raise InputError(str(e)) from None
    H = res.H
    sim = simulate(H, res.strategy, res.targets, res.Z, steps=args.steps, trials=args.trials,
                   seed=args.seed, adversary=args.adversary, ranks=res.ranks)
    out = {"version": REPORT_VERSION, "command": "simulate", "verdict": res.verdict,
           "adversary": args.adversary, "k": args.k, **sim.as_dict(args.k)}
    _emit(out)
    _say(f"{sim.trials} trials x {sim.steps} steps: {out['z_exits']} exits from the winning "
         f"set, {100 * sim.fraction_at_least(args.k):.2f}% of trials visit the target "
         f">= {args.k} times")
    if out["z_exits"] and res.verdict:
        return EXIT_INTERNAL
    return EXIT_TRUE if res.verdict else EXIT_FALSE


# -- parser ---------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="imperfect-games",
                                description="Solve games of imperfect information.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a game file")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("solve", help="decide sure or almost-sure winning")
    ssub = s.add_subparsers(dest="mode", required=True)
    ss = ssub.add_parser("sure", help="deterministic sure winning (antichains)")
    ss.add_argument("file")
    ss.add_argument("--witness", action="store_true",
                    help="add a positional witness from the explicit solver on G^K")
    ss.set_defaults(func=cmd_solve_sure)
    sa = ssub.add_parser("almost-buchi", help="randomized almost-sure Buchi winning")
    sa.add_argument("file")
    sa.add_argument("--ranks", action="store_true", help="emit the rank of every winning pair")
    mode = sa.add_mutually_exclusive_group()
    mode.add_argument("--direct", action="store_true", help="per-state antichains, no Knw(G)")
    mode.add_argument("--explicit", action="store_true", help="fixed point on Knw(G) (default)")
    sa.set_defaults(func=cmd_solve_almost)

    c = sub.add_parser("construct", help="dump G^K or Knw(G) as a perfect-information game")
    c.add_argument("which", choices=["gk", "knw"])
    c.add_argument("file")
    c.add_argument("--dot", action="store_true", help="Graphviz output instead of JSON")
    c.set_defaults(func=cmd_construct)

    e = sub.add_parser("eval", help="evaluate a closed mu-calculus formula over antichains")
    e.add_argument("file")
    e.add_argument("--formula", required=True)
    e.set_defaults(func=cmd_eval)

    o = sub.add_parser("oracle", help="cross-check solvers against brute force")
    osub = o.add_subparsers(dest="oracle_cmd", required=True)
    sw = osub.add_parser("sweep", help="random sweep")
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--count", type=int, default=100)
    sw.add_argument("--states", type=int, default=6)
    sw.add_argument("--formulas", type=int, default=20)
    sw.add_argument("--kind", choices=["all", "correspondence", "sure", "almost"], default="all")
    sw.set_defaults(func=cmd_oracle_sweep)

    g = sub.add_parser("gen-atm", help="encode a bounded alternating Turing machine as a game")
    g.add_argument("file")
    g.add_argument("-o", "--output")
    g.add_argument("--stats", action="store_true", help="print state counts to stderr")
    g.add_argument("--check", action="store_true", help="also decide acceptance directly")
    g.set_defaults(func=cmd_gen_atm)

    m = sub.add_parser("simulate", help="Monte Carlo run of the almost-sure strategy")
    m.add_argument("file")
    m.add_argument("--trials", type=int, default=10000)
    m.add_argument("--steps", type=int, default=200)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--k", type=int, default=5, help="visit threshold for the summary")
    m.add_argument("--adversary", choices=["uniform", "positional", "max-rank"], default="uniform")
    m.set_defaults(func=cmd_simulate)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_TRUE
    try:
        return args.func(args)
    except (InputError, GameError, ATMError, FormulaError) as e:
        _say(f"error: {e}")
        return EXIT_INPUT
    except InvariantViolation as e:
        _say(f"invariant violation: {e}")
        return EXIT_INTERNAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
