"""Command-line front end.

Exit status: 0 when every check passes, 1 when a theorem check fails or a
conjecture sweep finds a counterexample, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path

from . import config
from .cache import ResultCache
from .complexes import SimplicialComplex, independence_complex
from .errors import TopmatchError
from .game import interactive_game, psi
from .graphcore import (
    Graph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    empty_graph,
    line_graph,
    path_graph,
)
from .homology import boundary_matrix, eta, reduced_betti_numbers
from .latin import (
    SymbolArray,
    cyclic_latin,
    is_equi_n,
    is_latin,
    max_partial_transversal,
    random_equi_array,
    random_latin,
    stein_array,
)
from .rainbow import (
    ColorPartition,
    bounds_table,
    check_sufficient_conditions,
    hall_condition_check,
    isr_exists,
    max_partial_isr,
    max_rainbow_matching,
)
from .strategy import (
    GameTranscript,
    all_playouts,
    audit_transcript,
    con_strategy_play,
    delete_until_forced,
    optimal_adversary,
    random_adversary,
)
from .verify import CHECKS, Runner, run_check


_NAMED = {
    "C": cycle_graph,
    "P": path_graph,
    "K": complete_graph,
    "E": empty_graph,
}


def load_graph(spec: str) -> Graph:
    """A graph JSON file, or a name such as C4, P4, K3, E2, K3,3."""
    path = Path(spec)
    if path.exists():
        return Graph.from_json(path.read_text())
    m = re.fullmatch(r"K(\d+),(\d+)", spec)
    if m:
        return complete_bipartite(int(m[1]), int(m[2]))
    m = re.fullmatch(r"([CPKE])(\d+)", spec)
    if m:
        return _NAMED[m[1]](int(m[2]))
    raise argparse.ArgumentTypeError(f"no graph file or known name {spec!r}")


def _num(v):
    return "inf" if v == float("inf") else v


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, default=str, indent=1))
    else:
        print(text)


def cmd_eta(args) -> int:
    if args.complex:
        c = SimplicialComplex.from_dict(json.loads(Path(args.complex).read_text()))
    else:
        g = load_graph(args.graph)
        if args.matching:
            g = line_graph(g)
        max_dim = None if args.cap is None else max(args.cap - 1, 0)
        c = independence_complex(g, max_dim=max_dim, budget=args.budget_faces)
    if args.boundary is not None:
        sys.stdout.write(boundary_matrix(c, args.boundary).triplets())
        return 0
    value = eta(c, cap=args.cap)
    payload = {"eta": _num(value), "f_vector": c.f_vector(), "capped": args.cap is not None}
    if args.cap is None:
        payload["reduced_betti"] = reduced_betti_numbers(c)
    _emit(args, payload, f"eta = {_num(value)}" + (f"  (capped at {args.cap})" if args.cap is not None else ""))
    return 0


def cmd_psi(args) -> int:
    g = load_graph(args.graph)
    value = psi(line_graph(g) if args.line else g, cap=args.budget_vertices)
    _emit(args, {"psi": _num(value)}, f"psi = {_num(value)}")
    return 0


def cmd_rainbow(args) -> int:
    inst = ColorPartition.from_json(Path(args.instance).read_text())
    payload: dict = {"mode": inst.mode, "classes": inst.m}
    if inst.mode == "edge":
        size, witness = max_rainbow_matching(inst)
        payload.update(max_rainbow_matching=size, witness=witness)
        text = f"max rainbow matching {size} of {inst.m} colours; witness {witness}"
    else:
        size, witness = max_partial_isr(inst)
        payload.update(max_partial_isr=size, isr=isr_exists(inst)[0], witness=witness)
        text = f"max partial ISR {size} of {inst.m} classes; witness {witness}"
    payload["conditions"] = check_sufficient_conditions(inst)
    if args.hall is not None:
        rep = hall_condition_check(inst, args.hall, oracle=args.oracle)
        payload["hall"] = rep.__dict__
        text += f"\nHall condition d={args.hall} ({args.oracle}): {'pass' if rep.passed else 'fail'}; " \
                f"worst subset {rep.worst_subset} value {_num(rep.worst_value)} needs {rep.worst_required}"
    _emit(args, payload, text)
    return 0


def cmd_latin(args) -> int:
    if args.array:
        text_in = Path(args.array).read_text()
        arr = SymbolArray.from_json(text_in) if text_in.lstrip().startswith("{") else SymbolArray.from_text(text_in)
    elif args.cyclic:
        arr = cyclic_latin(args.cyclic)
    elif args.stein:
        arr = stein_array(args.stein)
    elif args.random_latin:
        arr = random_latin(args.random_latin, args.seed)
    elif args.random_equi:
        arr = random_equi_array(args.random_equi, args.seed)
    else:
        raise argparse.ArgumentTypeError("give --array, --cyclic, --stein, --random-latin or --random-equi")
    r = max_partial_transversal(arr)
    payload = {"n": arr.n, "cells": [list(x) for x in arr.cells], "latin": is_latin(arr),
               "equi_n": is_equi_n(arr), "max_partial_transversal": r.size, "witness": r.cells, "exact": r.exact}
    text = arr.to_text() + f"latin={is_latin(arr)} equi-n={is_equi_n(arr)} " \
                           f"max partial transversal={r.size}{'' if r.exact else ' (lower bound)'}"
    _emit(args, payload, text)
    return 0


def cmd_strategy(args) -> int:
    if args.audit:
        tr = GameTranscript.from_jsonl(Path(args.audit).read_text())
        rep = audit_transcript(tr)
        return _report_audits(args, [(tr, rep)])
    g = complete_bipartite(args.knn, args.knn) if args.knn else load_graph(args.graph)
    if args.adversary == "exhaustive":
        results = [(tr, audit_transcript(tr)) for tr in all_playouts(g)]
        return _report_audits(args, results)
    adversary = {
        "optimal": optimal_adversary,
        "delete": delete_until_forced,
        "random": random_adversary(args.seed),
    }[args.adversary]
    tr = con_strategy_play(g, adversary)
    if args.transcript:
        Path(args.transcript).write_text(tr.to_jsonl())
    return _report_audits(args, [(tr, audit_transcript(tr))])


def _report_audits(args, results) -> int:
    finite = [tr.t for tr, _ in results if tr.infinity_reason is None]
    failures = [(i, c) for i, (_, rep) in enumerate(results) for c in rep.failures()]
    payload = {
        "playouts": len(results),
        "finite": len(finite),
        "t_values": sorted(set(finite)),
        "bound": str(results[0][1].bound) if results and results[0][1].bound is not None else None,
        "failures": [{"playout": i, "check": c.name, "step": c.step, "detail": c.detail} for i, c in failures],
    }
    text = f"{len(results)} playout(s), {len(finite)} finite, t in {sorted(set(finite))}; " \
           f"{'all audit checks pass' if not failures else f'{len(failures)} audit failures'}"
    for i, c in failures[:10]:
        text += f"\n  playout {i}: {c.name} step {c.step}: {c.detail}"
    _emit(args, payload, text)
    return 1 if failures else 0


def cmd_play(args) -> int:
    g = load_graph(args.graph)
    tr = interactive_game(g, args.side, cap=args.budget_vertices)
    print(json.dumps({"finished": tr.finished, "value": _num(tr.value), "psi": _num(tr.psi_value),
                      "moves": [[m.edge, list(m.endpoints), m.response.value] for m in tr.moves]}))
    return 0


def cmd_bounds(args) -> int:
    rows = bounds_table(args.n)
    text = "\n".join(f"{r['name']:<14} {r['setting']:<34} {r['bound']:<22} >= {r['guaranteed']}" for r in rows)
    _emit(args, {"n": args.n, "bounds": rows}, text)
    return 0


def cmd_verify(args) -> int:
    cache_dir = os.environ.get("TOPMATCH_CACHE") or args.cache_dir
    run = Runner(ResultCache(cache_dir), threads=args.threads, seed=args.seed)
    params: dict = {}
    if args.n:
        params["ns"] = tuple(args.n)
    if args.samples is not None:
        params["samples"] = args.samples
    if args.vertices is not None:
        params["vertices"] = args.vertices
    try:
        rep = run_check(args.check, run, **params)
    except TypeError as exc:
        raise argparse.ArgumentTypeError(f"option not accepted by verify {args.check}: {exc}") from None
    _emit(args, rep.to_dict(), rep.table())
    return rep.exit_code


def _global_options(parser: argparse.ArgumentParser, defaults: bool) -> None:
    # Subparsers get the same flags with suppressed defaults so the options
    # work on either side of the subcommand name.
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--cache-dir", default=d(None))
    parser.add_argument("--budget-faces", type=int, default=d(config.DEFAULT_BUDGETS.faces))
    parser.add_argument("--budget-vertices", type=int, default=d(config.DEFAULT_BUDGETS.psi_vertices))
    parser.add_argument("--threads", type=int, default=d(1))
    parser.add_argument("--json", action="store_true", default=d(False))
    parser.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topmatch", description=__doc__.splitlines()[0])
    _global_options(p, True)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, False)
    sub = p.add_subparsers(dest="command", required=True)
    add = sub.add_parser

    def _add(name, **kw):
        return add(name, parents=[common], **kw)

    sub.add_parser = _add

    s = sub.add_parser("eta", help="homological connectivity of I(G), M(G) or a complex dump")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph")
    src.add_argument("--complex")
    s.add_argument("--matching", action="store_true", help="use the matching complex M(G)")
    s.add_argument("--cap", type=int)
    s.add_argument("--boundary", type=int, metavar="J", help="print boundary matrix J as sparse triplets")
    s.set_defaults(fn=cmd_eta)

    s = sub.add_parser("psi", help="exact value of the CON/NON game")
    s.add_argument("--graph", required=True)
    s.add_argument("--line", action="store_true", help="play on the line graph")
    s.set_defaults(fn=cmd_psi)

    s = sub.add_parser("rainbow", help="rainbow matching / ISR of an instance file")
    s.add_argument("--instance", required=True)
    s.add_argument("--hall", type=int, metavar="D")
    s.add_argument("--oracle", choices=["eta", "psi"], default="eta")
    s.set_defaults(fn=cmd_rainbow)

    s = sub.add_parser("latin", help="partial transversals of a symbol array")
    s.add_argument("--array")
    s.add_argument("--cyclic", type=int)
    s.add_argument("--stein", type=int)
    s.add_argument("--random-latin", type=int)
    s.add_argument("--random-equi", type=int)
    s.set_defaults(fn=cmd_latin)

    s = sub.add_parser("strategy", help="play and audit CON's sequence strategy")
    s.add_argument("--graph")
    s.add_argument("--knn", type=int)
    s.add_argument("--audit", metavar="TRANSCRIPT")
    s.add_argument("--adversary", choices=["optimal", "random", "delete", "exhaustive"], default="optimal")
    s.add_argument("--transcript", metavar="OUT")
    s.set_defaults(fn=cmd_strategy)

    s = sub.add_parser("play", help="play the game in the terminal")
    s.add_argument("--graph", required=True)
    s.add_argument("--side", choices=["CON", "NON", "con", "non"], required=True)
    s.set_defaults(fn=cmd_play)

    s = sub.add_parser("verify", help="run a verification sweep")
    s.add_argument("check", choices=sorted(CHECKS))
    s.add_argument("--n", type=int, nargs="+")
    s.add_argument("--samples", type=int)
    s.add_argument("--vertices", type=int)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("bounds", help="table of known partial transversal bounds")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(fn=cmd_bounds)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    if args.command == "strategy" and not (args.graph or args.knn or args.audit):
        parser.error("strategy needs --graph, --knn or --audit")
    try:
        return args.fn(args)
    except (TopmatchError, argparse.ArgumentTypeError, json.JSONDecodeError, OSError) as exc:
        print(f"topmatch: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
