"""Command-line entry point.

Subcommands: parse, classify, check, sat, reduce, oracle, selftest.
Every subcommand supports --json for a single machine-readable object
(schema version 1).  Exit codes: 0 = satisfiable/true/success,
1 = unsatisfiable/false, 2 = error, 3 = budget exceeded or bounded verdict.
The MDL_BUDGET environment variable overrides the default node budget.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import classifier, reductions, solver, teamsem
from .formula import (
    FormulaSyntaxError, modal_depth, parse, render, signature,
)
from .kripke import ModelFormatError, parse_structure, render_structure
from .randgen import random_formula
from .reductions import InstanceFormatError

SCHEMA = 1

_VERDICT_EXIT = {
    solver.Verdict.SAT: 0,
    solver.Verdict.UNSAT: 1,
    solver.Verdict.BOUNDED_UNSAT: 3,
    solver.Verdict.BUDGET_EXCEEDED: 3,
}


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _emit_json(payload: dict) -> None:
    payload = {"schema": SCHEMA, **payload}
    print(json.dumps(payload, sort_keys=True))


class _UsageError(ValueError):
    pass


def _default_budget() -> int:
    value = os.environ.get("MDL_BUDGET")
    if value is None:
        return solver.DEFAULT_BUDGET
    try:
        return int(value)
    except ValueError:
        raise _UsageError(f"MDL_BUDGET must be an integer, got {value!r}") from None


def _cmd_parse(args) -> int:
    f = parse(_read_input(args.file))
    sig = signature(f)
    if args.json:
        _emit_json({
            "command": "parse",
            "formula": render(f),
            "operators": sorted(sig.operators),
            "max_dep_arity": sig.max_dep_arity,
            "modal_depth": modal_depth(f),
        })
    else:
        print(f"formula: {render(f)}")
        print("operators: %s" % (", ".join(sorted(sig.operators)) or "(none)"))
        arity = "none" if sig.max_dep_arity is None else sig.max_dep_arity
        print(f"max-dep-arity: {arity}")
        print(f"modal-depth: {modal_depth(f)}")
    return 0


def _cmd_classify(args) -> int:
    f = parse(_read_input(args.file))
    result = classifier.classify(signature(f), args.arity_bound)
    if args.json:
        _emit_json({
            "command": "classify",
            "complexity": result.complexity,
            "result_kind": result.result_kind,
            "recommended_engine": result.recommended_engine,
            "arity_caveat": result.arity_caveat,
            "matched_rules": [
                {"pattern": r.pattern, "complexity": r.complexity,
                 "result_kind": r.result_kind, "citation": r.citation}
                for r in result.matched_rules
            ],
        })
    else:
        print(f"complexity: {result.complexity}")
        print(f"kind: {result.result_kind}")
        print(f"engine: {result.recommended_engine}")
        if result.arity_caveat:
            print("caveat: bounded table is stated for arity bounds >= 3; "
                  "smaller bounds inherit it as an upper bound only")
        for r in result.matched_rules:
            print(f"rule: {r.pattern} {r.complexity} {r.result_kind} [{r.citation}]")
    return 0


def _cmd_check(args) -> int:
    structure = parse_structure(_read_input(args.model))
    team = frozenset(w for w in args.team.split(",") if w) if args.team else frozenset()
    f = parse(_read_input(args.file))
    value = teamsem.check(structure, team, f)
    if args.json:
        _emit_json({"command": "check", "value": value})
    else:
        print("true" if value else "false")
    return 0 if value else 1


def _cmd_sat(args) -> int:
    f = parse(_read_input(args.file))
    budget = args.budget if args.budget is not None else _default_budget()
    result = solver.sat(f, engine=args.engine, witness=args.witness, budget=budget)
    witness_payload = None
    if result.witness is not None:
        structure, team = result.witness
        witness_payload = {
            "model": render_structure(structure),
            "team": sorted(team),
        }
    if args.json:
        _emit_json({
            "command": "sat",
            "verdict": result.verdict.value,
            "engine": result.engine,
            "disjunct_index": list(result.disjunct_index)
            if result.disjunct_index else None,
            "witness": witness_payload,
        })
    else:
        print(f"verdict: {result.verdict.value}")
        print(f"engine: {result.engine}")
        if result.disjunct_index is not None:
            print("disjunct-index: %d %d" % result.disjunct_index)
        if witness_payload is not None:
            print("team: %s" % ",".join(witness_payload["team"]))
            sys.stdout.write(witness_payload["model"])
    return _VERDICT_EXIT[result.verdict]


def _cmd_reduce(args) -> int:
    if args.variant != "bot" and args.source != "qcsp13":
        raise _UsageError("--variant applies only to qcsp13 reductions")
    inst = reductions.parse_instance(args.source, _read_input(args.file))
    if args.source == "qcsp13":
        f = reductions.reduce_qcsp(inst, args.variant)
    elif args.source == "dqbf":
        f = reductions.reduce_dqbf(inst)
    else:
        f = reductions.reduce_qbf3(inst)
    if args.json:
        _emit_json({"command": "reduce", "from": args.source, "formula": render(f)})
    else:
        print(render(f))
    return 0


def _cmd_oracle(args) -> int:
    inst = reductions.parse_instance(args.source, _read_input(args.file))
    if args.source == "qcsp13":
        value = reductions.oracle_qcsp(inst)
    elif args.source == "dqbf":
        value = reductions.oracle_dqbf(inst)
    else:
        value = reductions.oracle_qbf3(inst)
    if args.json:
        _emit_json({"command": "oracle", "from": args.source, "value": value})
    else:
        print("true" if value else "false")
    return 0 if value else 1


def _selftest_checks():
    from .formula import normalize_neg_dep
    from .kripke import random_structures

    rng = random.Random(20240229)
    all_ops = set(("box", "diamond", "and", "or", "neg", "top", "bot", "dep", "cor"))

    def round_trip():
        for _ in range(200):
            f = random_formula(rng, ["p", "q", "r"], rng.randint(1, 12), all_ops, 2)
            if parse(render(f)) != f:
                return False
        return True

    def table_totality():
        from .formula import OPERATORS, FragmentSignature
        for bits in range(1 << len(OPERATORS)):
            ops = frozenset(op for i, op in enumerate(OPERATORS) if (bits >> i) & 1)
            arity = 1 if "dep" in ops else None
            sig = FragmentSignature(ops, arity)
            for bound in (None, 3):
                classifier.classify(sig, bound)
        return True

    def empty_team():
        for _ in range(100):
            f = random_formula(rng, ["p", "q"], rng.randint(1, 8), all_ops, 1)
            for structure in random_structures(3, ["p", "q"], rng, 2):
                if not teamsem.check(structure, frozenset(), f):
                    return False
        return True

    def downward_closure():
        for _ in range(100):
            f = random_formula(rng, ["p", "q"], rng.randint(1, 8), all_ops, 1)
            for structure in random_structures(3, ["p", "q"], rng, 1):
                worlds = list(structure.worlds)
                team = frozenset(w for w in worlds if rng.random() < 0.6)
                if teamsem.check(structure, team, f):
                    for w in team:
                        if not teamsem.check(structure, team - {w}, f):
                            return False
        return True

    def engine_agreement():
        for _ in range(40):
            f = random_formula(rng, ["p", "q"], rng.randint(1, 8),
                               all_ops, 1, max_modal_depth=2)
            pipe = solver.sat(f, engine="pipeline")
            brute = solver.sat_bruteforce(f, max(modal_depth(f), 1), 3, budget=3000)
            if brute.satisfiable and not pipe.satisfiable:
                return False
            if pipe.satisfiable and brute.verdict is solver.Verdict.BOUNDED_UNSAT:
                wit = solver.sat(f, engine="pipeline", witness=True).witness
                if wit is None or not teamsem.check(wit[0], wit[1], f):
                    return False
        return True

    def reductions_spot():
        qcsp = reductions.QCSP13Instance(0, 3, ((1, 2, 3),))
        if reductions.oracle_qcsp(qcsp) != (
                not solver.sat(reductions.reduce_qcsp(qcsp)).satisfiable):
            return False
        dqbf = reductions.DQBFInstance(1, 1, (frozenset({1}),), ((-1, 2, 2),))
        if reductions.oracle_dqbf(dqbf) != solver.sat(reductions.reduce_dqbf(dqbf)).satisfiable:
            return False
        qbf3 = reductions.QBF3Instance(0, 1, 0, ((1, 1, 1),))
        if reductions.oracle_qbf3(qbf3) != solver.sat(reductions.reduce_qbf3(qbf3)).satisfiable:
            return False
        return True

    def negdep_collapse():
        for _ in range(50):
            f = random_formula(rng, ["p", "q"], rng.randint(1, 8), all_ops, 1)
            a = solver.sat(f, engine="pipeline").verdict
            b = solver.sat(normalize_neg_dep(f), engine="pipeline").verdict
            if a != b:
                return False
        return True

    return [
        ("parser-round-trip", round_trip),
        ("classifier-table-totality", table_totality),
        ("empty-team-property", empty_team),
        ("downward-closure", downward_closure),
        ("engine-agreement", engine_agreement),
        ("reduction-spot-checks", reductions_spot),
        ("negdep-collapse", negdep_collapse),
    ]


def _cmd_selftest(args) -> int:
    results = []
    for name, check in _selftest_checks():
        ok = bool(check())
        results.append({"name": name, "ok": ok})
        if not args.json:
            print(f"{name}: {'pass' if ok else 'FAIL'}")
    all_ok = all(r["ok"] for r in results)
    if args.json:
        _emit_json({"command": "selftest", "checks": results, "ok": all_ok})
    return 0 if all_ok else 1


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="mdlsat",
        description="Modal dependence logic workbench: parse, model-check, "
                    "solve, classify, reduce.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula and print its canonical form")
    p.add_argument("file", help="formula file, or - for stdin")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=_cmd_parse)

    p = sub.add_parser("classify", help="complexity classification of a formula's fragment")
    p.add_argument("file")
    p.add_argument("--arity-bound", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=_cmd_classify)

    p = sub.add_parser("check", help="team-semantics model checking")
    p.add_argument("file")
    p.add_argument("--model", required=True, help="model file in the text format")
    p.add_argument("--team", default="", help="comma-separated world ids")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("sat", help="decide satisfiability")
    p.add_argument("file")
    p.add_argument("--engine", default="auto",
                   choices=["auto", "pipeline", "bruteforce", "fastpath"])
    p.add_argument("--witness", action="store_true",
                   help="also output a satisfying model and team")
    p.add_argument("--budget", type=int, default=None,
                   help="node budget (default from MDL_BUDGET or 10^7)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=_cmd_sat)

    p = sub.add_parser("reduce", help="build the MDL formula for a source instance")
    p.add_argument("file")
    p.add_argument("--from", dest="source", required=True,
                   choices=["qcsp13", "dqbf", "qbf3"])
    p.add_argument("--variant", default="bot", choices=["bot", "negp"],
                   help="qcsp13 only: end the last conjunct in bot or ~p")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=_cmd_reduce)

    p = sub.add_parser("oracle", help="brute-force truth of a source instance")
    p.add_argument("file")
    p.add_argument("--from", dest="source", required=True,
                   choices=["qcsp13", "dqbf", "qbf3"])
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=_cmd_oracle)

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=_cmd_selftest)

    return top


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (FormulaSyntaxError, ModelFormatError, InstanceFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
