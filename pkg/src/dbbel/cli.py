"""Batch command-line front end.

Every command writes one JSON document (or CSV with ``--format csv``) to
stdout and diagnostics to stderr.  Exit codes: 0 success (UNSAT included),
1 usage, parse or input errors, 2 budget or oracle-bound errors.

``--desugar-implication`` lets input sentences use ``A -> B`` as shorthand for
``!A | B``; it is off by default so the accepted connectives stay ``! & |``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from .belief import DbmStage, MassError, MassFunction, belief_and_plausibility
from .fixtures import (
    ellsberg_queries, ellsberg_stages, ellsberg_variant_stages, hierarchy_problem,
    levesque_goal, levesque_premises,
)
from .forest import Forest, ForestError
from .proof import TraceError, check_trace, derive0_trace, derives0, derives_k, witness_tree
from .solver import (
    DEFAULT_MAX_DEPTH, DEFAULT_MAX_FORESTS, BudgetError, Problem, ProblemError, gensat0, gensat_k,
    solve_problem,
)
from .syntax import STAR, OracleBoundError, ParseError, conjoin, parse_root, parse_sentence, print_root

DEMOS = ("ellsberg", "ellsberg-variant", "levesque", "hierarchy")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dbbel", description="Depth-bounded inference and belief functions.")
    parser.add_argument("--desugar-implication", action="store_true",
                        help="accept 'A -> B' in input sentences, read as '!A | B'")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for forest evaluation")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def premises_args(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--premises", action="append", default=[],
                       help="premise sentence(s); repeatable, comma-separated; '*' means no information")
        g.add_argument("--premises-file", help="file with one premise per line ('#' starts a comment)")
        p.add_argument("--goal", required=True)
        p.add_argument("--trace", action="store_true", help="include a derivation / witness in the output")

    p = sub.add_parser("prove0", help="decide Γ ⊢0 φ")
    premises_args(p)
    p = sub.add_parser("provek", help="decide Γ ⊢k φ")
    premises_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--search", action="store_true", help="report the least depth j <= k that derives the goal")

    p = sub.add_parser("belief", help="B_k and Pl_k of a query on a given forest and mass")
    p.add_argument("--forest", required=True)
    p.add_argument("--mass", required=True)
    p.add_argument("--query", required=True, action="append")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    for name, text in (("gensat", "satisfiability of linear belief constraints"),
                       ("binf", "tightest bounds on B_k / Pl_k of the query")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--problem", required=True)
        p.add_argument("--max-forests", type=int, default=DEFAULT_MAX_FORESTS)
        p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)

    p = sub.add_parser("demo", help="run a bundled scenario")
    p.add_argument("name", choices=DEMOS)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _read_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _premises(args) -> list:
    texts = []
    if args.premises_file:
        for line in _read(args.premises_file).splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                texts.append(line)
    for item in args.premises:
        texts.extend(t.strip() for t in item.split(",") if t.strip())
    return [parse_root(t, implication=args.desugar_implication) for t in texts]


def _cmd_prove0(args, out, err) -> dict:
    prem = _premises(args)
    goal = parse_sentence(args.goal, implication=args.desugar_implication)
    ok = derives0(prem, goal)
    result = {"premises": [print_root(p) for p in prem], "goal": str(goal), "derivable": ok}
    trace = derive0_trace(prem, goal) if ok else None
    if trace is not None:
        check_trace(trace, prem, goal)
    result["trace"] = trace.to_json() if trace is not None else None
    if args.trace and trace is not None:
        for i, step in enumerate(trace.steps):
            refs = ",".join(str(j) for j in step.premises)
            err.write(f"{i:>3}  {step.sentence}  [{step.rule}{' ' + refs if refs else ''}]\n")
    return result


def _cmd_provek(args, out, err) -> dict:
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    prem = _premises(args)
    goal = parse_sentence(args.goal, implication=args.desugar_implication)
    result = {"premises": [print_root(p) for p in prem], "goal": str(goal), "k": args.k}
    if args.search:
        least = next((j for j in range(args.k + 1) if derives_k(prem, goal, j)), None)
        result["derivable"] = least is not None
        result["least_k"] = least
    else:
        result["derivable"] = derives_k(prem, goal, args.k)
    if args.trace and result["derivable"]:
        root = _single_root(prem)
        result["witness"] = witness_tree(root, goal, args.k).to_json()
    return result


def _single_root(prem):
    sents = [p for p in prem if p is not STAR]
    return conjoin(sents) if sents else STAR


def _belief_rows(stage: DbmStage, queries) -> list[dict]:
    rows = []
    for q in queries:
        a = belief_and_plausibility(stage, q)
        rows.append({"k": stage.k, **a.to_json()})
    return rows


def _csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "query", "belief", "plausibility"])
    for r in rows:
        w.writerow([r["k"], r["query"], r["belief"], r["plausibility"]])
    return buf.getvalue()


def _cmd_belief(args, out, err):
    try:
        forest = Forest.from_json(_read_json(args.forest), implication=args.desugar_implication)
        mass = MassFunction.from_json(forest, _read_json(args.mass))
    except (KeyError, TypeError, AttributeError) as exc:
        raise UsageError(f"malformed forest or mass JSON: {exc!r}") from None
    stage = DbmStage(forest, mass)
    queries = [parse_sentence(q, implication=args.desugar_implication) for q in args.query]
    rows = _belief_rows(stage, queries)
    if args.format == "csv":
        return _csv(rows)
    return {"stage": stage.k, "results": rows}


def _load_problem(args, err) -> Problem:
    try:
        problem = Problem.from_json(_read_json(args.problem), implication=args.desugar_implication)
    except (KeyError, TypeError, AttributeError) as exc:
        raise UsageError(f"malformed problem JSON: {exc!r}") from None
    if problem.pl_rewrite:
        err.write("notice: raw constraints were normalized; right-hand belief terms now read as plausibilities\n")
    return problem


def _cmd_gensat(args, out, err) -> dict:
    problem = _load_problem(args, err)
    if problem.mode != "gensat":
        raise UsageError("problem mode is not 'gensat'; use the binf command")
    res = solve_problem(problem, jobs=args.jobs, max_forests=args.max_forests, max_depth=args.max_depth)
    return res.to_json()


def _cmd_binf(args, out, err) -> dict:
    problem = _load_problem(args, err)
    if problem.mode != "binf":
        raise UsageError("problem mode is not 'binf'; use the gensat command")
    res = solve_problem(problem, jobs=args.jobs, max_forests=args.max_forests, max_depth=args.max_depth)
    return res.to_json()


def _cmd_demo(args, out, err):
    name = args.name
    if name in ("ellsberg", "ellsberg-variant"):
        stages = ellsberg_stages() if name == "ellsberg" else ellsberg_variant_stages()
        queries = ellsberg_queries(name)
        rows = [r for st in stages for r in _belief_rows(st, queries)]
        if args.format == "csv":
            return _csv(rows)
        return {
            "demo": name,
            "stages": [{"k": st.k, "forest": st.forest.to_json(), **st.mass.to_json()} for st in stages],
            "results": rows,
        }
    if args.format == "csv":
        raise UsageError(f"demo {name} has no CSV form")
    if name == "levesque":
        prem, goal = levesque_premises(), levesque_goal()
        return {
            "demo": name,
            "premises": [str(p) for p in prem],
            "goal": str(goal),
            "depths": [{"k": k, "derivable": derives_k(prem, goal, k)} for k in (0, 1)],
            "witness": witness_tree(prem[0], goal, 1).to_json(),
        }
    r0 = gensat0(hierarchy_problem(0), jobs=args.jobs)
    r1 = gensat_k(hierarchy_problem(1), jobs=args.jobs)
    return {"demo": name, "constraints": ["B(p) >= 1/2", "B(q) >= 2/3"],
            "depth_0": r0.to_json(), "depth_1": r1.to_json()}


COMMANDS = {
    "prove0": _cmd_prove0, "provek": _cmd_provek, "belief": _cmd_belief,
    "gensat": _cmd_gensat, "binf": _cmd_binf, "demo": _cmd_demo,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        result = COMMANDS[args.command](args, out, err)
    except UsageError as exc:
        err.write(f"dbbel: error: {exc}\n")
        return 1
    except ParseError as exc:
        err.write(f"dbbel: parse error: {exc}\n")
        return 1
    except (ProblemError, ForestError, MassError, TraceError, ValueError) as exc:
        err.write(f"dbbel: invalid input: {exc}\n")
        return 1
    except BudgetError as exc:
        err.write(f"dbbel: budget exceeded: {exc} (required {exc.required})\n")
        return 2
    except OracleBoundError as exc:
        err.write(f"dbbel: oracle bound: {exc}\n")
        return 2
    if isinstance(result, str):
        out.write(result)
    else:
        out.write(json.dumps(result, indent=2, ensure_ascii=False) + "\n")
    return 0


def main() -> None:
    sys.exit(run())
