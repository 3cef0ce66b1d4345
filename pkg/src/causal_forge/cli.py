"""Batch command line: generation, analysis, solving and cross-validation.

Exit codes: 0 success, 1 semantic failure (crosscheck mismatch, failed
validation, insufficient capacity), 2 usage or input parse error, 3 search
budget exhausted. Every file-producing run writes a manifest recording the
command, input digests and outputs; identical inputs and seed reproduce
byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from pathlib import Path

from . import __version__
from .cnf import brute_force_sat, parse_dimacs
from .embedder import capacity_report, compile_to_graph
from .errors import (
    BudgetExceededError,
    CapacityError,
    CausalForgeError,
    FormatError,
)
from .gadgets import chain_instance, gadget_fence, gadget_in_star, gadget_out_star
from .graphs import Digraph, classify, make_shape, moore_bound, polypath_bound, structural_profile
from .planning import arity_stats, causal_graph, dtg, is_solution
from .serialize import (
    graph_from_edge_list,
    graph_to_dot,
    graph_to_edge_list,
    instance_from_json,
    instance_to_json,
    plan_from_text,
    plan_to_text,
)
from .solver import SOLVABLE, BUDGET_EXCEEDED, SearchBudget, brute_force_plan, component_plan
from .spgraphs import is_sp_closed

BUDGET_ENV = "CAUSAL_FORGE_BUDGET"

EXIT_OK = 0
EXIT_SEMANTIC = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise FormatError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    return 1_000_000


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class _Run:
    """Collects inputs and outputs of one command for the manifest."""

    def __init__(self, argv: list[str], seed: int | None):
        self.argv = argv
        self.seed = seed
        self.inputs: dict[str, str] = {}
        self.outputs: list[str] = []

    def read_text(self, path: str) -> str:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise FormatError(f"cannot read {path}: {exc.strerror}") from None
        self.inputs[str(p)] = _sha256(p)
        return text

    def write(self, out_dir: Path, name: str, text: str):
        out_dir.mkdir(parents=True, exist_ok=True)
        target = out_dir / name
        target.write_text(text, encoding="utf-8")
        self.outputs.append(str(target))

    def finish(self, out_dir: Path | None):
        if out_dir is None:
            return
        manifest = {
            "command": "causal-forge",
            "arguments": self.argv,
            "inputs": self.inputs,
            "outputs": sorted(self.outputs),
            "seed": self.seed,
            "version": __version__,
        }
        text = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "manifest.json").write_text(text, encoding="utf-8")


def _emit_report(payload: dict, human: bool):
    if human:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _graph_payload(g: Digraph) -> dict:
    return {"vertices": g.sorted_vertices(), "edges": [list(e) for e in g.sorted_edges()]}


# ---------------------------------------------------------------------------
# gen


def _cmd_gen(args, argv: list[str]) -> int:
    run = _Run(argv, getattr(args, "seed", None))
    out_dir = Path(args.out)
    meta: dict = {"kind": args.subkind, "seed": getattr(args, "seed", None)}

    if args.subkind in ("in-star", "out-star", "fence"):
        formula = parse_dimacs(run.read_text(args.cnf))
        if args.subkind == "in-star":
            instance = gadget_in_star(formula)
            meta["declared_shape"] = f"in-star({formula.num_vars})"
        elif args.subkind == "out-star":
            instance = gadget_out_star(formula)
            meta["declared_shape"] = f"out-star({formula.num_clauses})"
        else:
            instance = gadget_fence(formula, shape=args.shape, variant=args.variant)
            meta["declared_shape"] = f"fence({formula.num_clauses},{args.shape})"
            meta["variant"] = args.variant
            meta["shape"] = args.shape
        meta["n"] = formula.num_vars
        meta["m"] = formula.num_clauses
    elif args.subkind == "chain":
        instance = chain_instance(args.length)
        meta["length"] = args.length
        meta["declared_shape"] = f"dpath({args.length})"
    elif args.subkind == "family":
        from .embedder import family_instance

        instance = family_instance(args.k, args.m)
        meta.update(k=args.k, m=args.m, declared_shape=f"gk_family({args.k},{args.m})")
    elif args.subkind == "compile":
        formula = parse_dimacs(run.read_text(args.cnf))
        target = graph_from_edge_list(run.read_text(args.target))
        result = compile_to_graph(
            formula, target, budget=args.budget, case=args.case, variant=args.variant
        )
        instance = result.instance
        meta.update(n=formula.num_vars, m=formula.num_clauses, provenance=result.provenance)
        meta["case"] = result.case
    elif args.subkind == "shape":
        params = {k: v for k, v in (("k", args.k), ("m", args.m)) if v is not None}
        if args.c is not None:
            params["c"] = int(args.c)
        g = make_shape(args.shape_kind, **params)
        meta.update(shape_kind=args.shape_kind, params=params, labels=sorted(classify(g)))
        run.write(out_dir, "graph.edges", graph_to_edge_list(g))
        run.write(out_dir, "metadata.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")
        run.finish(out_dir)
        return EXIT_OK
    elif args.subkind == "tournament":
        rng = random.Random(args.seed)
        verts = [f"t{i}" for i in range(1, args.n + 1)]
        edges = set()
        for i, u in enumerate(verts):
            for v in verts[i + 1:]:
                edges.add((u, v) if rng.random() < 0.5 else (v, u))
        g = Digraph(frozenset(verts), frozenset(edges))
        meta.update(n=args.n, labels=sorted(classify(g)))
        run.write(out_dir, "graph.edges", graph_to_edge_list(g))
        run.write(out_dir, "metadata.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")
        run.finish(out_dir)
        return EXIT_OK
    else:
        raise FormatError(f"unknown generator {args.subkind!r}")

    stats = arity_stats(instance)
    cg = causal_graph(instance)
    meta["arity"] = {
        "max_preconditions": stats.max_preconditions,
        "max_postconditions": stats.max_postconditions,
        "max_k_dependence": stats.max_k_dependence,
    }
    meta["causal_graph"] = _graph_payload(cg)
    run.write(out_dir, "instance.json", instance_to_json(instance))
    run.write(out_dir, "metadata.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")
    run.finish(out_dir)
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze


def _cmd_analyze(args, argv: list[str]) -> int:
    run = _Run(argv, None)
    out_dir = Path(args.out) if args.out else None
    report: dict = {}

    if args.instance:
        instance = instance_from_json(run.read_text(args.instance))
        if args.cg or not (args.dtg or args.arity):
            cg = causal_graph(instance)
            report["causal_graph"] = _graph_payload(cg)
            report["causal_graph_labels"] = sorted(classify(cg))
            if args.dot and out_dir:
                run.write(out_dir, "cg.dot", graph_to_dot(cg))
                run.write(out_dir, "cg.edges", graph_to_edge_list(cg))
        if args.dtg:
            g = dtg(instance, args.dtg)
            report["dtg"] = {args.dtg: _graph_payload(g)}
            if args.dot and out_dir:
                run.write(out_dir, f"dtg_{args.dtg}.dot", graph_to_dot(g))
        if args.arity:
            stats = arity_stats(instance)
            report["arity"] = {
                "max_preconditions": stats.max_preconditions,
                "max_postconditions": stats.max_postconditions,
                "max_k_dependence": stats.max_k_dependence,
            }
    elif args.graph:
        g = graph_from_edge_list(run.read_text(args.graph))
        if args.classify or not (args.profile or args.capacity):
            report["labels"] = sorted(classify(g))
        if args.profile:
            p = structural_profile(g, budget=args.budget)
            report["profile"] = {
                "in_deg": p.in_deg,
                "out_deg": p.out_deg,
                "deg": p.deg,
                "cc_size": p.cc_size,
                "dpath_length": p.dpath_length if p.dpath_exact else f"unknown(capped,>={p.dpath_length})",
                "upath_length": p.upath_length if p.upath_exact else f"unknown(capped,>={p.upath_length})",
                "tau": p.tau if p.tau_exact else f"unknown(capped,>={p.tau})",
            }
        if args.capacity:
            report["capacity"] = capacity_report(g, budget=args.budget).as_dict()
        if args.dot and out_dir:
            run.write(out_dir, "graph.dot", graph_to_dot(g))
    elif args.cls:
        directory = Path(args.cls)
        if not directory.is_dir():
            raise FormatError(f"{args.cls} is not a directory")
        members = []
        for path in sorted(directory.glob("*.edges")):
            members.append(graph_from_edge_list(run.read_text(str(path))))
        if not args.sp_closed:
            raise FormatError("--class requires --sp-closed")
        closure = is_sp_closed(members, max_size=args.max_size)
        report["sp_closed"] = closure.closed
        report["members"] = len(members)
        if not closure.closed:
            report["counterexample"] = _graph_payload(closure.counterexample)
    elif args.bounds:
        kind, _, rest = args.bounds.partition(":")
        try:
            a, b = (int(x) for x in rest.split(","))
        except ValueError:
            raise FormatError(f"--bounds expects kind:a,b, got {args.bounds!r}") from None
        if kind == "moore":
            report["bounds"] = {"kind": "moore", "d": a, "k": b, "value": moore_bound(a, b)}
        elif kind == "polypath":
            report["bounds"] = {"kind": "polypath", "m": a, "k": b, "value": polypath_bound(a, b)}
        else:
            raise FormatError(f"unknown bounds kind {kind!r}")
    else:
        raise FormatError("analyze needs --instance, --graph, --class or --bounds")

    _emit_report(report, args.human)
    if out_dir:
        run.write(out_dir, "report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
        run.finish(out_dir)
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve


def _cmd_solve(args, argv: list[str]) -> int:
    run = _Run(argv, None)
    out_dir = Path(args.out) if args.out else None
    budget = SearchBudget(max_states=args.budget, max_plan_steps=args.max_steps)

    if args.crosscheck:
        formula = parse_dimacs(run.read_text(args.crosscheck))
        builders = {
            "in-star": lambda: gadget_in_star(formula),
            "out-star": lambda: gadget_out_star(formula),
            "fence": lambda: gadget_fence(formula, shape=args.shape, variant=args.variant),
        }
        if args.gadget not in builders:
            raise FormatError("--crosscheck requires --gadget in-star|out-star|fence")
        instance = builders[args.gadget]()
        sat = brute_force_sat(formula)
        search = brute_force_plan(instance, budget)
        if search.status == BUDGET_EXCEEDED:
            raise BudgetExceededError("plan search ran out of budget during crosscheck")
        agree = sat.satisfiable == search.solvable
        verdict = "AGREE" if agree else "MISMATCH"
        print(
            f"{verdict} sat={'true' if sat.satisfiable else 'false'} "
            f"solvable={'true' if search.solvable else 'false'}"
        )
        return EXIT_OK if agree else EXIT_SEMANTIC

    if not args.instance:
        raise FormatError("solve needs an instance file or --crosscheck")
    instance = instance_from_json(run.read_text(args.instance))

    if args.validate:
        plan = plan_from_text(run.read_text(args.validate))
        check = is_solution(instance, plan, strict=args.strict)
        report = {
            "validate": {
                "valid": check.valid,
                "inapplicable_steps": list(check.inapplicable),
                "plan_length": len(plan),
            }
        }
        _emit_report(report, args.human)
        return EXIT_OK if check.valid else EXIT_SEMANTIC

    if args.method == "component":
        result = component_plan(instance, budget, jobs=args.jobs)
        report = {
            "method": "component",
            "status": result.status,
            "plan_length": len(result.plan) if result.plan is not None else None,
            "components": [
                {
                    "name": s.name,
                    "status": s.status,
                    "plan_length": s.plan_length,
                    "states_expanded": s.states_expanded,
                    "states_visited": s.states_visited,
                }
                for s in result.components
            ],
        }
        if result.failed_component:
            report["failed_component"] = result.failed_component
        plan = result.plan
        status = result.status
    else:
        search = brute_force_plan(instance, budget)
        report = {
            "method": "brute",
            "status": search.status,
            "plan_length": len(search.plan) if search.plan is not None else None,
            "states_expanded": search.states_expanded,
            "states_visited": search.states_visited,
        }
        plan = search.plan
        status = search.status

    _emit_report(report, args.human)
    if out_dir:
        if status == SOLVABLE and plan is not None:
            run.write(out_dir, "plan.txt", plan_to_text(plan))
        run.write(out_dir, "result.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
        run.finish(out_dir)
    return EXIT_BUDGET if status == BUDGET_EXCEEDED else EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _build_parser(default_budget: int) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causal-forge",
        description="Generate, analyze, transform and solve shaped planning instances.",
    )
    parser.add_argument("--version", action="version", version=f"causal-forge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate instances and graphs")
    gen.add_argument("subkind", choices=[
        "in-star", "out-star", "fence", "chain", "family", "shape", "tournament", "compile",
    ])
    gen.add_argument("--cnf", help="DIMACS CNF input (gadget and compile kinds)")
    gen.add_argument("--target", help="edge-list target graph (compile)")
    gen.add_argument("--case", choices=["in-star", "out-star", "polypath"],
                     help="force a compile case")
    gen.add_argument("--shape", default="+1", choices=["+1", "0", "-1"],
                     help="fence end shape")
    gen.add_argument("--variant", default="base3", choices=["base3", "split2"],
                     help="fence synchronizer arity variant")
    gen.add_argument("--length", type=int, default=3, help="chain length")
    gen.add_argument("--k", type=int, help="star/path/family size parameter")
    gen.add_argument("--m", type=int, help="sink count or family path length")
    gen.add_argument("--c", choices=["+1", "0", "-1"], help="fence end shape (gen shape)")
    gen.add_argument("--n", type=int, default=5, help="tournament size")
    gen.add_argument("--shape-kind", dest="shape_kind",
                     choices=["in_star", "out_star", "dpath", "fence", "gk_family", "tight_polypath"],
                     help="which named shape to build (gen shape)")
    gen.add_argument("--seed", type=int, default=0, help="random seed (tournament)")
    gen.add_argument("--budget", type=int, default=default_budget)
    gen.add_argument("-o", "--out", required=True, help="output directory")

    an = sub.add_parser("analyze", help="inspect instances, graphs and classes")
    an.add_argument("--instance", help="instance JSON file")
    an.add_argument("--graph", help="edge-list graph file")
    an.add_argument("--class", dest="cls", help="directory of *.edges files")
    an.add_argument("--bounds", help="moore:d,k or polypath:m,k")
    an.add_argument("--cg", action="store_true", help="report the causal graph")
    an.add_argument("--dtg", metavar="VAR", help="report one variable's transition graph")
    an.add_argument("--arity", action="store_true", help="report operator arity maxima")
    an.add_argument("--classify", action="store_true", help="report shape labels")
    an.add_argument("--profile", action="store_true", help="report the structural profile")
    an.add_argument("--capacity", action="store_true", help="report hosting capacities")
    an.add_argument("--sp-closed", action="store_true", help="check SP-closure of the class")
    an.add_argument("--max-size", type=int, default=None)
    an.add_argument("--dot", action="store_true", help="also write DOT files (needs -o)")
    an.add_argument("--human", action="store_true", help="pretty-print the report")
    an.add_argument("--budget", type=int, default=default_budget)
    an.add_argument("-o", "--out", help="output directory")

    so = sub.add_parser("solve", help="decide plan existence and extract plans")
    so.add_argument("instance", nargs="?", help="instance JSON file")
    so.add_argument("--method", default="brute", choices=["brute", "component"])
    so.add_argument("--budget", type=int, default=default_budget,
                    help="max stored states per search")
    so.add_argument("--max-steps", type=int, default=1_000_000, help="max plan depth")
    so.add_argument("--jobs", type=int, default=1, help="parallel component searches")
    so.add_argument("--validate", metavar="PLAN", help="check a plan file instead of searching")
    so.add_argument("--strict", action="store_true", help="reject plans with inapplicable steps")
    so.add_argument("--crosscheck", metavar="CNF",
                    help="assert SAT/solvability agreement for a gadget")
    so.add_argument("--gadget", choices=["in-star", "out-star", "fence"])
    so.add_argument("--shape", default="+1", choices=["+1", "0", "-1"])
    so.add_argument("--variant", default="base3", choices=["base3", "split2"])
    so.add_argument("--human", action="store_true")
    so.add_argument("-o", "--out", help="output directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser = _build_parser(_default_budget())
        args = parser.parse_args(argv)
        if args.command == "gen":
            return _cmd_gen(args, argv)
        if args.command == "analyze":
            return _cmd_analyze(args, argv)
        return _cmd_solve(args, argv)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC if exc.proven else EXIT_BUDGET
    except CausalForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
