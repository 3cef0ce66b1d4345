"""Canonical text formats: instance JSON, plan files, edge lists and DOT.

Emission is canonical (name-sorted arrays, lexicographic keys, fixed layout)
so identical objects always serialize to identical bytes.
"""

from __future__ import annotations

import json

from .errors import FormatError, MalformedOperatorError
from .graphs import Digraph
from .planning import Operator, PartialState, Plan, PlanningInstance, Variable


def instance_to_json(instance: PlanningInstance) -> str:
    for op in instance.operators:
        if op.dummy:
            raise MalformedOperatorError(
                f"dummy operator {op.name!r} cannot be serialized"
            )
    payload = {
        "variables": [
            {"name": v.name, "domain": list(v.domain)}
            for v in sorted(instance.variables, key=lambda v: v.name)
        ],
        "init": dict(sorted(instance.init.items())),
        "goal": dict(sorted(instance.goal.items())),
        "operators": [
            {
                "name": a.name,
                "pre": dict(sorted(a.pre.items())),
                "post": dict(sorted(a.post.items())),
            }
            for a in sorted(instance.operators, key=lambda a: a.name)
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def instance_from_json(text: str) -> PlanningInstance:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(payload, dict):
        raise FormatError("instance JSON must be an object")
    for key in ("variables", "init", "goal", "operators"):
        if key not in payload:
            raise FormatError(f"instance JSON is missing {key!r}")
    try:
        variables = tuple(
            Variable(v["name"], tuple(v["domain"])) for v in payload["variables"]
        )
        operators = tuple(
            Operator(a["name"], PartialState(a["pre"]), PartialState(a["post"]))
            for a in payload["operators"]
        )
        return PlanningInstance(
            variables=variables,
            init=PartialState(payload["init"]),
            goal=PartialState(payload["goal"]),
            operators=operators,
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"instance JSON has a malformed entry: {exc}") from None


def plan_to_text(plan: Plan) -> str:
    return "".join(name + "\n" for name in plan.steps)


def plan_from_text(text: str) -> Plan:
    return Plan(tuple(line.strip() for line in text.splitlines() if line.strip()))


def graph_to_edge_list(g: Digraph) -> str:
    for v in g.vertices:
        if any(ch.isspace() for ch in v):
            raise FormatError(f"vertex name {v!r} contains whitespace")
    lines = [v for v in sorted(g.isolated())]
    lines += [f"{u} {v}" for u, v in g.sorted_edges()]
    return "".join(line + "\n" for line in lines)


def graph_from_edge_list(text: str) -> Digraph:
    """One edge per line as "u v"; a lone token declares an isolated vertex;
    '#' starts a comment."""
    edges = set()
    isolated = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            isolated.add(parts[0])
        elif len(parts) == 2:
            if parts[0] == parts[1]:
                raise FormatError(f"self-loop on {parts[0]!r}", lineno)
            edges.add((parts[0], parts[1]))
        else:
            raise FormatError(f"expected 'u v' or a lone vertex, got {line!r}", lineno)
    return Digraph.from_edges(edges, isolated)


def graph_to_dot(g: Digraph, name: str = "G") -> str:
    def quote(v: str) -> str:
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = [f"digraph {name} {{"]
    lines += [f"  {quote(v)};" for v in sorted(g.isolated())]
    lines += [f"  {quote(u)} -> {quote(v)};" for u, v in g.sorted_edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"
