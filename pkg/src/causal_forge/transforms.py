"""Solvability-preserving surgery on planning instances.

Each operation here rewrites an instance so that its causal graph takes a
prescribed shape while plan existence is untouched: growing the causal graph
to an arbitrary supergraph, subdividing one causal edge through a mimic
variable, stretching a fence into a longer polypath, reordering plan
segments across a cut vertex, and disjoint cloning.
"""

from __future__ import annotations

from collections.abc import Sequence

from .errors import (
    BadParameterError,
    InvalidPlanError,
    NotASubgraphError,
    ShapeMismatchError,
    ValidationError,
)
from .graphs import (
    Digraph,
    classify,
    orientation,
    path_walk,
    runs,
    subdivide_named,
    weak_components,
)
from .planning import (
    Operator,
    PartialState,
    Plan,
    PlanningInstance,
    Variable,
    causal_graph,
    is_solution,
    substitute,
)


def _fresh_token(domain: Sequence[str], stem: str = "STAR") -> str:
    if stem not in domain:
        return stem
    i = 1
    while f"{stem}{i}" in domain:
        i += 1
    return f"{stem}{i}"


def _fresh_op_name(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def extend_to_supergraph(instance: PlanningInstance, target: Digraph) -> PlanningInstance:
    """Grow the instance until its causal graph equals the target supergraph.

    New vertices become goal-free binary variables; every existing domain
    gains a fresh sentinel value. Each new edge is realized by one operator
    that is deliberately useless: it either writes the sentinel into an
    existing variable or flips a new variable, so plan existence is
    unchanged. All added operators touch one variable and depend on one.
    """
    cg = causal_graph(instance)
    missing_v = cg.vertices - target.vertices
    missing_e = cg.edges - target.edges
    if missing_v or missing_e:
        raise NotASubgraphError(
            "the causal graph is not a subgraph of the target",
            missing_vertices=missing_v,
            missing_edges=missing_e,
        )

    new_names = sorted(target.vertices - cg.vertices)
    star_tokens = {v.name: _fresh_token(v.domain) for v in instance.variables}

    variables = [
        Variable(v.name, v.domain + (star_tokens[v.name],)) for v in instance.variables
    ]
    variables += [Variable(name, ("0", "1")) for name in new_names]
    init = instance.init.updated({name: "0" for name in new_names})
    goal = instance.goal

    taken = {a.name for a in instance.operators}
    ops = list(instance.operators)
    old = set(instance.variable_names)
    new = set(new_names)
    new_edges = sorted(target.edges - cg.edges)
    for x, v in new_edges:
        if v in old:
            ops.append(Operator(
                _fresh_op_name(f"star({x},{v})", taken),
                {x: init[x]},
                {v: star_tokens[v]},
            ))
    for x, u in sorted(target.edges):
        if u in new:
            ops.append(Operator(
                _fresh_op_name(f"set({x},{u})", taken),
                {x: init[x]},
                {u: "1"},
            ))
    return PlanningInstance(tuple(variables), init, goal, tuple(ops))


def subdivide_instance(instance: PlanningInstance, edge: tuple[str, str]) -> PlanningInstance:
    """Subdivide one causal edge (u, v) through a fresh mimic variable w.

    w copies u's domain and initial value; operators that read u to write v
    are rewritten to read w instead, and copy operators let w track u one
    value at a time. The causal graph of the result is exactly the edge
    subdivision of the original, and solvability is preserved.
    """
    cg = causal_graph(instance)
    if "polypath" not in classify(cg):
        raise ValidationError("edge subdivision requires a polypath causal graph")
    u, v = edge
    new_cg, w = subdivide_named(cg, (u, v))

    u_var = instance.variable(u)
    variables = list(instance.variables) + [Variable(w, u_var.domain)]
    init = instance.init.updated({w: instance.init[u]})

    ops: list[Operator] = []
    for a in instance.operators:
        if u in a.pre.names and v in a.post.names:
            ops.append(substitute(a, u, w))
        else:
            ops.append(a)
    taken = {a.name for a in ops}
    for x in u_var.domain:
        ops.append(Operator(
            _fresh_op_name(f"copy({u},{w},{x})", taken), {u: x}, {w: x},
        ))

    result = PlanningInstance(tuple(variables), init, instance.goal, tuple(ops))
    assert causal_graph(result) == new_cg
    return result


def _signature(g: Digraph) -> list[tuple[str, int]]:
    return runs(orientation(g, path_walk(g)))


def stretch_schedule(cg: Digraph, target: Digraph) -> list[tuple[str, str]]:
    """Edges to subdivide, in order, to reshape a fence causal graph into the
    target polypath. Each fence edge is stretched to the length of the
    matching maximal directed run of the target."""
    if "fence" not in classify(cg):
        raise ValidationError("stretching starts from a fence causal graph")
    if "polypath" not in classify(target):
        raise ValidationError("the stretch target must be a polypath")

    twalk = path_walk(target)
    tsig = runs(orientation(target, twalk))

    fwalk = path_walk(cg)
    fsig = runs(orientation(cg, fwalk))
    if [c for c, _ in fsig] != [c for c, _ in tsig]:
        fwalk = list(reversed(fwalk))
        fsig = runs(orientation(cg, fwalk))
    if [c for c, _ in fsig] != [c for c, _ in tsig] or any(n != 1 for _, n in fsig):
        raise ShapeMismatchError(
            "source/sink alternation of the fence does not match the target",
            expected=tsig,
            actual=fsig,
        )

    schedule: list[tuple[str, str]] = []
    sim = cg
    for idx, (char, length) in enumerate(tsig):
        a, b = fwalk[idx], fwalk[idx + 1]
        edge = (a, b) if char == ">" else (b, a)
        for _ in range(length - 1):
            schedule.append(edge)
            sim, w = subdivide_named(sim, edge)
            # keep extending at the far end of the freshly grown run
            edge = (w, edge[1])
    return schedule


def stretch_to_polypath(instance: PlanningInstance, target: Digraph) -> PlanningInstance:
    """Fold edge subdivision over the computed schedule; the result's causal
    graph is isomorphic to the target polypath and solvability is kept."""
    schedule = stretch_schedule(causal_graph(instance), target)
    out = instance
    for edge in schedule:
        out = subdivide_instance(out, edge)
    return out


def reorder_plan_segment(
    instance: PlanningInstance, plan: Plan, v: str, start: int, end: int
) -> Plan:
    """Regroup the segment plan[start:end] so that all operators writing on
    one side of the cut vertex v come before all operators writing on the
    other side, preserving relative order within each side.

    Requires a polypath causal graph and a segment free of operators that
    write v. The input must be a solution; the output is verified to be one.
    """
    cg = causal_graph(instance)
    if "polypath" not in classify(cg):
        raise ValidationError("segment reordering requires a polypath causal graph")
    if v not in cg.vertices:
        raise ValidationError(f"unknown variable {v!r}")
    if not (0 <= start <= end <= len(plan)):
        raise BadParameterError(f"bad segment [{start}:{end}] for a plan of length {len(plan)}")
    if not is_solution(instance, plan):
        raise InvalidPlanError("the input plan is not a solution")

    rest = cg.induced(cg.vertices - {v})
    comps = weak_components(rest)
    side1 = set(comps[0].vertices) if comps else set()
    side2 = set().union(*(c.vertices for c in comps[1:])) if len(comps) > 1 else set()

    segment = plan.steps[start:end]
    first, second = [], []
    for name in segment:
        op = instance.operator(name)
        post = op.post.names
        if v in post:
            raise ValidationError(
                f"segment step {name!r} writes the cut variable {v!r}"
            )
        if post <= side1:
            first.append(name)
        elif post <= side2:
            second.append(name)
        else:
            raise ValidationError(f"operator {name!r} writes across the cut")

    reordered = Plan(plan.steps[:start] + tuple(first) + tuple(second) + plan.steps[end:])
    check = is_solution(instance, reordered)
    if not check:
        raise ValidationError("reordered plan unexpectedly fails; this is a bug")
    return reordered


def clone_union(instance: PlanningInstance, copies: int) -> PlanningInstance:
    """Disjoint union of systematically renamed copies. The causal graph is
    the disjoint union of the copies' graphs, and the union is solvable
    exactly when the original is."""
    if copies < 1:
        raise BadParameterError("clone_union needs at least one copy")

    variables: list[Variable] = []
    init: dict[str, str] = {}
    goal: dict[str, str] = {}
    ops: list[Operator] = []
    for c in range(1, copies + 1):
        suffix = f"#{c}"

        def remap(ps: PartialState) -> PartialState:
            return PartialState({f"{var}{suffix}": val for var, val in ps.items()})

        variables += [Variable(f"{v.name}{suffix}", v.domain) for v in instance.variables]
        init.update(remap(instance.init))
        goal.update(remap(instance.goal))
        ops += [
            Operator(f"{a.name}{suffix}", remap(a.pre), remap(a.post), a.dummy)
            for a in instance.operators
        ]
    return PlanningInstance(tuple(variables), PartialState(init), PartialState(goal), tuple(ops))
