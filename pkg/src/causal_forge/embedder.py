"""Compiling formulas onto arbitrary target causal graphs.

A target graph can host a hardness construction when it has enough of one of
three substructures: a large in-star, a large out-star, or a polypath with
enough sinks. The compiler measures those capacities, picks the first
sufficient case, builds the matching formula gadget on the substructure's
own vertex names, and pads the instance out to the full target graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cnf import CnfFormula
from .errors import (
    BadParameterError,
    CapacityError,
    UnusedVariableError,
    ValidationError,
)
from .gadgets import chain_instance, gadget_fence, gadget_in_star, gadget_out_star
from .graphs import (
    DEFAULT_SEARCH_BUDGET,
    Digraph,
    classify,
    find_isomorphism,
    is_isomorphic,
    make_dpath,
    path_sink_source_counts,
)
from .planning import PlanningInstance, causal_graph, rename_variables
from .transforms import clone_union, extend_to_supergraph, stretch_schedule, stretch_to_polypath

CASES = ("in-star", "out-star", "polypath")


@dataclass(frozen=True)
class CapacityReport:
    """Largest hosting substructures found in a target graph."""

    max_in_star: int
    in_star_center: str | None
    max_out_star: int
    out_star_center: str | None
    polypath_sinks: int
    polypath_sources: int
    polypath_walk: tuple[str, ...]
    polypath_orientation: str
    capped: bool

    def as_dict(self) -> dict:
        return {
            "max_in_star": self.max_in_star,
            "in_star_center": self.in_star_center,
            "max_out_star": self.max_out_star,
            "out_star_center": self.out_star_center,
            "polypath_sinks": self.polypath_sinks,
            "polypath_sources": self.polypath_sources,
            "polypath_walk": list(self.polypath_walk),
            "polypath_orientation": self.polypath_orientation,
            "capped": self.capped,
        }


def capacity_report(target: Digraph, budget: int = DEFAULT_SEARCH_BUDGET) -> CapacityReport:
    """Exact star capacities (degree read-offs) and a bounded search for the
    sink-richest oriented simple path; ``capped`` marks an unfinished path
    search."""
    inc = target.predecessors()
    out = target.successors()
    in_center = max(sorted(target.vertices), key=lambda v: len(inc[v]), default=None)
    out_center = max(sorted(target.vertices), key=lambda v: len(out[v]), default=None)
    max_in = len(inc[in_center]) if in_center is not None else 0
    max_out = len(out[out_center]) if out_center is not None else 0

    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in target.vertices}
    for u, v in target.edges:
        adj[u].append((v, ">"))
        adj[v].append((u, "<"))
    for v in adj:
        adj[v].sort()

    best = {"sinks": 0, "sources": 0, "walk": (), "orientation": ""}
    if target.vertices:
        first = min(target.vertices)
        best = {"sinks": 0, "sources": 0, "walk": (first,), "orientation": ""}
    expansions = 0
    capped = False

    def consider(walk: list[str], s: str):
        sinks, sources = path_sink_source_counts(s)
        if (sinks, sources, -len(s)) > (best["sinks"], best["sources"], -len(best["orientation"])):
            best.update(sinks=sinks, sources=sources, walk=tuple(walk), orientation=s)

    def dfs(v: str, visited: set[str], walk: list[str], s: str):
        nonlocal expansions, capped
        consider(walk, s)
        for n, c in adj[v]:
            if n in visited or capped:
                continue
            expansions += 1
            if expansions > budget:
                capped = True
                return
            visited.add(n)
            walk.append(n)
            dfs(n, visited, walk, s + c)
            walk.pop()
            visited.discard(n)

    for start in sorted(target.vertices):
        if capped:
            break
        dfs(start, {start}, [start], "")

    return CapacityReport(
        max_in_star=max_in,
        in_star_center=in_center,
        max_out_star=max_out,
        out_star_center=out_center,
        polypath_sinks=best["sinks"],
        polypath_sources=best["sources"],
        polypath_walk=tuple(best["walk"]),
        polypath_orientation=best["orientation"],
        capped=capped,
    )


def _trim_to_fence_host(walk: tuple[str, ...], s: str, m: int) -> tuple[list[str], str]:
    """Cut a contiguous subpath with exactly m sinks and m + 1 sources whose
    endpoints are sources. Sources and sinks alternate along a polypath, so
    the window from the first source to the (m+1)-th contains m sinks."""
    length = len(s)
    source_positions = []
    for p in range(length + 1):
        left = s[p - 1] if p > 0 else None
        right = s[p] if p < length else None
        incoming = (left == ">") or (right == "<")
        outgoing = (left == "<") or (right == ">")
        if outgoing and not incoming:
            source_positions.append(p)
    if len(source_positions) < m + 1:
        raise CapacityError(f"the path offers {len(source_positions)} sources, need {m + 1}")
    a, b = source_positions[0], source_positions[m]
    return list(walk[a:b + 1]), s[a:b]


@dataclass(frozen=True)
class CompileResult:
    instance: PlanningInstance
    case: str
    provenance: dict


def compile_to_graph(
    formula: CnfFormula,
    target: Digraph,
    budget: int = DEFAULT_SEARCH_BUDGET,
    case: str | None = None,
    variant: str = "split2",
) -> CompileResult:
    """Build an instance whose causal graph equals the target (vertex names
    included) and whose solvability equals the formula's satisfiability.

    Case priority: a big enough in-star hosts the clause-counter gadget; a
    big enough out-star hosts the assignment-walker gadget; otherwise a
    polypath with at least m sinks and m + 1 sources hosts a stretched fence
    gadget. ``case`` can force one branch. Targets whose only capacity is a
    long directed run are rejected: a single directed path hosts at most one
    sink, and no construction for that shape is provided here.
    """
    n, m = formula.num_vars, formula.num_clauses
    unused = sorted(set(range(1, n + 1)) - formula.variables_used())
    if unused:
        raise UnusedVariableError(unused)
    if case is not None and case not in CASES:
        raise BadParameterError(f"case must be one of {CASES}")

    report = capacity_report(target, budget)

    def fail() -> CapacityError:
        wanted = (
            f"need an in-star of size {n}, an out-star of size {m}, or a "
            f"polypath with {m} sinks and {m + 1} sources"
        )
        if report.capped:
            return CapacityError(
                f"no sufficient substructure found under the search budget; {wanted}",
                report, proven=False,
            )
        return CapacityError(f"the target lacks capacity; {wanted}", report, proven=True)

    chosen = None
    if case in (None, "in-star") and report.max_in_star >= n and len(target.vertices) >= n + 1:
        chosen = "in-star"
    elif case in (None, "out-star") and m >= 1 and report.max_out_star >= m:
        chosen = "out-star"
    elif case in (None, "polypath") and m >= 1 and (
        report.polypath_sinks >= m and report.polypath_sources >= m + 1
    ):
        chosen = "polypath"
    if chosen is None:
        raise fail()

    if chosen == "in-star":
        center = report.in_star_center
        leaves = sorted(target.predecessors()[center])[:n]
        gadget = gadget_in_star(formula)
        mapping = {"v_c": center}
        mapping.update({f"v_{i}": leaves[i - 1] for i in range(1, n + 1)})
        placed = rename_variables(gadget, mapping)
        provenance = {"case": chosen, "center": center, "leaves": leaves}
    elif chosen == "out-star":
        center = report.out_star_center
        leaves = sorted(target.successors()[center])[:m]
        gadget = gadget_out_star(formula)
        mapping = {"v_c": center}
        mapping.update({f"v_{i}": leaves[i - 1] for i in range(1, m + 1)})
        placed = rename_variables(gadget, mapping)
        provenance = {"case": chosen, "center": center, "leaves": leaves}
    else:
        walk, s = _trim_to_fence_host(report.polypath_walk, report.polypath_orientation, m)
        host_edges = set()
        for i, c in enumerate(s):
            host_edges.add((walk[i], walk[i + 1]) if c == ">" else (walk[i + 1], walk[i]))
        host = Digraph(frozenset(walk), frozenset(host_edges))
        gadget = gadget_fence(formula, shape="+1", variant=variant)
        schedule = stretch_schedule(causal_graph(gadget), host)
        stretched = stretch_to_polypath(gadget, host)
        iso = find_isomorphism(causal_graph(stretched), host, budget)
        if iso is None:
            raise ValidationError("stretched causal graph does not match its host; this is a bug")
        placed = rename_variables(stretched, iso)
        provenance = {
            "case": chosen,
            "host_walk": list(walk),
            "host_orientation": s,
            "schedule": [list(e) for e in schedule],
            "variant": variant,
        }

    result = extend_to_supergraph(placed, target)
    provenance["capacity"] = report.as_dict()
    return CompileResult(result, chosen, provenance)


def family_instance(k: int, m: int, seed: PlanningInstance | None = None) -> PlanningInstance:
    """Disjoint union of m^(k-1) renamed copies of a directed-path instance,
    so the causal graph has m^k vertices in components of size exactly m."""
    if k < 2 or m < 1:
        raise BadParameterError("family generator needs k >= 2 and m >= 1")
    seed = seed if seed is not None else chain_instance(m)
    if not is_isomorphic(causal_graph(seed), make_dpath(m)):
        raise ValidationError(f"seed causal graph is not a directed path on {m} vertices")
    return clone_union(seed, m ** (k - 1))


def tournament_ham_path(t: Digraph) -> list[str]:
    """Directed Hamiltonian path by insertion: each vertex (in name order)
    goes to the first position where the surrounding edges agree. Complete
    orientations always admit such a position."""
    if "tournament" not in classify(t):
        raise ValidationError("the graph is not a tournament")
    path: list[str] = []
    for v in sorted(t.vertices):
        placed = False
        for pos in range(len(path) + 1):
            ok_left = pos == 0 or t.has_edge(path[pos - 1], v)
            ok_right = pos == len(path) or t.has_edge(v, path[pos])
            if ok_left and ok_right:
                path.insert(pos, v)
                placed = True
                break
        if not placed:
            raise ValidationError("no insertion point; the graph is not a tournament")
    return path


def embed_in_tournament(instance: PlanningInstance, t: Digraph) -> PlanningInstance:
    """Lay a directed-path instance along a Hamiltonian path of the
    tournament, then pad the remaining edges with inert operators."""
    cg = causal_graph(instance)
    if len(t.vertices) != len(cg.vertices):
        raise BadParameterError(
            f"tournament has {len(t.vertices)} vertices, instance has {len(cg.vertices)}"
        )
    if not is_isomorphic(cg, make_dpath(len(cg.vertices))):
        raise ValidationError("the instance's causal graph is not a directed path")
    ham = tournament_ham_path(t)
    chain_order = _dpath_order(cg)
    mapping = dict(zip(chain_order, ham))
    return extend_to_supergraph(rename_variables(instance, mapping), t)


def _dpath_order(g: Digraph) -> list[str]:
    if len(g.vertices) == 1:
        return [next(iter(g.vertices))]
    succ = g.successors()
    inc = g.predecessors()
    start = next(v for v in sorted(g.vertices) if not inc[v])
    order = [start]
    while succ[order[-1]]:
        order.append(next(iter(succ[order[-1]])))
    return order
