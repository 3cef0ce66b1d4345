"""SP-graphs: the weakly connected in-star and out-star subgraphs of a graph,
plus everything obtainable by contracting a polypath subgraph.

A polypath is fully described by its orientation string, and contracting one
of its edges deletes one character, so the contractions of a polypath are
exactly the subsequences of its string. The enumeration and membership tests
below lean on that.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, ValidationError
from .graphs import (
    DEFAULT_SEARCH_BUDGET,
    Digraph,
    canonical_path_string,
    classify,
    contract_named,
    find_isomorphism,
    flip_string,
    make_in_star,
    make_out_star,
    polypath_from_string,
)


@dataclass(frozen=True)
class SpWitness:
    """Replayable evidence: a subgraph of the host plus the contractions that
    turn it into the claimed graph. Contracted edges are named by their
    original endpoints; replay resolves merged names as it goes."""

    case: str  # "in-star" | "out-star" | "polypath"
    subgraph: Digraph
    contractions: tuple[tuple[str, str], ...] = ()


def replay_witness(witness: SpWitness) -> Digraph:
    g = witness.subgraph
    current = {v: v for v in g.vertices}
    for a, b in witness.contractions:
        g, w = contract_named(g, (current[a], current[b]))
        merged = {orig for orig, cur in current.items() if cur in (current[a], current[b])}
        for orig in merged:
            current[orig] = w
    return g


def verify_witness(witness: SpWitness, claimed: Digraph, host: Digraph) -> bool:
    """The witness subgraph must really be a subgraph of the host and replay
    to a graph isomorphic to the claimed one."""
    sub = witness.subgraph
    if not sub.vertices <= host.vertices or not sub.edges <= host.edges:
        return False
    return find_isomorphism(replay_witness(witness), claimed) is not None


@dataclass(frozen=True)
class SpDecision:
    status: str  # "yes" | "no" | "budget"
    witness: SpWitness | None = None

    def __bool__(self) -> bool:
        return self.status == "yes"


def _star_witness(g: Digraph, k: int, incoming: bool) -> SpWitness | None:
    """An in-star (or out-star) on k + 1 vertices as a subgraph, if one exists."""
    if k == 0:
        if not g.vertices:
            return None
        v = min(g.vertices)
        case = "in-star" if incoming else "out-star"
        return SpWitness(case, Digraph(frozenset([v]), frozenset()))
    neighbors = g.predecessors() if incoming else g.successors()
    for c in sorted(g.vertices):
        if len(neighbors[c]) >= k:
            leaves = sorted(neighbors[c])[:k]
            if incoming:
                edges = frozenset((x, c) for x in leaves)
                case = "in-star"
            else:
                edges = frozenset((c, x) for x in leaves)
                case = "out-star"
            return SpWitness(case, Digraph(frozenset([c, *leaves]), edges))
    return None


def _oriented_adjacency(g: Digraph) -> dict[str, list[tuple[str, str]]]:
    """For each vertex, the neighbors reachable along the underlying path and
    the direction character of each step."""
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in g.vertices}
    for u, v in g.edges:
        adj[u].append((v, ">"))
        adj[v].append((u, "<"))
    for v in adj:
        adj[v].sort()
    return adj


def _path_witness(g: Digraph, target: str, budget: int) -> SpDecision:
    """Search for a simple path in the undirected view whose orientation
    string contains the target (in either reading direction) as a
    subsequence. Greedy prefix matching is complete for subsequences."""
    targets = [target, flip_string(target)]
    if not g.vertices:
        return SpDecision("no")
    if target == "":
        v = min(g.vertices)
        return SpDecision("yes", SpWitness("polypath", Digraph(frozenset([v]), frozenset())))

    adj = _oriented_adjacency(g)
    expansions = 0

    def success(path_edges: list[tuple[str, str, str]], positions: list[int]) -> SpDecision:
        verts = {path_edges[0][0]} | {e[1] for e in path_edges}
        edges = set()
        for a, b, c in path_edges:
            edges.add((a, b) if c == ">" else (b, a))
        matched = set(positions)
        contractions = []
        for i, (a, b, c) in enumerate(path_edges):
            if i not in matched:
                contractions.append((a, b) if c == ">" else (b, a))
        sub = Digraph(frozenset(verts), frozenset(edges))
        return SpDecision("yes", SpWitness("polypath", sub, tuple(contractions)))

    def dfs(v, visited, path_edges, matches) -> SpDecision | None:
        nonlocal expansions
        for t, (_, positions) in enumerate(matches):
            if len(positions) == len(targets[t]):
                return success(path_edges, positions)
        for n, c in adj[v]:
            if n in visited:
                continue
            expansions += 1
            if expansions > budget:
                return SpDecision("budget")
            new_matches = []
            for t, (idx, positions) in enumerate(matches):
                if idx < len(targets[t]) and targets[t][idx] == c:
                    new_matches.append((idx + 1, positions + [len(path_edges)]))
                else:
                    new_matches.append((idx, positions))
            visited.add(n)
            path_edges.append((v, n, c))
            out = dfs(n, visited, path_edges, new_matches)
            path_edges.pop()
            visited.discard(n)
            if out is not None:
                return out
        return None

    hit_budget = False
    for start in sorted(g.vertices):
        out = dfs(start, {start}, [], [(0, []), (0, [])])
        if out is not None:
            if out.status == "budget":
                hit_budget = True
            else:
                return out
    return SpDecision("budget" if hit_budget else "no")


def is_sp_graph(h: Digraph, g: Digraph, budget: int = DEFAULT_SEARCH_BUDGET) -> SpDecision:
    """Decide whether h (up to isomorphism) is an SP-graph of g.

    Budget exhaustion is reported as its own status, distinct from a
    definitive no.
    """
    if not h.vertices or not h.is_weakly_connected():
        raise ValidationError("the candidate graph must be weakly connected")
    labels = classify(h)
    k = len(h.vertices) - 1
    if "in-star" in labels:
        w = _star_witness(g, k, incoming=True)
        if w is not None:
            return SpDecision("yes", w)
    if "out-star" in labels:
        w = _star_witness(g, k, incoming=False)
        if w is not None:
            return SpDecision("yes", w)
    if "polypath" in labels:
        from .graphs import orientation, path_walk

        target = orientation(h, path_walk(h))
        return _path_witness(g, target, budget)
    return SpDecision("no")


@dataclass(frozen=True)
class SpEntry:
    graph: Digraph
    witness: SpWitness


def enumerate_sp_graphs(
    g: Digraph, max_size: int, budget: int = DEFAULT_SEARCH_BUDGET
) -> list[SpEntry]:
    """All SP-graphs of g with at most max_size vertices, one canonical
    representative per isomorphism class, each carrying a witness."""
    entries: dict[tuple, SpEntry] = {}

    inc = g.predecessors()
    out = g.successors()
    max_in = max((len(s) for s in inc.values()), default=0)
    max_out = max((len(s) for s in out.values()), default=0)
    # Stars on at most 3 vertices are themselves polypaths; key them by their
    # orientation string so they collapse with the polypath enumeration below.
    def star_key(k: int, incoming: bool) -> tuple:
        if k == 0:
            return ("path", "")
        if k == 1:
            return ("path", canonical_path_string(">"))
        if k == 2:
            return ("path", canonical_path_string("><" if incoming else "<>"))
        return ("star-in" if incoming else "star-out", k)

    if g.vertices:
        for k in range(0, min(max_in, max_size - 1) + 1):
            w = _star_witness(g, k, incoming=True)
            entries.setdefault(star_key(k, True), SpEntry(make_in_star(k), w))
        for k in range(0, min(max_out, max_size - 1) + 1):
            w = _star_witness(g, k, incoming=False)
            entries.setdefault(star_key(k, False), SpEntry(make_out_star(k), w))

    # Polypath case: every subsequence (of length < max_size) of every simple
    # path's orientation string.
    adj = _oriented_adjacency(g)
    path_strings: dict[str, list[tuple[str, str, str]]] = {}
    expansions = 0

    def dfs(v, visited, path_edges):
        nonlocal expansions
        s = "".join(e[2] for e in path_edges)
        path_strings.setdefault(s, list(path_edges))
        for n, c in adj[v]:
            if n in visited:
                continue
            expansions += 1
            if expansions > budget:
                raise BudgetExceededError("SP-graph path enumeration budget exhausted")
            visited.add(n)
            path_edges.append((v, n, c))
            dfs(n, visited, path_edges)
            path_edges.pop()
            visited.discard(n)

    for start in sorted(g.vertices):
        dfs(start, {start}, [])

    def subsequences(s: str, cap: int):
        n = len(s)
        for mask in range(1 << n):
            positions = [i for i in range(n) if mask & (1 << i)]
            if len(positions) <= cap:
                yield "".join(s[i] for i in positions), positions

    for s, path_edges in sorted(path_strings.items()):
        if len(s) > 20:
            raise BudgetExceededError("path too long for subsequence enumeration")
        for sub, positions in subsequences(s, max_size - 1):
            key = ("path", canonical_path_string(sub))
            if key in entries:
                continue
            contractions = []
            matched = set(positions)
            for i, (a, b, c) in enumerate(path_edges):
                if i not in matched:
                    contractions.append((a, b) if c == ">" else (b, a))
            verts = ({path_edges[0][0]} | {e[1] for e in path_edges}) if path_edges else set()
            if not path_edges:
                if not g.vertices:
                    continue
                verts = {min(g.vertices)}
            edges = set()
            for a, b, c in path_edges:
                edges.add((a, b) if c == ">" else (b, a))
            witness = SpWitness(
                "polypath", Digraph(frozenset(verts), frozenset(edges)), tuple(contractions)
            )
            entries[key] = SpEntry(polypath_from_string(sub), witness)

    def sort_key(item):
        key, entry = item
        return (len(entry.graph.vertices), str(key))

    return [entry for _, entry in sorted(entries.items(), key=sort_key)]


@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    counterexample: Digraph | None = None
    witness: SpWitness | None = None
    member: Digraph | None = None

    def __bool__(self) -> bool:
        return self.closed


def is_sp_closed(
    members: list[Digraph],
    max_size: int | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> ClosureReport:
    """A finite class is SP-closed when every SP-graph of every member is
    isomorphic to some member. The first missing SP-graph (smallest, in a
    deterministic order) is reported as a counterexample."""
    if not members:
        return ClosureReport(True)
    cap = max_size or max(len(m.vertices) for m in members)
    for member in members:
        for entry in enumerate_sp_graphs(member, cap, budget):
            if not any(is_isomorphic_cached(entry.graph, m) for m in members):
                return ClosureReport(False, entry.graph, entry.witness, member)
    return ClosureReport(True)


def is_isomorphic_cached(g: Digraph, h: Digraph) -> bool:
    return find_isomorphism(g, h) is not None
