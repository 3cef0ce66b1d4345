"""Simple directed graphs: components, shape recognition and generation,
edge contraction and subdivision, isomorphism, and numeric bounds.

All graphs are simple (no self-loops, set edge semantics) with string vertex
identifiers. Operations are pure; search-heavy ones take an explicit budget
counted in node expansions.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .errors import (
    BadParameterError,
    BudgetExceededError,
    MissingEdgeError,
    ValidationError,
)

EXHAUSTIVE_PATH_CAP = 12
DEFAULT_SEARCH_BUDGET = 500_000


@dataclass(frozen=True)
class Digraph:
    vertices: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        for u, v in self.edges:
            if u == v:
                raise ValidationError(f"self-loop on {u!r}")
            if u not in self.vertices or v not in self.vertices:
                raise ValidationError(f"edge ({u!r}, {v!r}) has an unknown endpoint")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]], isolated: Iterable[str] = ()) -> "Digraph":
        edges = frozenset(tuple(e) for e in edges)
        verts = {u for e in edges for u in e} | set(isolated)
        return cls(frozenset(verts), edges)

    def sorted_vertices(self) -> list[str]:
        return sorted(self.vertices)

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(self.edges)

    def has_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.edges

    def successors(self) -> dict[str, set[str]]:
        out: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            out[u].add(v)
        return out

    def predecessors(self) -> dict[str, set[str]]:
        inc: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            inc[v].add(u)
        return inc

    def in_degree(self, v: str) -> int:
        return sum(1 for e in self.edges if e[1] == v)

    def out_degree(self, v: str) -> int:
        return sum(1 for e in self.edges if e[0] == v)

    def sources(self) -> set[str]:
        inc = self.predecessors()
        out = self.successors()
        return {v for v in self.vertices if not inc[v] and out[v]}

    def sinks(self) -> set[str]:
        inc = self.predecessors()
        out = self.successors()
        return {v for v in self.vertices if inc[v] and not out[v]}

    def isolated(self) -> set[str]:
        touched = {u for e in self.edges for u in e}
        return self.vertices - touched

    def undirected(self) -> "UGraph":
        return UGraph(
            self.vertices,
            frozenset(tuple(sorted((u, v))) for u, v in self.edges),
        )

    def induced(self, keep: Iterable[str]) -> "Digraph":
        keep = frozenset(keep)
        return Digraph(
            keep & self.vertices,
            frozenset(e for e in self.edges if e[0] in keep and e[1] in keep),
        )

    def is_weakly_connected(self) -> bool:
        return self.undirected().is_connected()

    def has_antiparallel_pair(self) -> bool:
        return any((v, u) in self.edges for u, v in self.edges)


@dataclass(frozen=True)
class UGraph:
    """Undirected view: edges stored as (min, max) pairs."""

    vertices: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        norm = frozenset(tuple(sorted(e)) for e in self.edges)
        object.__setattr__(self, "edges", norm)
        for u, v in norm:
            if u == v:
                raise ValidationError(f"self-loop on {u!r}")
            if u not in self.vertices or v not in self.vertices:
                raise ValidationError(f"edge ({u!r}, {v!r}) has an unknown endpoint")

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v: str) -> int:
        return sum(1 for e in self.edges if v in e)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj = self.adjacency()
        start = next(iter(self.vertices))
        seen = {start}
        stack = [start]
        while stack:
            for n in adj[stack.pop()]:
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
        return seen == self.vertices

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == len(self.vertices) - 1

    def is_path_graph(self) -> bool:
        if not self.is_tree():
            return False
        return all(self.degree(v) <= 2 for v in self.vertices)

    def is_star(self) -> bool:
        if not self.is_tree():
            return False
        return sum(1 for v in self.vertices if self.degree(v) != 1) <= 1


def weak_components(g: Digraph) -> list[Digraph]:
    """Maximal weakly connected subgraphs, sorted by least vertex name."""
    adj = g.undirected().adjacency()
    seen: set[str] = set()
    comps = []
    for start in sorted(g.vertices):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            for n in adj[stack.pop()]:
                if n not in seen:
                    seen.add(n)
                    comp.add(n)
                    stack.append(n)
        comps.append(g.induced(comp))
    return comps


def cc_size(g: Digraph) -> int:
    sizes = [len(c.vertices) for c in weak_components(g)]
    return max(sizes, default=0)


def is_acyclic(g: Digraph) -> bool:
    succ = g.successors()
    indeg = {v: 0 for v in g.vertices}
    for _, v in g.edges:
        indeg[v] += 1
    queue = deque(v for v, d in indeg.items() if d == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return seen == len(g.vertices)


def topological_order(g: Digraph) -> list[str]:
    succ = g.successors()
    indeg = {v: 0 for v in g.vertices}
    for _, v in g.edges:
        indeg[v] += 1
    queue = sorted(v for v, d in indeg.items() if d == 0)
    order = []
    while queue:
        u = queue.pop(0)
        order.append(u)
        ready = []
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
        queue = sorted(queue + ready)
    if len(order) != len(g.vertices):
        raise ValidationError("graph has a directed cycle")
    return order


# ---------------------------------------------------------------------------
# longest paths and structural profiles


def _dag_longest_path(g: Digraph) -> int:
    order = topological_order(g)
    succ = g.successors()
    best = {v: 0 for v in g.vertices}
    for u in reversed(order):
        for v in succ[u]:
            best[u] = max(best[u], 1 + best[v])
    return max(best.values(), default=0)


def _longest_path_search(adj: dict[str, list[str]], budget: int) -> tuple[int, bool]:
    """Longest simple path by DFS. Returns (best, exact); exact is False when
    the expansion budget ran out before the search space was exhausted."""
    best = 0
    expansions = 0
    exact = True

    def dfs(v: str, seen: set[str], length: int):
        nonlocal best, expansions, exact
        if not exact:
            return
        best = max(best, length)
        for n in adj[v]:
            if n in seen:
                continue
            expansions += 1
            if expansions > budget:
                exact = False
                return
            seen.add(n)
            dfs(n, seen, length + 1)
            seen.discard(n)

    for start in sorted(adj):
        if not exact:
            break
        dfs(start, {start}, 0)
    return best, exact


def _tree_diameter(u: UGraph) -> int:
    adj = u.adjacency()

    def farthest(start: str) -> tuple[str, int, dict[str, int]]:
        dist = {start: 0}
        queue = deque([start])
        far, fd = start, 0
        while queue:
            x = queue.popleft()
            for n in adj[x]:
                if n not in dist:
                    dist[n] = dist[x] + 1
                    if dist[n] > fd:
                        far, fd = n, dist[n]
                    queue.append(n)
        return far, fd, dist

    best = 0
    seen: set[str] = set()
    for v in sorted(u.vertices):
        if v in seen:
            continue
        a, _, dist = farthest(v)
        seen |= dist.keys()
        _, d, _ = farthest(a)
        best = max(best, d)
    return best


def _is_forest(u: UGraph) -> bool:
    adj = u.adjacency()
    seen: set[str] = set()
    for start in u.vertices:
        if start in seen:
            continue
        stack = [(start, None)]
        seen.add(start)
        count_v = 0
        count_e = 0
        comp = {start}
        while stack:
            x, parent = stack.pop()
            count_v += 1
            for n in adj[x]:
                count_e += 1
                if n not in seen:
                    seen.add(n)
                    comp.add(n)
                    stack.append((n, x))
        if count_e // 2 != count_v - 1:
            return False
    return True


@dataclass(frozen=True)
class StructuralProfile:
    """Degree and path metrics of a digraph.

    Path lengths are exact when the corresponding ``*_exact`` flag is set;
    otherwise they are best values found under the search budget.
    """

    in_deg: int
    out_deg: int
    deg: int
    cc_size: int
    dpath_length: int
    dpath_exact: bool
    upath_length: int
    upath_exact: bool

    @property
    def tau(self) -> int:
        return max(self.upath_length, self.in_deg, self.out_deg)

    @property
    def tau_exact(self) -> bool:
        return self.upath_exact


def structural_profile(g: Digraph, budget: int = DEFAULT_SEARCH_BUDGET) -> StructuralProfile:
    inc = g.predecessors()
    out = g.successors()
    in_deg = max((len(s) for s in inc.values()), default=0)
    out_deg = max((len(s) for s in out.values()), default=0)
    u = g.undirected()
    deg = max((u.degree(v) for v in u.vertices), default=0)

    if is_acyclic(g):
        dpath, dpath_exact = _dag_longest_path(g), True
    else:
        adj = {v: sorted(out[v]) for v in g.vertices}
        dpath, dpath_exact = _longest_path_search(adj, budget)
        if not dpath_exact and len(g.vertices) <= EXHAUSTIVE_PATH_CAP:
            dpath, dpath_exact = _longest_path_search(adj, budget * 10)

    if _is_forest(u):
        upath, upath_exact = _tree_diameter(u), True
    else:
        uadj = {v: sorted(ns) for v, ns in u.adjacency().items()}
        upath, upath_exact = _longest_path_search(uadj, budget)

    return StructuralProfile(
        in_deg=in_deg,
        out_deg=out_deg,
        deg=deg,
        cc_size=cc_size(g),
        dpath_length=dpath,
        dpath_exact=dpath_exact,
        upath_length=upath,
        upath_exact=upath_exact,
    )


# ---------------------------------------------------------------------------
# shape classification


def classify(g: Digraph) -> frozenset[str]:
    """Labels that hold for the graph by definition.

    Shape labels are only assigned to weakly connected graphs; a disconnected
    or empty graph gets at most the ``acyclic`` label.
    """
    labels: set[str] = set()
    if is_acyclic(g):
        labels.add("acyclic")
    if not g.vertices or not g.is_weakly_connected():
        return frozenset(labels)
    u = g.undirected()
    anti = g.has_antiparallel_pair()

    heads = {v for _, v in g.edges}
    tails = {u_ for u_, _ in g.edges}

    if u.is_tree():
        labels.add("tree")
        if u.is_path_graph():
            labels.add("path-graph")
        if u.is_star():
            labels.add("star")
        if not anti:
            labels.add("polytree")
            if u.is_path_graph():
                labels.add("polypath")
            if u.is_star() and len(heads) <= 1:
                labels.add("in-star")
            if u.is_star() and len(tails) <= 1:
                labels.add("out-star")
            if u.is_path_graph() and all(
                g.in_degree(v) <= 1 and g.out_degree(v) <= 1 for v in g.vertices
            ):
                labels.add("directed-path")
            if "polypath" in labels:
                srcs, snks = g.sources(), g.sinks()
                if g.vertices and g.vertices == srcs | snks:
                    labels.add("fence")

    n = len(g.vertices)
    if not anti and len(g.edges) == n * (n - 1) // 2 and len(u.edges) == n * (n - 1) // 2:
        labels.add("tournament")
    return frozenset(labels)


# ---------------------------------------------------------------------------
# contraction and subdivision


def fresh_vertex(g: Digraph, stem: str = "w#") -> str:
    i = 0
    while f"{stem}{i}" in g.vertices:
        i += 1
    return f"{stem}{i}"


def contract_named(g: Digraph, e: tuple[str, str]) -> tuple[Digraph, str]:
    """Contract edge e = (u, v): replace both endpoints by a fresh vertex and
    re-target every other edge through it; parallels collapse, the edge pair
    (u, v)/(v, u) disappears. Returns the new graph and the fresh name."""
    u, v = e
    if (u, v) not in g.edges:
        raise MissingEdgeError(f"edge ({u!r}, {v!r}) is not in the graph")
    w = fresh_vertex(g)

    def f(x: str) -> str:
        return w if x in (u, v) else x

    edges = frozenset(
        (f(a), f(b))
        for a, b in g.edges
        if (a, b) != (u, v) and (a, b) != (v, u)
    )
    verts = (g.vertices - {u, v}) | {w}
    return Digraph(verts, edges), w


def contract(g: Digraph, e: tuple[str, str]) -> Digraph:
    return contract_named(g, e)[0]


def subdivide_named(g: Digraph, e: tuple[str, str]) -> tuple[Digraph, str]:
    """Replace edge (u, v) by the two-edge path u -> w -> v through a fresh w."""
    u, v = e
    if (u, v) not in g.edges:
        raise MissingEdgeError(f"edge ({u!r}, {v!r}) is not in the graph")
    w = fresh_vertex(g)
    edges = (g.edges - {(u, v)}) | {(u, w), (w, v)}
    return Digraph(g.vertices | {w}, frozenset(edges)), w


def subdivide(g: Digraph, e: tuple[str, str]) -> Digraph:
    return subdivide_named(g, e)[0]


# ---------------------------------------------------------------------------
# polypath walks and signatures


def path_walk(g: Digraph) -> list[str]:
    """Vertex order of a polypath's underlying path, starting from the
    lexicographically least endpoint. A single vertex yields itself."""
    if "polypath" not in classify(g):
        raise ValidationError("graph is not a polypath")
    if len(g.vertices) == 1:
        return [next(iter(g.vertices))]
    u = g.undirected()
    adj = u.adjacency()
    ends = sorted(v for v in g.vertices if u.degree(v) == 1)
    walk = [ends[0]]
    prev = None
    while len(walk) < len(g.vertices):
        nxt = [n for n in adj[walk[-1]] if n != prev]
        prev = walk[-1]
        walk.append(min(nxt))
    return walk


def orientation(g: Digraph, walk: list[str]) -> str:
    """Direction string along a walk: '>' for a forward edge, '<' for a
    backward one."""
    chars = []
    for a, b in zip(walk, walk[1:]):
        if (a, b) in g.edges:
            chars.append(">")
        elif (b, a) in g.edges:
            chars.append("<")
        else:
            raise MissingEdgeError(f"walk step ({a!r}, {b!r}) has no edge")
    return "".join(chars)


def flip_string(s: str) -> str:
    return "".join(">" if c == "<" else "<" for c in reversed(s))


def canonical_path_string(s: str) -> str:
    return min(s, flip_string(s))


def runs(s: str) -> list[tuple[str, int]]:
    """Maximal same-direction runs of an orientation string."""
    out: list[tuple[str, int]] = []
    for c in s:
        if out and out[-1][0] == c:
            out[-1] = (c, out[-1][1] + 1)
        else:
            out.append((c, 1))
    return out


def polypath_from_string(s: str, prefix: str = "q") -> Digraph:
    """Canonical polypath realizing an orientation string."""
    verts = [f"{prefix}{i}" for i in range(len(s) + 1)]
    edges = set()
    for i, c in enumerate(s):
        if c == ">":
            edges.add((verts[i], verts[i + 1]))
        else:
            edges.add((verts[i + 1], verts[i]))
    return Digraph(frozenset(verts), frozenset(edges))


def path_sink_source_counts(s: str) -> tuple[int, int]:
    """(sinks, sources) of the polypath with orientation string s."""
    if not s:
        return (0, 0)
    sinks = sources = 0
    length = len(s)
    for p in range(length + 1):
        left = s[p - 1] if p > 0 else None
        right = s[p] if p < length else None
        incoming = (left == ">") or (right == "<")
        outgoing = (left == "<") or (right == ">")
        if incoming and not outgoing:
            sinks += 1
        elif outgoing and not incoming:
            sources += 1
    return (sinks, sources)


# ---------------------------------------------------------------------------
# shape generators


def make_in_star(k: int, prefix: str = "") -> Digraph:
    if k < 0:
        raise BadParameterError("in-star needs k >= 0")
    c = f"{prefix}c"
    leaves = [f"{prefix}s{i}" for i in range(1, k + 1)]
    return Digraph(frozenset([c, *leaves]), frozenset((s, c) for s in leaves))


def make_out_star(k: int, prefix: str = "") -> Digraph:
    if k < 0:
        raise BadParameterError("out-star needs k >= 0")
    c = f"{prefix}c"
    leaves = [f"{prefix}s{i}" for i in range(1, k + 1)]
    return Digraph(frozenset([c, *leaves]), frozenset((c, s) for s in leaves))


def make_dpath(k: int, prefix: str = "") -> Digraph:
    if k < 1:
        raise BadParameterError("directed path needs k >= 1")
    verts = [f"{prefix}p{i}" for i in range(1, k + 1)]
    return Digraph(frozenset(verts), frozenset(zip(verts, verts[1:])))


def make_fence(m: int, c: int, prefix: str = "") -> Digraph:
    """Fence with m sinks and m + c sources; c picks the end shape."""
    if m < 1 or c not in (-1, 0, 1):
        raise BadParameterError("fence needs m >= 1 and c in {-1, 0, +1}")
    if m == 1 and c == -1:
        raise BadParameterError("a fence with 1 sink and 0 sources does not exist")
    lo = 1 if c == -1 else 0
    hi = m - 1 if c <= 0 else m
    sources = [f"{prefix}u{j}" for j in range(lo, hi + 1)]
    sinks = [f"{prefix}v{j}" for j in range(1, m + 1)]
    edges = set()
    for j in range(1, m + 1):
        if lo <= j - 1 <= hi:
            edges.add((f"{prefix}u{j-1}", f"{prefix}v{j}"))
        if lo <= j <= hi:
            edges.add((f"{prefix}u{j}", f"{prefix}v{j}"))
    return Digraph(frozenset(sources + sinks), frozenset(edges))


def make_gk_family(k: int, m: int, prefix: str = "") -> Digraph:
    """Disjoint union of m^(k-1) directed paths on m vertices each."""
    if k < 2 or m < 1:
        raise BadParameterError("family generator needs k >= 2 and m >= 1")
    copies = m ** (k - 1)
    edges = set()
    verts = set()
    for i in range(1, copies + 1):
        chain = [f"{prefix}p{i}_{j}" for j in range(1, m + 1)]
        verts.update(chain)
        edges.update(zip(chain, chain[1:]))
    return Digraph(frozenset(verts), frozenset(edges))


def make_tight_polypath(m: int, k: int, prefix: str = "") -> Digraph:
    """Polypath with m sinks, m + 1 sources and every source-to-sink run of
    length exactly k; it has 2mk + 1 vertices, meeting the size bound."""
    if m < 1 or k < 1:
        raise BadParameterError("tight polypath needs m >= 1 and k >= 1")
    verts: list[str] = []
    edges = set()
    sources = [f"{prefix}u{j}" for j in range(m + 1)]
    sinks = [f"{prefix}v{j}" for j in range(1, m + 1)]
    verts.extend(sources)
    verts.extend(sinks)
    for j in range(1, m + 1):
        for side, top in (("a", sources[j - 1]), ("b", sources[j])):
            run = [top] + [f"{prefix}w{j}{side}{t}" for t in range(1, k)] + [sinks[j - 1]]
            verts.extend(run[1:-1])
            edges.update(zip(run, run[1:]))
    return Digraph(frozenset(verts), frozenset(edges))


def make_shape(kind: str, prefix: str = "", **params) -> Digraph:
    """Named-shape dispatcher used by the command line."""
    makers = {
        "in_star": lambda: make_in_star(params["k"], prefix),
        "out_star": lambda: make_out_star(params["k"], prefix),
        "dpath": lambda: make_dpath(params["k"], prefix),
        "fence": lambda: make_fence(params["m"], params["c"], prefix),
        "gk_family": lambda: make_gk_family(params["k"], params["m"], prefix),
        "tight_polypath": lambda: make_tight_polypath(params["m"], params["k"], prefix),
    }
    if kind not in makers:
        raise BadParameterError(f"unknown shape kind {kind!r}")
    try:
        return makers[kind]()
    except KeyError as exc:
        raise BadParameterError(f"shape {kind!r} is missing parameter {exc}") from None


# ---------------------------------------------------------------------------
# numeric bounds


def moore_bound(d: int, k: int) -> int:
    """Largest vertex count of a connected graph with max degree d and
    longest path length k."""
    if d < 0 or k < 0:
        raise BadParameterError("bounds need nonnegative arguments")
    return 1 + d * sum((d - 1) ** i for i in range(k))


def polypath_bound(m: int, k: int) -> int:
    """Largest vertex count of a polypath with at most m sinks, m + 1 sources
    and directed path length at most k."""
    if m < 0 or k < 0:
        raise BadParameterError("bounds need nonnegative arguments")
    return 2 * m * k + 1


# ---------------------------------------------------------------------------
# isomorphism


def _degree_pairs(g: Digraph) -> dict[str, tuple[int, int]]:
    inc = g.predecessors()
    out = g.successors()
    return {v: (len(inc[v]), len(out[v])) for v in g.vertices}


def find_isomorphism(
    g: Digraph, h: Digraph, budget: int = DEFAULT_SEARCH_BUDGET
) -> dict[str, str] | None:
    """Backtracking search for a bijection carrying g's edges onto h's.

    Prunes on (in, out) degree pairs; raises BudgetExceededError when the
    number of attempted assignments passes the budget.
    """
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    gdeg = _degree_pairs(g)
    hdeg = _degree_pairs(h)
    if sorted(gdeg.values()) != sorted(hdeg.values()):
        return None

    g_succ = g.successors()
    g_pred = g.predecessors()
    h_succ = h.successors()
    h_pred = h.predecessors()

    order = sorted(g.vertices, key=lambda v: (-(gdeg[v][0] + gdeg[v][1]), v))
    mapping: dict[str, str] = {}
    used: set[str] = set()
    tries = 0

    def compatible(gv: str, hv: str) -> bool:
        if gdeg[gv] != hdeg[hv]:
            return False
        for n in g_succ[gv]:
            if n in mapping and mapping[n] not in h_succ[hv]:
                return False
        for n in g_pred[gv]:
            if n in mapping and mapping[n] not in h_pred[hv]:
                return False
        for hn in h_succ[hv]:
            if hn in used:
                gn = next(k for k, m in mapping.items() if m == hn)
                if gn not in g_succ[gv]:
                    return False
        for hn in h_pred[hv]:
            if hn in used:
                gn = next(k for k, m in mapping.items() if m == hn)
                if gn not in g_pred[gv]:
                    return False
        return True

    def backtrack(i: int) -> bool:
        nonlocal tries
        if i == len(order):
            return True
        gv = order[i]
        for hv in sorted(h.vertices - used):
            tries += 1
            if tries > budget:
                raise BudgetExceededError("isomorphism search budget exhausted")
            if compatible(gv, hv):
                mapping[gv] = hv
                used.add(hv)
                if backtrack(i + 1):
                    return True
                del mapping[gv]
                used.discard(hv)
        return False

    return dict(mapping) if backtrack(0) else None


def is_isomorphic(g: Digraph, h: Digraph, budget: int = DEFAULT_SEARCH_BUDGET) -> bool:
    return find_isomorphism(g, h, budget) is not None


def disjoint_union(graphs: Iterable[Digraph]) -> Digraph:
    verts: set[str] = set()
    edges: set[tuple[str, str]] = set()
    for g in graphs:
        overlap = verts & g.vertices
        if overlap:
            raise ValidationError(
                "union operands share vertices: " + ", ".join(sorted(overlap))
            )
        verts |= g.vertices
        edges |= g.edges
    return Digraph(frozenset(verts), frozenset(edges))
