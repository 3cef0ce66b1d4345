"""Independent reference implementations used to cross-check the library.

Everything here is deliberately naive (permutations, full enumeration) and
shares no code path with the implementations under test.
"""

from __future__ import annotations

from itertools import combinations, permutations

from causal_forge.graphs import Digraph


def iso_naive(g: Digraph, h: Digraph) -> bool:
    """Isomorphism by trying every vertex bijection."""
    gv, hv = sorted(g.vertices), sorted(h.vertices)
    if len(gv) != len(hv) or len(g.edges) != len(h.edges):
        return False
    for perm in permutations(hv):
        m = dict(zip(gv, perm))
        if all((m[u], m[v]) in h.edges for u, v in g.edges):
            return True
    return False


def longest_dpath_naive(g: Digraph) -> int:
    succ = {v: sorted(w for (u, w) in g.edges if u == v) for v in g.vertices}
    best = 0

    def dfs(v, seen, length):
        nonlocal best
        best = max(best, length)
        for n in succ[v]:
            if n not in seen:
                dfs(n, seen | {n}, length + 1)

    for start in g.vertices:
        dfs(start, {start}, 0)
    return best


def longest_upath_naive(g: Digraph) -> int:
    adj = {v: set() for v in g.vertices}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    best = 0

    def dfs(v, seen, length):
        nonlocal best
        best = max(best, length)
        for n in adj[v]:
            if n not in seen:
                dfs(n, seen | {n}, length + 1)

    for start in g.vertices:
        dfs(start, {start}, 0)
    return best


def _is_weakly_connected_naive(verts: set[str], edges: set[tuple[str, str]]) -> bool:
    if not verts:
        return False
    adj = {v: set() for v in verts}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = set()
    stack = [next(iter(sorted(verts)))]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        stack.extend(adj[x])
    return seen == verts


def _polypath_string_naive(verts: set[str], edges: set[tuple[str, str]]) -> str | None:
    """Orientation string when (verts, edges) is a polypath, else None."""
    if not _is_weakly_connected_naive(verts, edges):
        return None
    if any((v, u) in edges for u, v in edges):
        return None
    deg = {v: 0 for v in verts}
    adj = {v: set() for v in verts}
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
        adj[u].add(v)
        adj[v].add(u)
    if len(edges) != len(verts) - 1:
        return None
    if any(d > 2 for d in deg.values()):
        return None
    if len(verts) == 1:
        return ""
    ends = sorted(v for v in verts if deg[v] == 1)
    if len(ends) != 2:
        return None
    walk = [ends[0]]
    prev = None
    while len(walk) < len(verts):
        nxt = [n for n in adj[walk[-1]] if n != prev]
        if not nxt:
            return None
        prev = walk[-1]
        walk.append(nxt[0])
    chars = []
    for a, b in zip(walk, walk[1:]):
        chars.append(">" if (a, b) in edges else "<")
    return "".join(chars)


def _canon_string(s: str) -> str:
    flipped = "".join(">" if c == "<" else "<" for c in reversed(s))
    return min(s, flipped)


def sp_classes_naive(g: Digraph, max_size: int) -> set[tuple]:
    """Isomorphism classes of the SP-graphs of g, straight from the
    definition: every weakly connected in-star or out-star subgraph, and
    every contraction (string subsequence) of every polypath subgraph.

    Classes are keyed ("star-in", k) / ("star-out", k) for k >= 3 and
    ("path", canonical orientation string) otherwise. Only usable for tiny
    graphs: all vertex and edge subsets are enumerated.
    """
    classes: set[tuple] = set()
    verts = sorted(g.vertices)
    for r in range(1, min(len(verts), max_size) + 1):
        for vsub in combinations(verts, r):
            vset = set(vsub)
            avail = [e for e in g.edges if e[0] in vset and e[1] in vset]
            for k in range(len(avail) + 1):
                for esub in combinations(avail, k):
                    eset = set(esub)
                    if not _is_weakly_connected_naive(vset, eset):
                        continue
                    heads = {v for _, v in eset}
                    tails = {u for u, _ in eset}
                    indeg = {v: 0 for v in vset}
                    outdeg = {v: 0 for v in vset}
                    for u, v in eset:
                        outdeg[u] += 1
                        indeg[v] += 1
                    # in-star: all edges converge on one head
                    if len(vset) >= 1 and len(heads) <= 1 and all(
                        outdeg[v] <= 1 for v in vset
                    ) and len(eset) == len(vset) - 1:
                        kk = len(vset) - 1
                        if kk >= 3:
                            classes.add(("star-in", kk))
                        else:
                            s = _polypath_string_naive(vset, eset)
                            classes.add(("path", _canon_string(s)))
                    if len(vset) >= 1 and len(tails) <= 1 and all(
                        indeg[v] <= 1 for v in vset
                    ) and len(eset) == len(vset) - 1:
                        kk = len(vset) - 1
                        if kk >= 3:
                            classes.add(("star-out", kk))
                        else:
                            s = _polypath_string_naive(vset, eset)
                            if s is not None:
                                classes.add(("path", _canon_string(s)))
                    s = _polypath_string_naive(vset, eset)
                    if s is not None:
                        # contractions delete characters: all subsequences
                        n = len(s)
                        for mask in range(1 << n):
                            sub = "".join(s[i] for i in range(n) if mask >> i & 1)
                            if len(sub) + 1 <= max_size:
                                classes.add(("path", _canon_string(sub)))
    return classes
