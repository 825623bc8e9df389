"""Backtracking isomorphism search for small graphs (a few dozen vertices)."""
from __future__ import annotations

from collections import Counter, deque

from .graph import Graph


def _refine(graphs: list[Graph]) -> list[list[int]]:
    """Joint colour refinement, so colours are comparable across graphs."""
    colors = [[(i in G.adj[i], len(G.adj[i])) for i in range(G.order)] for G in graphs]
    ncls = None
    while True:
        sigs = [
            [(c[i], tuple(sorted(c[j] for j in G.adj[i]))) for i in range(G.order)]
            for G, c in zip(graphs, colors)
        ]
        palette = {s: k for k, s in enumerate(sorted({s for sig in sigs for s in sig}))}
        new = [[palette[s] for s in sig] for sig in sigs]
        if len(palette) == ncls:
            return new
        ncls = len(palette)
        colors = new


def find_isomorphism(G: Graph, H: Graph) -> dict[str, str] | None:
    if G.order != H.order or G.size != H.size:
        return None
    cg, ch = _refine([G, H])
    if Counter(cg) != Counter(ch):
        return None
    n = G.order
    by_color: dict[int, list[int]] = {}
    for j, c in enumerate(ch):
        by_color.setdefault(c, []).append(j)
    # Visit G in BFS order from a vertex of the rarest colour class.
    freq = Counter(cg)
    start = min(range(n), key=lambda i: (freq[cg[i]], i))
    order = []
    seen = {start}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        order.append(i)
        for j in sorted(G.adj[i], key=lambda j: (freq[cg[j]], j)):
            if j not in seen:
                seen.add(j)
                queue.append(j)
    mapping = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        u = order[k]
        placed = order[:k]
        anchor = next((p for p in placed if p in G.adj[u]), None)
        pool = H.adj[mapping[anchor]] if anchor is not None else by_color[cg[u]]
        for t in sorted(pool):
            if used[t] or ch[t] != cg[u]:
                continue
            if (u in G.adj[u]) != (t in H.adj[t]):
                continue
            if any((p in G.adj[u]) != (mapping[p] in H.adj[t]) for p in placed):
                continue
            mapping[u] = t
            used[t] = True
            if extend(k + 1):
                return True
            used[t] = False
            mapping[u] = -1
        return False

    if not extend(0):
        return None
    return {G.vertices[i]: H.vertices[mapping[i]] for i in range(n)}


def are_isomorphic(G: Graph, H: Graph):
    """An isomorphism G -> H as a Morphism, or None."""
    from .morphism import Morphism

    m = find_isomorphism(G, H)
    return None if m is None else Morphism(G, H, m)
