"""Finite undirected graphs with loops, plus the text and DOT formats.

Vertices are opaque string ids kept in declaration order; internally every
algorithm works on dense integer indices into that order.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Raised for malformed graph files and graphs violating the conventions."""


@dataclass(frozen=True, order=True)
class Diamond:
    """A 4-cycle w~x~y~z~w with w != y and x != z."""

    w: str
    x: str
    y: str
    z: str

    def __iter__(self):
        return iter((self.w, self.x, self.y, self.z))

    def __str__(self):
        return "".join(self) if all(len(t) == 1 for t in self) else " ".join(self)


class Graph:
    """Immutable connected graph without isolated vertices.

    ``edges`` are unordered pairs; a pair ``(v, v)`` is a loop.
    """

    __slots__ = ("name", "vertices", "_index", "adj", "nbrs", "_edges")

    def __init__(self, vertices: Iterable, edges: Iterable, name: str = "G", validate: bool = True):
        verts = tuple(str(v) for v in vertices)
        index = {}
        for i, v in enumerate(verts):
            if not v or any(c.isspace() for c in v):
                raise GraphError(f"invalid vertex id {v!r}")
            if v in index:
                raise GraphError(f"duplicate vertex {v}")
            index[v] = i
        adj = [set() for _ in verts]
        pairs = set()
        for e in edges:
            a, b = (str(t) for t in e)
            for t in (a, b):
                if t not in index:
                    raise GraphError(f"edge references unknown vertex {t}")
            i, j = sorted((index[a], index[b]))
            if (i, j) in pairs:
                raise GraphError(f"duplicate edge {a} {b}")
            pairs.add((i, j))
            adj[i].add(j)
            adj[j].add(i)
        self.name = name
        self.vertices = verts
        self._index = index
        self.adj = tuple(frozenset(s) for s in adj)
        self.nbrs = tuple(tuple(sorted(s)) for s in adj)
        self._edges = frozenset(pairs)
        if validate:
            self.validate()

    # -- basic queries -------------------------------------------------
    def validate(self) -> None:
        if not self.vertices:
            raise GraphError("graph has no vertices")
        for i, s in enumerate(self.adj):
            if not s:
                raise GraphError(f"isolated vertex {self.vertices[i]}")
        seen = self.component(0)
        if len(seen) != len(self.vertices):
            missing = next(v for i, v in enumerate(self.vertices) if i not in seen)
            raise GraphError(f"graph is disconnected: {missing} unreachable from {self.vertices[0]}")

    def component(self, start: int) -> set:
        seen = {start}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in self.adj[i]:
                if j not in seen:
                    seen.add(j)
                    queue.append(j)
        return seen

    def index(self, v) -> int:
        try:
            return self._index[str(v)]
        except KeyError:
            raise GraphError(f"unknown vertex {v}") from None

    def __contains__(self, v) -> bool:
        return str(v) in self._index

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self._edges)

    def edges(self) -> list[tuple[str, str]]:
        return [(self.vertices[i], self.vertices[j]) for i, j in sorted(self._edges)]

    def edge_indices(self) -> frozenset:
        return self._edges

    def adjacent(self, a, b) -> bool:
        return self.index(b) in self.adj[self.index(a)]

    def is_looped(self, v) -> bool:
        i = self.index(v)
        return i in self.adj[i]

    def loops(self) -> list[str]:
        return [v for i, v in enumerate(self.vertices) if i in self.adj[i]]

    def degree(self, v) -> int:
        return len(self.adj[self.index(v)])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self._edges == other._edges

    def __hash__(self):
        return hash((self.vertices, self._edges))

    def __repr__(self):
        return f"Graph({self.name!r}, order={self.order}, size={self.size})"

    def relabel(self, mapping: dict, name: str | None = None) -> "Graph":
        """Rename vertices; ids missing from ``mapping`` are kept."""
        m = lambda v: str(mapping.get(v, v))
        return Graph([m(v) for v in self.vertices], [(m(a), m(b)) for a, b in self.edges()], name or self.name)

    def induced(self, keep: Iterable, name: str | None = None, validate: bool = True) -> "Graph":
        keep = set(str(v) for v in keep)
        verts = [v for v in self.vertices if v in keep]
        edges = [(a, b) for a, b in self.edges() if a in keep and b in keep]
        return Graph(verts, edges, name or self.name, validate=validate)


# -- neighborhoods and diamonds --------------------------------------------
def neighborhood(G: Graph, v) -> frozenset:
    """N(v); includes v itself when v is looped."""
    return frozenset(G.vertices[j] for j in G.adj[G.index(v)])


def n2_walks(G: Graph, v) -> list[tuple[str, str, str]]:
    """All length-2 walks (v x y), ordered by vertex order of x then y."""
    i = G.index(v)
    V = G.vertices
    return [(V[i], V[x], V[y]) for x in G.nbrs[i] for y in G.nbrs[x]]


def _dihedral(c):
    w, x, y, z = c
    return ((w, x, y, z), (x, y, z, w), (y, z, w, x), (z, w, x, y),
            (w, z, y, x), (z, y, x, w), (y, x, w, z), (x, w, z, y))


def diamond_indices(G: Graph) -> list[tuple[int, int, int, int]]:
    """Canonical diamonds as index tuples: the lexicographically least of the
    eight dihedral readings, so w is minimal and x < z (x <= z with loops)."""
    found = set()
    for w, row in enumerate(oriented_diamonds(G)):
        for x, y, z in row:
            found.add(min(_dihedral((w, x, y, z))))
    return sorted(found)


def diamonds(G: Graph) -> list[Diamond]:
    V = G.vertices
    return [Diamond(V[w], V[x], V[y], V[z]) for w, x, y, z in diamond_indices(G)]


def oriented_diamonds(G: Graph) -> list[list[tuple[int, int, int]]]:
    """For each w, every (x, y, z) making w x y z a diamond, all orientations."""
    out = [[] for _ in range(G.order)]
    adj = G.adj
    for w in range(G.order):
        for x in G.nbrs[w]:
            for z in G.nbrs[w]:
                if z == x:
                    continue
                for y in G.nbrs[x]:
                    if y != w and y in adj[z]:
                        out[w].append((x, y, z))
    return out


def is_stiff(G: Graph) -> bool:
    from .morphism import find_fold

    return find_fold(G) is None


def is_bipartite(G: Graph) -> bool:
    color = [-1] * G.order
    color[0] = 0
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in G.adj[i]:
            if color[j] < 0:
                color[j] = 1 - color[i]
                queue.append(j)
            elif color[j] == color[i]:
                return False
    return True


def distances(G: Graph, source) -> dict[str, int]:
    s = G.index(source)
    dist = {s: 0}
    queue = deque([s])
    while queue:
        i = queue.popleft()
        for j in G.nbrs[i]:
            if j not in dist:
                dist[j] = dist[i] + 1
                queue.append(j)
    return {G.vertices[i]: d for i, d in dist.items()}


# -- text format -------------------------------------------------------------
def load_graph(text: str, name: str | None = None) -> Graph:
    """Parse the line format: ``graph <name>``, ``v <id>``, ``e <id> <id>``, ``#`` comments."""
    gname = name
    verts: list[str] = []
    declared: set[str] = set()
    edges: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "graph":
            if len(tok) != 2:
                raise GraphError(f"line {lineno}: expected 'graph <name>', got {line!r}")
            gname = gname or tok[1]
        elif kind == "v":
            if len(tok) != 2:
                raise GraphError(f"line {lineno}: expected 'v <id>', got {line!r}")
            if tok[1] in declared:
                raise GraphError(f"line {lineno}: duplicate vertex {tok[1]}")
            declared.add(tok[1])
            verts.append(tok[1])
        elif kind == "e":
            if len(tok) != 3:
                raise GraphError(f"line {lineno}: expected 'e <id> <id>', got {line!r}")
            edges.append((tok[1], tok[2], lineno))
        else:
            raise GraphError(f"line {lineno}: unknown directive {kind!r}")
    seen = set()
    for a, b, lineno in edges:
        for t in (a, b):
            if t not in declared:
                raise GraphError(f"line {lineno}: edge references undeclared vertex {t}")
        key = frozenset((a, b))
        if key in seen:
            raise GraphError(f"line {lineno}: duplicate edge {a} {b}")
        seen.add(key)
    return Graph(verts, [(a, b) for a, b, _ in edges], gname or "G")


def _sort_key(v: str):
    return (0, int(v), "") if v.lstrip("-").isdigit() else (1, 0, v)


def save_graph(G: Graph, sort: bool = True) -> str:
    """Serialize; vertices then edges, sorted (numeric ids numerically)."""
    verts = sorted(G.vertices, key=_sort_key) if sort else list(G.vertices)
    rank = {v: i for i, v in enumerate(verts)}
    lines = [f"graph {G.name}"]
    lines += [f"v {v}" for v in verts]
    es = [tuple(sorted(e, key=rank.__getitem__)) for e in G.edges()]
    if sort:
        es.sort(key=lambda e: (rank[e[0]], rank[e[1]]))
    lines += [f"e {a} {b}" for a, b in es]
    return "\n".join(lines) + "\n"


def _dot_id(v: str) -> str:
    return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(G: Graph, labels: dict | None = None) -> str:
    lines = [f"graph {_dot_id(G.name)} {{"]
    if labels:
        for v in G.vertices:
            lines.append(f"  {_dot_id(v)} [label={_dot_id(labels.get(v, v))}];")
    for a, b in G.edges():
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_from_edges(edges: Sequence[tuple], name: str = "G") -> Graph:
    """Convenience constructor; vertex order is first appearance."""
    verts: list[str] = []
    seen = set()
    for e in edges:
        for t in e:
            t = str(t)
            if t not in seen:
                seen.add(t)
                verts.append(t)
    return Graph(verts, edges, name)
