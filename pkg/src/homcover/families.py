"""Generators for the graph families used throughout: paths, looped paths,
cycles, complete and complete bipartite graphs, wheels, Kneser graphs, and
the six-vertex graph with its twelve-vertex double cover.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations

from .graph import Graph, GraphError, load_graph

FAMILIES = (
    "path", "looped-path", "cycle", "complete", "complete-bipartite",
    "wheel", "kneser", "paper-g", "paper-g-tilde",
)

# Number of integer parameters each family takes.
ARITY = {
    "path": 1, "looped-path": 1, "cycle": 1, "complete": 1,
    "complete-bipartite": 2, "wheel": 1, "kneser": 2,
    "paper-g": 0, "paper-g-tilde": 0,
}


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.family not in ARITY:
            raise GraphError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if len(self.params) != ARITY[self.family]:
            raise GraphError(f"{self.family} takes {ARITY[self.family]} parameter(s), got {len(self.params)}")


def path(n: int) -> Graph:
    if n < 2:
        raise GraphError("path needs n >= 2 vertices")
    return Graph(range(n), [(i, i + 1) for i in range(n - 1)], f"P{n}")


def looped_path(n: int) -> Graph:
    """I_n: vertices 0..n, each looped, consecutive ones adjacent."""
    if n < 0:
        raise GraphError("looped path needs n >= 0")
    edges = [(i, i) for i in range(n + 1)] + [(i, i + 1) for i in range(n)]
    return Graph(range(n + 1), edges, f"I{n}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)], f"C{n}")


def complete(n: int) -> Graph:
    if n < 2:
        raise GraphError("complete graph needs n >= 2")
    return Graph(range(1, n + 1), combinations(range(1, n + 1), 2), f"K{n}")


def complete_bipartite(n: int, m: int) -> Graph:
    if n < 1 or m < 1:
        raise GraphError("complete bipartite graph needs n, m >= 1")
    a = [f"a{i}" for i in range(1, n + 1)]
    b = [f"b{j}" for j in range(1, m + 1)]
    return Graph(a + b, [(x, y) for x in a for y in b], f"K{n}_{m}")


def wheel(n: int) -> Graph:
    """W_{n+1}: rim 1..n plus hub c."""
    if n < 3:
        raise GraphError("wheel needs n >= 3 rim vertices")
    rim = list(range(1, n + 1))
    edges = [(i, i % n + 1) for i in rim] + [(i, "c") for i in rim]
    return Graph(rim + ["c"], edges, f"W{n}+1")


def subset_label(s) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


def kneser(n: int, k: int) -> Graph:
    if k < 1 or n < 2 * k + 1:
        raise GraphError(f"kneser graph K({n},{k}) needs k >= 1 and n >= 2k+1")
    subsets = list(combinations(range(1, n + 1), k))
    edges = [
        (subset_label(s), subset_label(t))
        for s, t in combinations(subsets, 2)
        if not set(s) & set(t)
    ]
    return Graph([subset_label(s) for s in subsets], edges, f"K({n},{k})")


def _asset(name: str) -> str:
    return resources.files("homcover.data").joinpath(name).read_text(encoding="utf-8")


def paper_g() -> Graph:
    """Pentagon a b c d e with an extra vertex b' adjacent to a and c."""
    return load_graph(_asset("paper_g.graph"))


def paper_g_tilde() -> Graph:
    """Decagon a1 b1 c1 d1 e1 a2 b2 c2 d2 e2 with b'1 ~ a1, c1 and b'2 ~ a2, c2."""
    return load_graph(_asset("paper_g_tilde.graph"))


def paper_g_cover():
    """The covering morphism paper-g-tilde -> paper-g (x_i -> x)."""
    from .morphism import load_morphism

    return load_morphism(_asset("paper_g_tilde_to_g.morph"), paper_g_tilde(), paper_g())


def cycle_double_cover():
    """The doubling map from the 8-cycle a1 b1 c1 d1 a2 b2 c2 d2 onto the 4-cycle abcd."""
    from .morphism import load_morphism

    return load_morphism(_asset("c8_to_c4.morph"), load_graph(_asset("c8.graph")), load_graph(_asset("c4.graph")))


def generate(spec: FamilySpec) -> Graph:
    p = spec.params
    f = spec.family
    if f == "path":
        return path(*p)
    if f == "looped-path":
        return looped_path(*p)
    if f == "cycle":
        return cycle(*p)
    if f == "complete":
        return complete(*p)
    if f == "complete-bipartite":
        return complete_bipartite(*p)
    if f == "wheel":
        return wheel(*p)
    if f == "kneser":
        return kneser(*p)
    if f == "paper-g":
        return paper_g()
    return paper_g_tilde()
