"""Graph homomorphisms, spider moves, the x-homotopy search, folds and pleats."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from .graph import Graph, GraphError, load_graph


class MorphismError(ValueError):
    pass


class Morphism:
    """A vertex map dom -> cod. Construction does not check adjacency; see :func:`validate`."""

    __slots__ = ("dom", "cod", "images")

    def __init__(self, dom: Graph, cod: Graph, mapping):
        self.dom = dom
        self.cod = cod
        if isinstance(mapping, dict):
            mapping = {str(k): str(v) for k, v in mapping.items()}
            missing = [v for v in dom.vertices if v not in mapping]
            if missing:
                raise MorphismError(f"no image given for {missing[0]}")
            extra = [k for k in mapping if k not in dom]
            if extra:
                raise MorphismError(f"{extra[0]} is not a vertex of {dom.name}")
            try:
                self.images = tuple(cod.index(mapping[v]) for v in dom.vertices)
            except GraphError as exc:
                raise MorphismError(str(exc)) from None
        else:
            self.images = tuple(mapping)
            if len(self.images) != dom.order:
                raise MorphismError("image tuple has the wrong length")

    def __call__(self, v) -> str:
        return self.cod.vertices[self.images[self.dom.index(v)]]

    def as_dict(self) -> dict[str, str]:
        return {v: self.cod.vertices[t] for v, t in zip(self.dom.vertices, self.images)}

    def fibre(self, v) -> list[str]:
        t = self.cod.index(v)
        return [self.dom.vertices[i] for i, s in enumerate(self.images) if s == t]

    def compose(self, inner: "Morphism") -> "Morphism":
        """self o inner."""
        if inner.cod != self.dom:
            raise MorphismError("cannot compose: codomain and domain differ")
        return Morphism(inner.dom, self.cod, tuple(self.images[t] for t in inner.images))

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.images == other.images and self.dom == other.dom and self.cod == other.cod

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        body = ", ".join(f"{k}->{v}" for k, v in self.as_dict().items())
        return f"Morphism({self.dom.name}->{self.cod.name}: {body})"


def identity_morphism(G: Graph) -> Morphism:
    return Morphism(G, G, tuple(range(G.order)))


def violations(f: Morphism) -> list[tuple[str, str]]:
    """Edges of dom whose image is not an edge of cod."""
    V = f.dom.vertices
    im = f.images
    adj = f.cod.adj
    return [(V[i], V[j]) for i, j in sorted(f.dom.edge_indices()) if im[j] not in adj[im[i]]]


def validate(f: Morphism) -> tuple[bool, list[tuple[str, str]]]:
    bad = violations(f)
    return (not bad), bad


def is_homomorphism(f: Morphism) -> bool:
    return not violations(f)


# -- text format ---------------------------------------------------------------
def load_morphism(text: str, dom: Graph | None = None, cod: Graph | None = None,
                  base_dir: Path | None = None) -> Morphism:
    """Parse ``m <dom-vertex> <cod-vertex>`` lines. ``dom <file>``/``cod <file>``
    headers are resolved relative to ``base_dir`` when the graphs are not given."""
    pairs = {}
    refs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] in ("dom", "cod") and len(tok) == 2:
            refs[tok[0]] = tok[1]
        elif tok[0] == "m" and len(tok) == 3:
            if tok[1] in pairs:
                raise MorphismError(f"line {lineno}: {tok[1]} mapped twice")
            pairs[tok[1]] = tok[2]
        else:
            raise MorphismError(f"line {lineno}: cannot parse {line!r}")
    if dom is None or cod is None:
        base_dir = Path(base_dir or ".")
        for key in ("dom", "cod"):
            if (dom if key == "dom" else cod) is None and key not in refs:
                raise MorphismError(f"morphism file has no '{key}' reference")
        if dom is None:
            dom = load_graph((base_dir / refs["dom"]).read_text(encoding="utf-8"))
        if cod is None:
            cod = load_graph((base_dir / refs["cod"]).read_text(encoding="utf-8"))
    return Morphism(dom, cod, pairs)


def save_morphism(f: Morphism, dom_ref: str | None = None, cod_ref: str | None = None) -> str:
    lines = []
    if dom_ref:
        lines.append(f"dom {dom_ref}")
    if cod_ref:
        lines.append(f"cod {cod_ref}")
    lines += [f"m {a} {b}" for a, b in f.as_dict().items()]
    return "\n".join(lines) + "\n"


# -- spider moves and homotopy -------------------------------------------------
@dataclass(frozen=True)
class MorphismSpiderMove:
    vertex: str
    image: str


def _spider_candidates(dom: Graph, cod: Graph, im: tuple[int, ...], x: int) -> list[int]:
    others = [im[y] for y in dom.adj[x] if y != x]
    looped = x in dom.adj[x]
    cands = set(range(cod.order)) if not others else set(cod.adj[others[0]])
    for t in others[1:]:
        cands &= cod.adj[t]
    if looped:
        cands = {c for c in cands if c in cod.adj[c] and c in cod.adj[im[x]]}
    cands.discard(im[x])
    return sorted(cands)


def spider_moves_of(f: Morphism) -> list[MorphismSpiderMove]:
    out = []
    for x in range(f.dom.order):
        for c in _spider_candidates(f.dom, f.cod, f.images, x):
            out.append(MorphismSpiderMove(f.dom.vertices[x], f.cod.vertices[c]))
    return out


def apply_spider_move(f: Morphism, move: MorphismSpiderMove) -> Morphism:
    x = f.dom.index(move.vertex)
    c = f.cod.index(move.image)
    if c not in _spider_candidates(f.dom, f.cod, f.images, x):
        raise MorphismError(f"{move.vertex} -> {move.image} is not a spider move from {f}")
    im = list(f.images)
    im[x] = c
    return Morphism(f.dom, f.cod, tuple(im))


@dataclass
class HomotopyVerdict:
    verdict: str  # "yes" | "no" | "inconclusive"
    moves: list[MorphismSpiderMove] = field(default_factory=list)
    states: int = 0

    def __bool__(self):
        return self.verdict == "yes"


def homotopic(f: Morphism, g: Morphism, max_states: int = 10**6) -> HomotopyVerdict:
    """Breadth-first search over the spider-move graph on Hom(dom, cod) from f."""
    if f.dom != g.dom or f.cod != g.cod:
        raise MorphismError("morphisms must share domain and codomain")
    dom, cod = f.dom, f.cod
    target = g.images
    parent = {f.images: None}
    queue = deque([f.images])
    while queue:
        im = queue.popleft()
        if im == target:
            moves = []
            while parent[im] is not None:
                prev, x = parent[im]
                moves.append(MorphismSpiderMove(dom.vertices[x], cod.vertices[im[x]]))
                im = prev
            return HomotopyVerdict("yes", moves[::-1], len(parent))
        for x in range(dom.order):
            for c in _spider_candidates(dom, cod, im, x):
                nxt = im[:x] + (c,) + im[x + 1:]
                if nxt in parent:
                    continue
                if len(parent) >= max_states:
                    return HomotopyVerdict("inconclusive", states=len(parent))
                parent[nxt] = (im, x)
                queue.append(nxt)
    return HomotopyVerdict("no", states=len(parent))


def length_one_homotopic(f: Morphism, g: Morphism) -> bool:
    """f(k) ~ g(k') for every edge k ~ k' of the domain (both orientations)."""
    adj = f.cod.adj
    for i, j in f.dom.edge_indices():
        if g.images[j] not in adj[f.images[i]] or g.images[i] not in adj[f.images[j]]:
            return False
    return True


# -- folds and pleats ----------------------------------------------------------
def folds(G: Graph) -> list[tuple[str, str]]:
    """All pairs (x, y), x != y, with N(x) contained in N(y), in vertex order."""
    out = []
    for x in range(G.order):
        for y in range(G.order):
            if x != y and G.adj[x] <= G.adj[y]:
                out.append((G.vertices[x], G.vertices[y]))
    return out


def find_fold(G: Graph) -> tuple[str, str] | None:
    for x in range(G.order):
        for y in range(G.order):
            if x != y and G.adj[x] <= G.adj[y]:
                return G.vertices[x], G.vertices[y]
    return None


def apply_fold(G: Graph, x, y) -> tuple[Graph, Morphism]:
    """Collapse x onto y; returns the image graph and the retraction G -> image."""
    x, y = str(x), str(y)
    if x == y or not G.adj[G.index(x)] <= G.adj[G.index(y)]:
        raise MorphismError(f"N({x}) is not contained in N({y})")
    image = G.induced([v for v in G.vertices if v != x], G.name)
    r = Morphism(G, image, {v: (y if v == x else v) for v in G.vertices})
    return image, r


def pleat(G: Graph) -> tuple[Graph, Morphism]:
    """Fold until stiff. Returns the stiff graph and the composite retraction."""
    current = G
    retraction = identity_morphism(G)
    while (pair := find_fold(current)) is not None:
        current, r = apply_fold(current, *pair)
        retraction = r.compose(retraction)
    return current, retraction
