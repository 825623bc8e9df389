"""Cover and homotopy-cover verification, unique walk lifting, and the
step-by-step homotopy lifting construction."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .graph import Diamond, Graph, diamond_indices
from .morphism import Morphism, MorphismError, length_one_homotopic, violations
from .walks import Walk


class CoverError(ValueError):
    pass


@dataclass
class CoverReport:
    is_surjective: bool
    neighborhood_failures: list[tuple[str, str]] = field(default_factory=list)
    diamond_failures: list[Diamond] = field(default_factory=list)
    is_cover: bool = False
    is_homotopy_cover: bool = False

    def as_dict(self) -> dict:
        return {
            "is_surjective": self.is_surjective,
            "is_cover": self.is_cover,
            "is_homotopy_cover": self.is_homotopy_cover,
            "neighborhood_failures": [{"vertex": v, "defect": d} for v, d in self.neighborhood_failures],
            "diamond_failures": [list(d) for d in self.diamond_failures],
        }


def _neighbor_table(f: Morphism) -> list[dict[int, int]] | None:
    """For each dom vertex, the map (cod neighbour -> unique dom neighbour),
    or None as soon as some neighbourhood map is not a bijection."""
    table = []
    im = f.images
    for i in range(f.dom.order):
        row = {}
        for j in f.dom.adj[i]:
            if im[j] in row:
                return None
            row[im[j]] = j
        if set(row) != f.cod.adj[im[i]]:
            return None
        table.append(row)
    return table


def check_cover(f: Morphism) -> CoverReport:
    bad = violations(f)
    if bad:
        raise CoverError(f"not a graph morphism: edge {bad[0][0]} {bad[0][1]} is not preserved")
    dom, cod = f.dom, f.cod
    im = f.images
    surjective = set(im) == set(range(cod.order))
    report = CoverReport(is_surjective=surjective)
    for i in range(dom.order):
        images = [im[j] for j in dom.nbrs[i]]
        target = cod.adj[im[i]]
        dup = sorted({t for t in images if images.count(t) > 1})
        miss = sorted(target - set(images))
        parts = []
        if dup:
            parts.append("repeated images " + ",".join(cod.vertices[t] for t in dup))
        if miss:
            parts.append("missing images " + ",".join(cod.vertices[t] for t in miss))
        if parts:
            report.neighborhood_failures.append((dom.vertices[i], "; ".join(parts)))
    report.is_cover = surjective and not report.neighborhood_failures
    if not report.is_cover:
        return report
    table = _neighbor_table(f)
    fibres: list[list[int]] = [[] for _ in range(cod.order)]
    for i, t in enumerate(im):
        fibres[t].append(i)
    V = cod.vertices
    for w, x, y, z in diamond_indices(cod):
        for wt in fibres[w]:
            via_x = table[table[wt][x]][y]
            via_z = table[table[wt][z]][y]
            if via_x != via_z:
                report.diamond_failures.append(Diamond(V[w], V[x], V[y], V[z]))
                break
    report.is_homotopy_cover = not report.diamond_failures
    return report


@lru_cache(maxsize=64)
def _is_homotopy_cover(f: Morphism) -> bool:
    # Morphisms hash by image tuple and compare graphs structurally, so repeated
    # lifts through the same cover reuse one verification.
    return check_cover(f).is_homotopy_cover


def check_n2_bijection(f: Morphism) -> bool:
    """Direct extended-neighbourhood test: N2(v~) -> N2(f(v~)) is a bijection
    and two walks share an endpoint exactly when their images do."""
    dom, cod = f.dom, f.cod
    im = f.images
    if violations(f) or set(im) != set(range(cod.order)):
        return False
    for i in range(dom.order):
        up = [(i, x, y) for x in dom.nbrs[i] for y in dom.nbrs[x]]
        down = {(im[i], a, b) for a in cod.nbrs[im[i]] for b in cod.nbrs[a]}
        mapped = [(im[a], im[b], im[c]) for a, b, c in up]
        if len(set(mapped)) != len(mapped) or set(mapped) != down:
            return False
        for p in range(len(up)):
            for q in range(p + 1, len(up)):
                if (up[p][2] == up[q][2]) != (mapped[p][2] == mapped[q][2]):
                    return False
    return True


def _require_cover(f: Morphism):
    table = _neighbor_table(f)
    if table is None or violations(f) or set(f.images) != set(range(f.cod.order)):
        raise CoverError("map is not a cover")
    return table


def lift_indices(f: Morphism, seq: Sequence[int], start: int, table=None) -> list[int]:
    table = table if table is not None else _require_cover(f)
    out = [start]
    for t in seq[1:]:
        nxt = table[out[-1]].get(t)
        if nxt is None:
            raise CoverError(f"cannot lift step to {f.cod.vertices[t]}")
        out.append(nxt)
    return out


def lift_walk(f: Morphism, walk: Walk, start) -> Walk:
    """The unique walk from ``start`` projecting onto ``walk``."""
    if walk.base != f.cod:
        raise CoverError("walk does not live in the codomain")
    table = _require_cover(f)
    s = f.dom.index(start)
    if f.images[s] != walk.indices[0]:
        raise CoverError(f"{start} is not in the fibre over {walk.start}")
    return Walk._from_indices(f.dom, lift_indices(f, walk.indices, s, table))


def lift_homotopy(
    f: Morphism,
    chain: Sequence[Morphism],
    start_lift: Morphism,
    choose: Callable[[Graph, int], int] | dict | None = None,
) -> list[Morphism]:
    """Lift a chain H_0, ..., H_n of pairwise length-1 homotopic maps K -> cod
    through the homotopy cover ``f`` starting from ``start_lift`` (a lift of H_0).

    For each vertex k a neighbour k' is chosen (least in vertex order unless
    ``choose`` says otherwise); the new image of k is the midpoint of the lift
    of (H_i(k') H_{i+1}(k) H_i(k')) from the current lift of k'.
    """
    if not chain:
        raise CoverError("empty homotopy chain")
    if not _is_homotopy_cover(f):
        raise CoverError("map is not a homotopy cover")
    K = chain[0].dom
    for h in chain:
        if h.dom != K or h.cod != f.cod:
            raise CoverError("chain maps must all go from the same K into the base of the cover")
        if violations(h):
            raise CoverError(f"chain entry {h} is not a graph morphism")
    for a, b in zip(chain, chain[1:]):
        if not length_one_homotopic(a, b):
            raise CoverError("consecutive chain entries are not one step apart")
    if start_lift.dom != K or start_lift.cod != f.dom:
        raise CoverError("start lift must map K into the cover")
    if f.compose(start_lift).images != chain[0].images:
        raise CoverError("start lift does not project onto the first map of the chain")
    table = _neighbor_table(f)
    if choose is None:
        picks = [K.nbrs[k][0] for k in range(K.order)]
    elif isinstance(choose, dict):
        picks = [K.index(choose[v]) if v in choose else K.nbrs[k][0] for k, v in enumerate(K.vertices)]
    else:
        picks = [choose(K, k) for k in range(K.order)]
    for k, kp in enumerate(picks):
        if kp not in K.adj[k]:
            raise CoverError(f"chosen vertex for {K.vertices[k]} is not a neighbour")
    out = [start_lift]
    cur = start_lift.images
    for phi, psi in zip(chain, chain[1:]):
        new = []
        for k in range(K.order):
            kp = picks[k]
            mid = table[cur[kp]].get(psi.images[k])
            if mid is None:
                raise CoverError("lifting step failed")
            new.append(mid)
        nxt = Morphism(K, f.dom, tuple(new))
        if violations(nxt) or not length_one_homotopic(out[-1], nxt):
            raise MorphismError("lifted step is not a one-step homotopy; the cover is not a homotopy cover")
        out.append(nxt)
        cur = nxt.images
    return out
