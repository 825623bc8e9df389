"""Deck transformation groups, subgroup enumeration, quotient covers and the
enumeration of connected homotopy covers."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count

from .covering import check_cover
from .graph import Graph, distances
from .morphism import Morphism
from .universal import CoverTooLarge, FoldedCover, build_folded_cover, build_quotient_cover
from .walks import Walk, _reduce


class DeckError(ValueError):
    pass


@dataclass
class DeckGroup:
    """Deck transformations of a stabilized cover, one per class over the basepoint.

    ``perms[g][i]`` is the image of class i under element g; element g sends the
    root to ``fibre[g]``. ``table[g][h]`` is the element g o h.
    """

    cover: FoldedCover
    fibre: list[int]
    perms: list[tuple[int, ...]]
    table: list[list[int]]

    @property
    def order(self) -> int:
        return len(self.fibre)

    identity = 0

    def compose(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inverse(self, g: int) -> int:
        return self.table[g].index(0)

    def element_order(self, g: int) -> int:
        x, k = g, 1
        while x != 0:
            x = self.table[g][x]
            k += 1
        return k

    def loop(self, g: int) -> Walk:
        """The closed walk at the basepoint representing element g."""
        return self.cover.rep_walk(self.fibre[g])


def deck_group(U: FoldedCover) -> DeckGroup:
    if not U.stabilized:
        raise DeckError(f"cover has not stabilized at depth {U.depth}")
    fibre = U.fibre()
    if fibre[0] != 0:
        raise DeckError("root class missing from the basepoint fibre")
    n = U.size
    proj = [U.proj(i) for i in range(n)]
    perms = []
    for gamma in fibre:
        perm = tuple(U.trace(U.reps[i], gamma) for i in range(n))
        if any(p is None for p in perm):
            raise DeckError("cover is incomplete along a representative")
        if sorted(perm) != list(range(n)):
            raise DeckError("translation by a fibre class is not a bijection")
        if any(proj[perm[i]] != proj[i] for i in range(n)):
            raise DeckError("translation does not commute with the projection")
        perms.append(perm)
    edges = set(U.graph.edge_indices())
    for i, j in edges:
        for perm in perms:
            if (min(perm[i], perm[j]), max(perm[i], perm[j])) not in edges:
                raise DeckError("translation is not a graph automorphism")
    pos = {c: g for g, c in enumerate(fibre)}
    table = [[pos[perms[g][fibre[h]]] for h in range(len(fibre))] for g in range(len(fibre))]
    for g, perm in enumerate(perms):
        if g and any(perm[i] == i for i in range(n)):
            raise DeckError("deck action is not free")
        for h in range(len(fibre)):
            composed = tuple(perm[perms[h][i]] for i in range(n))
            if composed != perms[table[g][h]]:
                raise DeckError("composition of translations disagrees with concatenation")
    return DeckGroup(U, fibre, perms, table)


# -- group identification --------------------------------------------------------
def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return sorted(set(out))


def _abelian_invariants(orders: list[int]) -> list[int]:
    n = len(orders)
    factors: list[list[int]] = []
    for p in _prime_factors(n):
        # |G[p^k]| = p^(sum min(k, e_i)); differences count exponents >= k.
        sizes = [1]
        k = 1
        while sizes[-1] < p ** _valuation(n, p):
            sizes.append(sum(1 for o in orders if (p ** k) % o == 0))
            k += 1
        counts = [_log(sizes[i], p) - _log(sizes[i - 1], p) for i in range(1, len(sizes))]
        exps = []
        for k, c in enumerate(counts, 1):
            nxt = counts[k] if k < len(counts) else 0
            exps += [k] * (c - nxt)
        factors.append(sorted((p ** e for e in exps), reverse=True))
    width = max((len(f) for f in factors), default=0)
    inv = []
    for i in range(width):
        m = 1
        for f in factors:
            if i < len(f):
                m *= f[i]
        inv.append(m)
    return sorted(inv)


def _valuation(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _log(x: int, p: int) -> int:
    e = 0
    while x > 1:
        x //= p
        e += 1
    return e


@dataclass
class GroupDescription:
    order: int
    abelian: bool
    element_orders: list[int]
    name: str | None
    table: list[list[int]] = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {"order": self.order, "abelian": self.abelian, "element_orders": self.element_orders, "name": self.name}
        if self.name is None:
            out["table"] = self.table
        return out


def describe_table(table: list[list[int]], bound: int = 24) -> GroupDescription:
    n = len(table)
    if n > bound:
        raise DeckError(f"group order {n} exceeds the identification bound {bound}")
    abelian = all(table[g][h] == table[h][g] for g in range(n) for h in range(n))
    orders = []
    for g in range(n):
        x, k = g, 1
        while x != 0:
            x = table[g][x]
            k += 1
        orders.append(k)
    name = None
    if n == 1:
        name = "e"
    elif abelian:
        inv = _abelian_invariants(orders)
        name = " x ".join(f"Z/{m}" for m in inv)
    return GroupDescription(n, abelian, orders, name, [row[:] for row in table])


def identify_group(D: DeckGroup, bound: int = 24) -> GroupDescription:
    return describe_table(D.table, bound)


# -- subgroups -----------------------------------------------------------------
@dataclass(frozen=True)
class Subgroup:
    elements: frozenset

    @property
    def order(self) -> int:
        return len(self.elements)


def closure(table: list[list[int]], gens) -> frozenset:
    elems = {0}
    frontier = list(gens)
    while frontier:
        g = frontier.pop()
        if g in elems:
            continue
        elems.add(g)
        for h in list(elems):
            for x in (table[g][h], table[h][g]):
                if x not in elems:
                    frontier.append(x)
    return frozenset(elems)


def subgroups_of_table(table: list[list[int]], bound: int = 24) -> list[Subgroup]:
    n = len(table)
    if n > bound:
        raise DeckError(f"group order {n} exceeds the enumeration bound {bound}")
    found = {frozenset({0})}
    todo = [frozenset({0})]
    while todo:
        H = todo.pop()
        for g in range(n):
            if g not in H:
                K = closure(table, set(H) | {g})
                if K not in found:
                    found.add(K)
                    todo.append(K)
    return [Subgroup(s) for s in sorted(found, key=lambda s: (len(s), sorted(s)))]


def subgroups(D: DeckGroup, bound: int = 24) -> list[Subgroup]:
    return subgroups_of_table(D.table, bound)


def is_subgroup(table: list[list[int]], elems) -> bool:
    elems = set(elems)
    return 0 in elems and all(table[g][h] in elems for g in elems for h in elems)


# -- quotients -----------------------------------------------------------------
@dataclass(frozen=True)
class ShiftSubgroup:
    """The subgroup generated by the power-th power of a shift generator loop."""

    generator: Walk
    power: int

    def relator(self) -> Walk:
        seq = self.generator.indices
        body = seq
        for _ in range(self.power - 1):
            body = body + seq[1:]
        return Walk._from_indices(self.generator.base, body)


def _named(graph: Graph, projection: Morphism, name: str) -> tuple[Graph, Morphism]:
    """Rename vertices to <base vertex>_<k>, k counting within each fibre."""
    counters: dict[int, count] = {}
    new = {}
    for v, t in zip(graph.vertices, projection.images):
        k = next(counters.setdefault(t, count()))
        new[v] = f"{projection.cod.vertices[t]}_{k}"
    G2 = Graph([new[v] for v in graph.vertices], [(new[a], new[b]) for a, b in graph.edges()], name, validate=False)
    G2.validate()
    return G2, Morphism(G2, projection.cod, projection.images)


def _verified(graph: Graph, r: Morphism, index: int) -> tuple[Graph, Morphism]:
    report = check_cover(r)
    if not report.is_homotopy_cover:
        raise DeckError("quotient failed homotopy-cover verification")
    for v in r.cod.vertices:
        if len(r.fibre(v)) != index:
            raise DeckError(f"fibre over {v} has size {len(r.fibre(v))}, expected index {index}")
    return graph, r


def quotient(U: FoldedCover, S, D: DeckGroup | None = None, margin: int = 4) -> tuple[Graph, Morphism]:
    """Orbit graph U/S with its projection to the base, verified as a homotopy cover.

    ``S`` is a :class:`Subgroup` of the deck group of a stabilized U, or a
    :class:`ShiftSubgroup` for a truncated U that exhibits a shift generator.
    """
    G = U.base
    if isinstance(S, ShiftSubgroup):
        rel = S.relator()
        diam = max(distances(G, U.basepoint).values())
        depth = len(rel) + 2 * diam + margin
        Q = build_quotient_cover(G, U.basepoint, [rel], depth)
        if not Q.stabilized:
            raise DeckError(f"cyclic quotient did not close up by depth {depth}")
        graph, r = _named(Q.graph, Q.projection, f"{G.name}/<g^{S.power}>")
        return _verified(graph, r, S.power)
    if not U.stabilized:
        raise DeckError("finite subgroups can only be quotiented out of a stabilized cover")
    D = D or deck_group(U)
    if not is_subgroup(D.table, S.elements):
        raise DeckError("element set is not closed under composition")
    comp = [-1] * U.size
    reps = []
    for i in range(U.size):
        if comp[i] < 0:
            k = len(reps)
            reps.append(i)
            for g in S.elements:
                comp[D.perms[g][i]] = k
    ids = [f"q{k}" for k in range(len(reps))]
    edges = {(min(comp[i], comp[j]), max(comp[i], comp[j])) for i, j in U.graph.edge_indices()}
    graph = Graph(ids, [(ids[a], ids[b]) for a, b in sorted(edges)], f"{G.name}/S{S.order}", validate=False)
    r = Morphism(graph, G, tuple(U.proj(i) for i in reps))
    graph, r = _named(graph, r, graph.name)
    return _verified(graph, r, D.order // S.order)


# -- shift detection and enumeration ----------------------------------------------
@dataclass
class ShiftEvidence:
    generator: Walk
    powers: dict[int, int]
    fibre_sizes: dict[int, int]

    def as_dict(self) -> dict:
        return {
            "generator": str(self.generator),
            "powers": {str(k): v for k, v in sorted(self.powers.items())},
            "fibre_sizes": {str(k): v for k, v in sorted(self.fibre_sizes.items())},
        }


def _powers(U: FoldedCover, loop: tuple[int, ...]) -> dict[int, int] | None:
    out = {0: 0}
    for sign, seq in ((1, loop), (-1, loop[::-1])):
        cur, k = 0, 0
        while True:
            nxt = U.trace(seq, cur)
            if nxt is None:
                break
            if nxt in out.values():
                return None
            k += 1
            out[sign * k] = nxt
            cur = nxt
    return out


def detect_shift(U: FoldedCover) -> ShiftEvidence | None:
    """Look for a fibre class whose powers sweep out the basepoint fibre of a
    truncated cover and whose fibre grows linearly with the depth."""
    if U.stabilized:
        return None
    fibre = U.fibre()
    dist = distances(U.graph, U.graph.vertices[0]) if U.size else {}
    depth_of = [dist.get(U.graph.vertices[i], U.depth) for i in range(U.size)]
    cands = sorted((i for i in fibre if i != 0), key=lambda i: (len(U.reps[i]), U.reps[i]))
    # Linear growth: a few times the current size is plenty for two more periods.
    cap = 8 * U.size + 1000
    for gamma in cands:
        loop = U.reps[gamma]
        if _reduce(loop) != loop:
            continue
        powers = _powers(U, loop)
        if powers is None or len(powers) < 3:
            continue
        L = len(loop) - 1
        needed = {i for i in fibre if depth_of[i] <= U.depth - L}
        # The generator itself must be in range, otherwise the sweep test is vacuous.
        if gamma not in needed or not needed <= set(powers.values()):
            continue
        sizes = {}
        try:
            for d in (U.depth, U.depth + L, U.depth + 2 * L):
                V = U if d == U.depth else build_folded_cover(U.base, U.basepoint, d, max_classes=cap)
                if V.stabilized:
                    break
                sizes[d] = len(V.fibre())
        except CoverTooLarge:
            continue
        if len(sizes) < 3:
            continue
        s = [sizes[d] for d in sorted(sizes)]
        if not (s[0] < s[1] < s[2] and s[2] - s[1] == s[1] - s[0]):
            continue
        return ShiftEvidence(U.rep_walk(gamma), powers, sizes)
    return None


@dataclass
class CoverEnumeration:
    status: str  # "stabilized" | "shift" | "not-stabilized"
    depth: int
    covers: list[tuple[Graph, Morphism, int]] = field(default_factory=list)
    group: GroupDescription | None = None
    evidence: ShiftEvidence | None = None
    subgroup_orders: list[int] = field(default_factory=list)

    def __iter__(self):
        return iter(self.covers)

    def __len__(self):
        return len(self.covers)


def enumerate_covers(G: Graph, v, depth: int, max_index: int = 4) -> CoverEnumeration:
    U = build_folded_cover(G, v, depth)
    if U.stabilized:
        D = deck_group(U)
        out = CoverEnumeration("stabilized", depth, group=identify_group(D))
        for S in sorted(subgroups(D), key=lambda s: (-s.order, sorted(s.elements))):
            index = D.order // S.order
            if index > max_index:
                continue
            graph, r = quotient(U, S, D)
            out.covers.append((graph, r, index))
            out.subgroup_orders.append(S.order)
        return out
    ev = detect_shift(U)
    if ev is None:
        return CoverEnumeration("not-stabilized", depth)
    out = CoverEnumeration("shift", depth, evidence=ev)
    for n in range(1, max_index + 1):
        graph, r = quotient(U, ShiftSubgroup(ev.generator, n))
        out.covers.append((graph, r, n))
    return out


def fundamental_group(G: Graph, v, depth: int, bound: int = 24) -> dict:
    """Summary used by the CLI: the identified group, or the shift evidence."""
    U = build_folded_cover(G, v, depth)
    if U.stabilized:
        desc = identify_group(deck_group(U), bound)
        return {"stabilized": True, "depth": depth, "cover_order": U.size, **desc.as_dict()}
    ev = detect_shift(U)
    out = {"stabilized": False, "depth": depth, "cover_order": U.size, "name": None,
           "fibre_size": len(U.fibre()), "shift": ev.as_dict() if ev else None}
    return out
