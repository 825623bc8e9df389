"""Walk algebra: concatenation, reversal, prunes, spider moves, and a bounded
breadth-first rewriting oracle for homotopy rel endpoints.

The oracle is deliberately brute force. It exists to cross-check the
lifting-based decider in :mod:`homcover.universal`, never the other way round.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graph import Graph, GraphError


class WalkError(ValueError):
    pass


class Walk:
    """A vertex sequence v0 ... vn in ``base`` with consecutive vertices adjacent."""

    __slots__ = ("base", "seq", "_idx")

    def __init__(self, base: Graph, seq: Iterable, check: bool = True):
        self.base = base
        self.seq = tuple(str(v) for v in seq)
        if not self.seq:
            raise WalkError("a walk needs at least one vertex")
        try:
            self._idx = tuple(base.index(v) for v in self.seq)
        except GraphError as exc:
            raise WalkError(str(exc)) from None
        if check:
            for i in range(len(self._idx) - 1):
                if self._idx[i + 1] not in base.adj[self._idx[i]]:
                    raise WalkError(f"{self.seq[i]} and {self.seq[i + 1]} are not adjacent in {base.name}")

    @classmethod
    def parse(cls, base: Graph, text: str) -> "Walk":
        return cls(base, text.split())

    @classmethod
    def _from_indices(cls, base: Graph, idx) -> "Walk":
        w = cls.__new__(cls)
        w.base = base
        w._idx = tuple(idx)
        w.seq = tuple(base.vertices[i] for i in w._idx)
        return w

    @property
    def indices(self) -> tuple[int, ...]:
        return self._idx

    def __len__(self) -> int:
        """Number of steps (edges), not vertices."""
        return len(self.seq) - 1

    @property
    def start(self) -> str:
        return self.seq[0]

    @property
    def end(self) -> str:
        return self.seq[-1]

    def __eq__(self, other):
        if not isinstance(other, Walk):
            return NotImplemented
        return self.base is other.base and self.seq == other.seq or (
            self.seq == other.seq and self.base == other.base
        )

    def __hash__(self):
        return hash(self.seq)

    def __repr__(self):
        return f"Walk({' '.join(self.seq)})"

    def __str__(self):
        return " ".join(self.seq)


@dataclass(frozen=True)
class WalkSpiderMove:
    position: int
    vertex: str


def _same_base(a: Walk, b: Walk) -> None:
    if a.base is not b.base and a.base != b.base:
        raise WalkError("walks live in different graphs")


def concat(a: Walk, b: Walk) -> Walk:
    _same_base(a, b)
    if a.end != b.start:
        raise WalkError(f"cannot concatenate: {a} ends at {a.end}, {b} starts at {b.start}")
    return Walk._from_indices(a.base, a.indices + b.indices[1:])


def reverse(a: Walk) -> Walk:
    return Walk._from_indices(a.base, a.indices[::-1])


def identity(G: Graph, v) -> Walk:
    return Walk(G, [v])


def prune_once(a: Walk, i: int) -> Walk:
    """Delete positions i and i+1 when seq[i] == seq[i+2]."""
    s = a.indices
    if not (0 <= i and i + 2 < len(s) and s[i] == s[i + 2]):
        raise WalkError(f"no prune at position {i} of {a}")
    return Walk._from_indices(a.base, s[:i] + s[i + 2:])


def _reduce(s: tuple[int, ...]) -> tuple[int, ...]:
    # Leftmost-first pruning to a fixpoint; a stack gives the same result in one pass.
    out: list[int] = []
    for v in s:
        out.append(v)
        while len(out) >= 3 and out[-1] == out[-3]:
            del out[-2:]
    return tuple(out)


def prune_normal_form(a: Walk) -> Walk:
    return Walk._from_indices(a.base, _reduce(a.indices))


def is_prune_free(a: Walk) -> bool:
    s = a.indices
    return all(s[i] != s[i + 2] for i in range(len(s) - 2))


def spider_moves_of(a: Walk) -> list[WalkSpiderMove]:
    G = a.base
    s = a.indices
    out = []
    for i in range(1, len(s) - 1):
        for c in G.nbrs[s[i - 1]]:
            if c != s[i] and c in G.adj[s[i + 1]]:
                out.append(WalkSpiderMove(i, G.vertices[c]))
    return out


def apply_spider_move(a: Walk, move: WalkSpiderMove) -> Walk:
    s = list(a.indices)
    i = move.position
    if not 0 < i < len(s) - 1:
        raise WalkError(f"spider moves only shift interior vertices (position {i})")
    c = a.base.index(move.vertex)
    G = a.base
    if c not in G.adj[s[i - 1]] or c not in G.adj[s[i + 1]]:
        raise WalkError(f"{move.vertex} is not adjacent to both neighbours at position {i}")
    s[i] = c
    return Walk._from_indices(G, s)


def _neighbours(G: Graph, s: tuple[int, ...], max_len: int):
    n = len(s)
    adj = G.adj
    for i in range(1, n - 1):
        for c in G.nbrs[s[i - 1]]:
            if c != s[i] and c in adj[s[i + 1]]:
                yield s[:i] + (c,) + s[i + 1:]
    for i in range(n - 2):
        if s[i] == s[i + 2]:
            yield s[:i] + s[i + 2:]
    if n + 1 <= max_len:
        for i in range(n):
            x = s[i]
            for w in G.nbrs[x]:
                yield s[:i + 1] + (w, x) + s[i + 1:]


def oracle_reachable(a: Walk, max_len: int, max_states: int = 10**6) -> tuple[set, bool]:
    """Every walk reachable from ``a`` by spider moves, prunes and unprunes
    without exceeding ``max_len`` steps. Returns (states, exhausted)."""
    G = a.base
    start = a.indices
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for t in _neighbours(G, s, max_len):
            if t not in seen:
                if len(seen) >= max_states:
                    return seen, False
                seen.add(t)
                queue.append(t)
    return seen, True


def oracle_homotopic_rel_endpoints(
    a: Walk, b: Walk, max_len: int | None = None, max_states: int = 10**6
) -> str:
    """'yes' if ``b`` is reached from ``a`` within the bounds, else 'no-within-bounds'.

    A negative answer is not a proof that the walks are inequivalent.
    """
    _same_base(a, b)
    if a.start != b.start or a.end != b.end:
        raise WalkError("walks must share both endpoints")
    if max_len is None:
        max_len = len(a) + len(b) + 4
    G = a.base
    targets = {b.indices, _reduce(b.indices)}
    start = a.indices
    if start in targets:
        return "yes"
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for t in _neighbours(G, s, max_len):
            if t in seen:
                continue
            if t in targets:
                return "yes"
            if len(seen) >= max_states:
                return "no-within-bounds"
            seen.add(t)
            queue.append(t)
    return "no-within-bounds"
