"""Hypothesis strategies shared by the property tests."""
from hypothesis import strategies as st

from homcover.graph import Graph
from homcover.morphism import Morphism
from homcover.walks import Walk


@st.composite
def connected_graphs(draw, min_order=2, max_order=7, loops=True):
    n = draw(st.integers(min_order, max_order))
    verts = [f"v{i}" for i in range(n)]
    edges = set()
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        edges.add((j, i))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    for a, b in extra:
        if a != b or loops:
            edges.add((min(a, b), max(a, b)))
    return Graph(verts, [(verts[a], verts[b]) for a, b in sorted(edges)], "R")


@st.composite
def walks(draw, G, start=None, max_len=8):
    v = G.index(start) if start is not None else draw(st.integers(0, G.order - 1))
    seq = [v]
    for _ in range(draw(st.integers(0, max_len))):
        seq.append(draw(st.sampled_from(G.nbrs[seq[-1]])))
    return Walk._from_indices(G, seq)


@st.composite
def graph_and_walk(draw, max_len=8, **kw):
    G = draw(connected_graphs(**kw))
    return G, draw(walks(G, max_len=max_len))


@st.composite
def permutation_lifts(draw, max_order=5, max_sheets=3):
    """A random k-sheeted lift of a random graph, by permutation voltages.

    Each edge {a,b} (a<b) gets a permutation p; sheet s of a joins sheet p(s)
    of b. Loops get an involution so the lift stays undirected. The result
    is a cover whenever the total graph is connected.
    """
    G = draw(connected_graphs(min_order=2, max_order=max_order))
    k = draw(st.integers(1, max_sheets))
    edges = set()
    for a, b in G.edge_indices():
        if a == b:
            # Loops lift along an involution of the sheets; a fixed sheet keeps a loop.
            perm = draw(st.permutations(range(k)))
            inv = list(range(k))
            free = list(perm)
            while len(free) >= 2:
                s, t = free.pop(), free.pop()
                if draw(st.booleans()):
                    inv[s], inv[t] = t, s
            for s in range(k):
                edges.add(tuple(sorted(((a, s), (a, inv[s])))))
        else:
            perm = draw(st.permutations(range(k)))
            for s in range(k):
                edges.add(tuple(sorted(((a, s), (b, perm[s])))))
    verts = [(i, s) for i in range(G.order) for s in range(k)]
    name = lambda t: f"{G.vertices[t[0]]}_{t[1]}"
    from homcover.graph import GraphError
    try:
        H = Graph([name(t) for t in verts], [(name(x), name(y)) for x, y in sorted(edges)], "L")
    except GraphError:
        return None
    return Morphism(H, G, tuple(t[0] for t in verts))
