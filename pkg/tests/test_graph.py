import itertools

import pytest
from hypothesis import given

from homcover.graph import (
    Diamond, Graph, GraphError, diamonds, distances, is_bipartite, is_stiff,
    load_graph, n2_walks, neighborhood, save_graph, to_dot,
)
from homcover.families import complete, cycle, kneser, paper_g, wheel
from strategies import connected_graphs


def brute_diamonds(G):
    """Every 4-cycle w x y z with w != y, x != z, as a set of vertex-sequence orbits."""
    out = set()
    V = G.vertices
    for w, x, y, z in itertools.product(V, repeat=4):
        if w == y or x == z:
            continue
        if G.adjacent(w, x) and G.adjacent(x, y) and G.adjacent(y, z) and G.adjacent(z, w):
            c = (w, x, y, z)
            rots = [c[i:] + c[:i] for i in range(4)]
            rots += [tuple(reversed(r)) for r in rots]
            out.add(frozenset(rots))
    return out


def test_load_and_save_roundtrip_example():
    text = "graph T\n# comment\nv b\nv a\ne a b\ne b b\n"
    G = load_graph(text)
    assert G.name == "T"
    assert G.order == 2 and G.size == 2
    assert G.is_looped("b") and not G.is_looped("a")
    assert save_graph(G) == "graph T\nv a\nv b\ne a b\ne b b\n"


def test_edge_before_vertex_declaration_is_allowed():
    G = load_graph("e x y\nv x\nv y\n")
    assert G.adjacent("x", "y")


@pytest.mark.parametrize("text, msg", [
    ("v a\nv b\ne a c\n", "undeclared"),
    ("v a\nv a\n", "duplicate vertex"),
    ("v a\nv b\ne a b\ne b a\n", "duplicate edge"),
    ("v a\nv b\nv c\ne a b\n", "isolated"),
    ("v a\nv b\nv c\nv d\ne a b\ne c d\n", "connected"),
    ("v a\nx a\n", "unknown directive"),
    ("v a b\n", "expected"),
])
def test_load_errors(text, msg):
    with pytest.raises(GraphError, match=msg):
        load_graph(text)


def test_single_looped_vertex_is_valid():
    G = load_graph("v a\ne a a\n")
    assert G.loops() == ["a"]


def test_numeric_ids_sorted_numerically():
    text = save_graph(cycle(12))
    assert text.splitlines()[1:4] == ["v 0", "v 1", "v 2"]
    assert "v 10" in text.splitlines()[11]


def test_dot_export_has_loop_statement():
    G = load_graph("v a\nv b\ne a b\ne a a\n")
    dot = to_dot(G)
    assert dot.startswith("graph ")
    assert '"a" -- "a";' in dot and '"a" -- "b";' in dot


def test_neighborhood_and_n2():
    G = paper_g()
    assert neighborhood(G, "a") == frozenset({"b", "b'", "e"})
    walks = n2_walks(G, "a")
    assert ("a", "b", "c") in walks and ("a", "b'", "c") in walks
    assert len(walks) == sum(G.degree(x) for x in ("b", "b'", "e"))


def test_diamond_examples():
    assert diamonds(cycle(5)) == []
    assert len(diamonds(cycle(4))) == 1
    ds = diamonds(paper_g())
    assert len(ds) == 1
    assert set(ds[0]) == {"a", "b", "c", "b'"}
    # K4 has three 4-cycles.
    assert len(diamonds(complete(4))) == 3
    assert diamonds(kneser(5, 2)) == []


def test_diamond_with_loops_is_counted_once():
    # a~b, b~c, c~d, d~a plus a loop at a: still one diamond; (a a b ...) is excluded by x != z
    G = Graph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "a")])
    assert len(diamonds(G)) == 1
    # Fully looped K2: a a b b is a 4-cycle with w != y and x != z.
    assert diamonds(Graph("ab", [("a", "b"), ("a", "a"), ("b", "b")])) == [Diamond("a", "a", "b", "b")]
    # One loop only: no diamond, since y must differ from w and be adjacent to z.
    assert diamonds(Graph("ab", [("a", "b"), ("a", "a")])) == []


@given(connected_graphs(max_order=6))
def test_diamonds_match_brute_force(G):
    found = diamonds(G)
    assert len(found) == len(set(found))
    brute = brute_diamonds(G)
    assert len(found) == len(brute)
    for d in found:
        assert any(tuple(d) in orbit for orbit in brute)
        assert isinstance(d, Diamond)


@given(connected_graphs())
def test_save_load_roundtrip(G):
    H = load_graph(save_graph(G))
    assert set(H.vertices) == set(G.vertices)
    assert {frozenset(e) for e in H.edges()} == {frozenset(e) for e in G.edges()}
    assert save_graph(H) == save_graph(G)


@given(connected_graphs())
def test_distances_are_bfs_layers(G):
    d = distances(G, G.vertices[0])
    assert len(d) == G.order
    for a, b in G.edges():
        assert abs(d[a] - d[b]) <= 1


def test_stiff_and_bipartite():
    assert is_stiff(cycle(5)) and not is_stiff(cycle(4))
    assert not is_stiff(wheel(4))
    assert is_stiff(kneser(5, 2))
    assert is_bipartite(cycle(6)) and not is_bipartite(cycle(5))
    assert not is_bipartite(load_graph("v a\nv b\ne a b\ne a a\n"))


def test_relabel_and_induced():
    G = cycle(4)
    H = G.relabel({"0": "x"})
    assert "x" in H and H.adjacent("x", "1")
    P = G.induced(["0", "1", "2"])
    assert P.size == 2
