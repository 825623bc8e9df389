import pytest
from hypothesis import given, strategies as st

from homcover.families import (
    complete, complete_bipartite, cycle, cycle_double_cover, kneser, looped_path, paper_g, wheel,
)
from homcover.graph import Graph, is_stiff, load_graph
from homcover.isomorphism import are_isomorphic
from homcover.morphism import (
    Morphism, MorphismError, MorphismSpiderMove, apply_fold, apply_spider_move, find_fold,
    folds, homotopic, identity_morphism, length_one_homotopic, load_morphism, pleat,
    save_morphism, spider_moves_of, validate,
)
from strategies import connected_graphs

K2 = Graph("pq", [("p", "q")], "K2")
K3 = Graph("abc", [("a", "b"), ("b", "c"), ("a", "c")], "K3")


def test_validate_examples():
    assert validate(identity_morphism(cycle(5))) == (True, [])
    const = Morphism(cycle(5), K2, {str(i): "p" for i in range(5)})
    ok, bad = validate(const)
    assert not ok and len(bad) == 5
    assert validate(cycle_double_cover())[0]


def test_morphism_construction_errors():
    with pytest.raises(MorphismError, match="no image"):
        Morphism(K2, K3, {"p": "a"})
    with pytest.raises(MorphismError, match="not a vertex"):
        Morphism(K2, K3, {"p": "a", "q": "b", "r": "c"})
    with pytest.raises(MorphismError):
        Morphism(K2, K3, {"p": "a", "q": "z"})


def test_morphism_file_roundtrip(tmp_path):
    f = Morphism(K2, K3, {"p": "a", "q": "b"})
    text = save_morphism(f)
    assert text == "m p a\nm q b\n"
    assert load_morphism(text, K2, K3) == f
    (tmp_path / "k.graph").write_text("v p\nv q\ne p q\n")
    (tmp_path / "t.graph").write_text("v a\nv b\nv c\ne a b\ne b c\ne a c\n")
    g = load_morphism(save_morphism(f, "k.graph", "t.graph"), base_dir=tmp_path)
    assert g.as_dict() == f.as_dict()
    with pytest.raises(MorphismError, match="mapped twice"):
        load_morphism("m p a\nm p b\nm q a\n", K2, K3)
    with pytest.raises(MorphismError, match="'dom'"):
        load_morphism("m p a\n")


def test_homotopic_examples():
    f = Morphism(K2, K3, {"p": "a", "q": "b"})
    assert homotopic(f, f).verdict == "yes" and homotopic(f, f).moves == []
    g = Morphism(K2, K3, {"p": "a", "q": "c"})
    v = homotopic(f, g)
    assert v.verdict == "yes" and v.moves == [MorphismSpiderMove("q", "c")]
    C5 = cycle(5)
    rot = Morphism(C5, C5, {str(i): str((i + 1) % 5) for i in range(5)})
    assert homotopic(identity_morphism(C5), rot).verdict == "no"


def test_homotopic_inconclusive_and_mismatch():
    f = Morphism(K2, complete(5), {"p": "1", "q": "2"})
    g = Morphism(K2, complete(5), {"p": "3", "q": "4"})
    assert homotopic(f, g, max_states=2).verdict == "inconclusive"
    with pytest.raises(MorphismError):
        homotopic(f, identity_morphism(K2))


def test_looped_vertex_spider_requires_adjacent_images():
    # K = a single looped vertex; images must be looped and moves must follow edges.
    K = load_graph("v k\ne k k\n")
    I = looped_path(3)
    f = Morphism(K, I, {"k": "0"})
    assert [m.image for m in spider_moves_of(f)] == ["1"]
    v = homotopic(f, Morphism(K, I, {"k": "3"}))
    assert v.verdict == "yes" and len(v.moves) == 3


@given(connected_graphs(max_order=4), connected_graphs(max_order=4), st.data())
def test_spider_moves_preserve_validity_and_reverse(K, G, data):
    images = tuple(data.draw(st.integers(0, G.order - 1)) for _ in range(K.order))
    f = Morphism(K, G, images)
    if not validate(f)[0]:
        return
    for m in spider_moves_of(f):
        g = apply_spider_move(f, m)
        assert validate(g)[0]
        back = MorphismSpiderMove(m.vertex, f(m.vertex))
        assert apply_spider_move(g, back) == f


@given(connected_graphs(max_order=3), connected_graphs(max_order=4), st.data())
def test_homotopic_moves_replay(K, G, data):
    pick = lambda: tuple(data.draw(st.integers(0, G.order - 1)) for _ in range(K.order))
    f, g = Morphism(K, G, pick()), Morphism(K, G, pick())
    if not (validate(f)[0] and validate(g)[0]):
        return
    v = homotopic(f, g, max_states=20000)
    if v.verdict == "yes":
        h = f
        for m in v.moves:
            h = apply_spider_move(h, m)
        assert h == g
        assert homotopic(g, f, max_states=20000).verdict == "yes"
    elif v.verdict == "no":
        assert homotopic(g, f, max_states=20000).verdict == "no"


def test_length_one_homotopic():
    f = Morphism(K2, K3, {"p": "a", "q": "b"})
    assert length_one_homotopic(f, Morphism(K2, K3, {"p": "c", "q": "b"}))
    # Swapping the ends would need a ~ a in K3.
    assert not length_one_homotopic(f, Morphism(K2, K3, {"p": "b", "q": "a"}))


def test_fold_examples():
    W4 = wheel(4)
    x, y = find_fold(W4)
    assert (x, y) == ("1", "3")
    assert find_fold(cycle(5)) is None
    assert find_fold(kneser(6, 2)) is None
    assert ("0", "2") in folds(cycle(4))
    with pytest.raises(MorphismError):
        apply_fold(cycle(5), "0", "2")


def test_pleat_examples():
    S, r = pleat(wheel(4))
    assert are_isomorphic(S, cycle(3)) is not None
    S, r = pleat(complete_bipartite(3, 4))
    assert are_isomorphic(S, K2) is not None
    C5 = cycle(5)
    S, r = pleat(C5)
    assert S == C5 and r == identity_morphism(C5)


@given(connected_graphs(max_order=7))
def test_pleat_is_stiff_retraction(G):
    S, r = pleat(G)
    assert is_stiff(S) and find_fold(S) is None
    assert validate(r)[0]
    assert set(r.images) == set(range(S.order))
    # Retraction fixes the surviving vertices.
    assert all(r(v) == v for v in S.vertices)
