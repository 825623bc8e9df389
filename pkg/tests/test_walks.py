import pytest
from hypothesis import given, strategies as st

from homcover.families import complete, cycle, wheel
from homcover.graph import Graph
from homcover.walks import (
    Walk, WalkError, WalkSpiderMove, apply_spider_move, concat, identity, is_prune_free,
    oracle_homotopic_rel_endpoints, oracle_reachable, prune_normal_form, prune_once,
    reverse, spider_moves_of,
)
from strategies import graph_and_walk, walks

K3 = Graph("abc", [("a", "b"), ("b", "c"), ("a", "c")], "K3")
K2 = Graph("ab", [("a", "b")], "K2")


def W(G, text):
    return Walk.parse(G, text)


def naive_normal_form(seq):
    """Repeatedly delete at the leftmost prunable index, straight from the definition."""
    seq = list(seq)
    while True:
        for i in range(len(seq) - 2):
            if seq[i] == seq[i + 2]:
                del seq[i:i + 2]
                break
        else:
            return tuple(seq)


def test_concat_examples():
    assert concat(W(K3, "a b"), W(K3, "b c")).seq == ("a", "b", "c")
    assert concat(W(K3, "a"), W(K3, "a b")).seq == ("a", "b")
    assert concat(W(K3, "a b"), W(K3, "b a")).seq == ("a", "b", "a")
    assert len(concat(W(K3, "a b"), W(K3, "b c"))) == 2
    with pytest.raises(WalkError, match="concatenate"):
        concat(W(K3, "a b"), W(K3, "a c"))
    with pytest.raises(WalkError, match="different graphs"):
        concat(W(K3, "a b"), W(K2, "b a"))


def test_reverse_examples():
    assert reverse(W(K3, "a b c")).seq == ("c", "b", "a")
    assert reverse(W(K3, "a")).seq == ("a",)
    a = W(K3, "a b c")
    assert prune_normal_form(concat(a, reverse(a))).seq == ("a",)


def test_invalid_walks():
    with pytest.raises(WalkError, match="not adjacent"):
        W(cycle(5), "0 2")
    with pytest.raises(WalkError):
        W(K3, "a z")
    with pytest.raises(WalkError):
        Walk(K3, [])


def test_prune_once_examples():
    G = Graph(["v0", "v1", "v2"], [("v0", "v1"), ("v0", "v2")])
    assert prune_once(W(G, "v0 v1 v0 v2"), 0).seq == ("v0", "v2")
    assert prune_once(W(K3, "a b a"), 0).seq == ("a",)
    for i in range(3):
        with pytest.raises(WalkError):
            prune_once(W(K3, "a b c"), i)


def test_prune_normal_form_examples():
    assert prune_normal_form(W(K3, "a b a b c")).seq == ("a", "b", "c")
    assert prune_normal_form(W(K3, "a b c")).seq == ("a", "b", "c")
    assert prune_normal_form(W(K3, "a b a")).seq == ("a",)


def test_walk_spider_examples():
    Wh = wheel(5)
    moves = spider_moves_of(W(Wh, "c 1 2 3 4 c"))
    assert WalkSpiderMove(4, "2") in moves
    assert apply_spider_move(W(Wh, "c 1 2 3 4 c"), WalkSpiderMove(4, "2")).seq == tuple("c1232c")
    assert spider_moves_of(W(cycle(5), "0 1 2 3 4 0 1")) == []
    assert spider_moves_of(W(K2, "a b a")) == []
    with pytest.raises(WalkError):
        apply_spider_move(W(K3, "a b c"), WalkSpiderMove(0, "c"))


def test_oracle_examples():
    Wh = wheel(5)
    assert oracle_homotopic_rel_endpoints(W(Wh, "c 1 2 3 4 c"), W(Wh, "c 1 2 c")) == "yes"
    K4 = complete(4)
    assert oracle_homotopic_rel_endpoints(W(K4, "1 2 3 1"), W(K4, "1 3 2 1")) == "yes"
    C5 = cycle(5)
    assert oracle_homotopic_rel_endpoints(W(C5, "0 1 2 3 4 0"), W(C5, "0"), max_len=10) == "no-within-bounds"
    with pytest.raises(WalkError, match="endpoints"):
        oracle_homotopic_rel_endpoints(W(C5, "0 1"), W(C5, "0 4"))


def test_oracle_respects_state_bound():
    K4 = complete(4)
    states, done = oracle_reachable(W(K4, "1 2 3 1"), max_len=7, max_states=50)
    assert not done and len(states) == 50


@given(graph_and_walk(max_len=12))
def test_stack_reduction_matches_leftmost_definition(gw):
    _, a = gw
    assert prune_normal_form(a).indices == naive_normal_form(a.indices)


@given(graph_and_walk(max_len=12))
def test_prune_normal_form_properties(gw):
    _, a = gw
    p = prune_normal_form(a)
    assert is_prune_free(p)
    assert prune_normal_form(p) == p
    assert (p.start, p.end) == (a.start, a.end)
    assert (len(a) - len(p)) % 2 == 0


@given(graph_and_walk(max_len=6))
def test_concat_reverse_cancels(gw):
    G, a = gw
    assert prune_normal_form(concat(a, reverse(a))).seq == (a.start,)
    assert reverse(reverse(a)) == a
    assert oracle_homotopic_rel_endpoints(
        concat(a, reverse(a)), identity(G, a.start), max_len=max(2 * len(a), 1)) == "yes"


@given(st.data())
def test_concat_associative_with_identity(data):
    G, a = data.draw(graph_and_walk(max_len=5))
    b = data.draw(walks(G, start=a.end, max_len=5))
    c = data.draw(walks(G, start=b.end, max_len=5))
    assert concat(concat(a, b), c) == concat(a, concat(b, c))
    assert concat(identity(G, a.start), a) == a == concat(a, identity(G, a.end))


@given(graph_and_walk(max_len=8))
def test_spider_moves_reversible(gw):
    _, a = gw
    for m in spider_moves_of(a):
        b = apply_spider_move(a, m)
        assert (b.start, b.end, len(b)) == (a.start, a.end, len(a))
        back = WalkSpiderMove(m.position, a.seq[m.position])
        assert back in spider_moves_of(b)
        assert apply_spider_move(b, back) == a


@given(st.data())
def test_oracle_yes_is_symmetric(data):
    G, a = data.draw(graph_and_walk(max_order=5, max_len=4))
    b = data.draw(walks(G, start=a.start, max_len=4))
    if b.end != a.end:
        return
    kw = dict(max_len=len(a) + len(b) + 2, max_states=5000)
    fwd = oracle_homotopic_rel_endpoints(a, b, **kw)
    bwd = oracle_homotopic_rel_endpoints(b, a, **kw)
    # Both directions explore the same component; only the state cap can break symmetry.
    states, done = oracle_reachable(a, kw["max_len"], kw["max_states"])
    if done:
        assert fwd == bwd
