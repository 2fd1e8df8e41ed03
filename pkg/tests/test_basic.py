from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from purepairs.extract import basic
from purepairs.generators import (c5_join_power, complete, complete_multipartite, cycle, edgeless, join, path,
                                  random_h_free)
from purepairs.graph import Graph, as_list, size, to_mask
from purepairs.harness.validate import validate
from purepairs.oracles import CARDINALITY, CHROMATIC, chi, omega
from purepairs.outcomes import ExtractionError, NotHFree

from conftest import graphs


def p5_free(n, seed, p=0.5):
    return random_h_free(n, p, path(5), seed)


# --- Gyarfas ---------------------------------------------------------------------

@pytest.mark.parametrize("G,nchi", [(cycle(5), 1), (complete(4), 3), (join(cycle(5), cycle(5)), 4)])
def test_gyarfas_vertex_examples(G, nchi):
    out = basic.gyarfas_vertex(G, 5)
    v = out.data["vertex"]
    assert chi(G, G.adj[v]) == nchi
    assert 3 * nchi >= chi(G)


def test_gyarfas_vertex_rejects_p5():
    with pytest.raises(NotHFree):
        basic.gyarfas_vertex(path(6), 5)
    # without the check the scan still succeeds here: the apex sees everything
    G = join(path(5), complete(1))
    assert basic.gyarfas_vertex(G, 5, check_free=False).kind == "vertex"


def test_gyarfas_vertex_needs_chi_two():
    with pytest.raises(ExtractionError):
        basic.gyarfas_vertex(edgeless(3), 5)


def test_gyarfas_colour_examples():
    assert basic.gyarfas_colour_bound(cycle(5), 5).data["count"] <= 3
    assert basic.gyarfas_colour_bound(edgeless(6), 5).data["count"] == 1
    out = basic.gyarfas_colour_bound(join(cycle(5), cycle(5)), 5)
    assert out.data["count"] == 6 and out.data["count"] <= 27


# --- degeneracy core, controlled -------------------------------------------------

def test_min_degree_core_examples():
    C5 = cycle(5)
    assert basic.min_degree_core(C5, 2)["F"] == C5.vertices
    star = Graph.from_edges(6, [(0, i) for i in range(1, 6)])
    assert basic.min_degree_core(star, 1)["F"] == star.vertices
    pend = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5)])
    out = basic.min_degree_core(pend, 2)
    assert out["F"] == to_mask(range(5)) and chi(pend, out["F"]) == chi(pend)
    with pytest.raises(ExtractionError):
        basic.min_degree_core(C5, 3)


def test_controlled_examples():
    C5 = cycle(5)
    assert basic.controlled_subgraph(C5, 2)["J"] == C5.vertices
    K4 = complete(4)
    assert basic.controlled_subgraph(K4, 4)["J"] == K4.vertices
    assert 3 < Fraction(15, 16) * 4
    with pytest.raises(ExtractionError):
        basic.controlled_subgraph(Graph(0, []), 2)


def test_is_controlled():
    assert basic.is_controlled(cycle(5), cycle(5).vertices, 2) is None
    assert basic.is_controlled(cycle(5), to_mask([0, 2]), 2) == -1


# --- vivid blockades -------------------------------------------------------------

def test_vivid_clique_examples():
    G = complete_multipartite([2, 2, 2])
    out = basic.vivid_clique(G, [to_mask([0, 1]), to_mask([2, 3]), to_mask([4, 5])], Fraction(1, 3))
    assert out.kind == "clique" and G.is_clique(out["K"]) and size(out["K"]) == 3
    one = basic.vivid_clique(cycle(5), [to_mask([1, 2])], Fraction(1, 2))
    assert one.kind == "clique" and size(one["K"]) == 1
    bad = basic.vivid_clique(cycle(5), [1, 1 << 2], Fraction(1, 2))
    assert bad.kind == "not_vivid" and (bad.data["i"], bad.data["j"], bad.data["v"]) == (0, 1, 2)


def test_vivid_clique_rejects_overlap():
    with pytest.raises(ExtractionError):
        basic.vivid_clique(cycle(5), [3, 1], Fraction(1, 2))


# --- Erdos-Hajnal recursion ------------------------------------------------------

def test_eh_step_k2_examples():
    G = Graph.from_edges(4, [(0, 2)])
    out = basic.eh_step(G, complete(2), Fraction(1, 2), CARDINALITY, [to_mask([0, 1]), to_mask([2, 3])])
    assert out.kind == "induced_copy" and G.has_edge(out.data["phi"][0], out.data["phi"][1])
    E = Graph.from_edges(4, [])
    out = basic.eh_step(E, complete(2), Fraction(1, 2), CARDINALITY, [to_mask([0, 1]), to_mask([2, 3])])
    assert out.kind == "near_pure_pair" and out.data["direction"] == "sparse"


def test_eh_step_triangle_on_c5():
    anchors = [1, 1 << 1, 1 << 3]
    out = basic.eh_step(cycle(5), complete(3), Fraction(1, 2), CARDINALITY, anchors)
    assert out.kind == "near_pure_pair"
    params = {"H": "K3", "eps": "1/2", "mu": "card", "anchors": [as_list(a) for a in anchors]}
    assert validate("eh_step", cycle(5), params, out.to_json()) == []


def test_eh_step_rejects_bad_eps():
    with pytest.raises(ExtractionError):
        basic.eh_step(cycle(5), complete(2), Fraction(3, 4), CARDINALITY, [1, 2])


def test_near_pure_examples():
    out = basic.near_pure_pair(cycle(5), complete(3), Fraction(1, 2))
    assert out.data["trivial"] and size(out["A"]) == size(out["B"]) == 1
    G = c5_join_power(2)
    out = basic.near_pure_pair(G, complete(5), Fraction(1, 2), CHROMATIC)
    assert validate("near_pure_pair", G, {"H": "K5", "eps": "1/2", "mu": "chi"}, out.to_json()) == []
    R = p5_free(14, 11)
    out = basic.near_pure_pair(R, path(5), Fraction(1, 2))
    assert min(size(out["A"]), size(out["B"])) >= Fraction(14, 2 * 5 * 8)
    assert validate("near_pure_pair", R, {"H": "P5", "eps": "1/2", "mu": "card"}, out.to_json()) == []


def test_near_pure_rejects_h():
    with pytest.raises(NotHFree):
        basic.near_pure_pair(path(5), path(4), Fraction(1, 2))


def test_quasi_pure_examples():
    out = basic.quasi_pure(edgeless(5), complete(3), Fraction(1, 2))
    assert out.kind == "stable_set" and out["S"] == edgeless(5).vertices
    G = complete_multipartite([3, 3, 3])
    out = basic.quasi_pure(G, complete(5), Fraction(1, 3))
    assert out.kind == "stable_set" and as_list(out["S"]) == [0, 1, 2]
    assert validate("quasi_pure", G, {"H": "K5", "eps": "1/3"}, out.to_json()) == []
    out = basic.quasi_pure(cycle(5), complete(4), Fraction(1, 2), CHROMATIC)
    assert validate("quasi_pure", cycle(5), {"H": "K4", "eps": "1/2", "mu": "chi"}, out.to_json()) == []


def test_quasi_pure_eps_range():
    with pytest.raises(ExtractionError):
        basic.quasi_pure(complete(3), complete(4), Fraction(1, 2))


def test_quasi_pure_floor_exact():
    # 3/9 >= (1/3)^(10 log2 3) holds with a huge margin
    assert basic.quasi_pure_floor_holds(Fraction(3), Fraction(9), Fraction(1, 3), 5, 3) is True
    assert basic.quasi_pure_floor_holds(Fraction(1, 10 ** 9), Fraction(1), Fraction(1, 2), 1, 3) is False


# --- property tests --------------------------------------------------------------

seeds = st.integers(0, 10 ** 6)


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 12), seeds)
def test_gyarfas_properties(n, seed):
    G = p5_free(n, seed)
    if chi(G) >= 2:
        assert validate("gyarfas_vertex", G, {"k": 5}, basic.gyarfas_vertex(G, 5).to_json()) == []
    assert validate("gyarfas_colour", G, {"k": 5}, basic.gyarfas_colour_bound(G, 5).to_json()) == []


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=10), st.integers(1, 3))
def test_min_degree_core_property(G, p):
    if chi(G) > p:
        assert validate("min_degree_core", G, {"p": p}, basic.min_degree_core(G, p).to_json()) == []


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=10), st.integers(0, 2))
def test_controlled_property(G, extra):
    q = max(2, omega(G)) + extra
    assert validate("controlled_subgraph", G, {"q": q}, basic.controlled_subgraph(G, q).to_json()) == []


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=10), st.sampled_from(["card", "chi"]))
def test_near_pure_property_p4_free(G, mu):
    H = path(4)
    from purepairs.oracles import is_h_free
    if not is_h_free(G, H):
        return
    m = CARDINALITY if mu == "card" else CHROMATIC
    out = basic.near_pure_pair(G, H, Fraction(1, 2), m)
    assert validate("near_pure_pair", G, {"H": "P4", "eps": "1/2", "mu": mu}, out.to_json()) == []
