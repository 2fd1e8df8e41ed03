import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings

from purepairs.generators import (broom, c5_join_power, complete, complete_multipartite, cycle, edgeless, join,
                                  path, petersen)
from purepairs.graph import Graph, as_list, bits, size, to_mask
from purepairs.oracles import (CARDINALITY, CHROMATIC, CapExceeded, Submeasure, alpha, chi, chi_table,
                               chromatic_number, clique_number, degeneracy, find_induced_copy, is_h_free,
                               isomorphic, iter_induced_copies, omega, ramsey, ramsey_fallback,
                               stability_number, submeasure_axiom_check, tabulated_ramsey, verify_ramsey)

from conftest import graph_and_subset, graphs, naive_chi, naive_clique, naive_contains


@pytest.mark.parametrize("G,value", [(complete(4), 4), (cycle(5), 3), (petersen(), 3)])
def test_chromatic_number_examples(G, value):
    k, col = chromatic_number(G, certify=True)
    assert k == value == naive_chi(G.n, G.edges())
    assert col.is_proper(G) and col.count == k


def test_chromatic_number_cap():
    with pytest.raises(CapExceeded):
        chromatic_number(Graph(30, [0] * 30), cap=20)


@pytest.mark.parametrize("G,value", [(cycle(5), 2), (complete(4), 4), (join(cycle(5), cycle(5)), 4)])
def test_clique_number_examples(G, value):
    w, K = clique_number(G)
    assert w == value and size(K) == w and G.is_clique(K)


@pytest.mark.parametrize("G,value", [(cycle(5), 2), (complete(4), 1), (edgeless(7), 7)])
def test_stability_number_examples(G, value):
    a, S = stability_number(G)
    assert a == value and size(S) == a and G.is_stable(S)


@pytest.mark.parametrize("G,value", [(path(6), 1), (broom(3, 4), 1), (cycle(5), 2), (complete(4), 3)])
def test_degeneracy_examples(G, value):
    d, order = degeneracy(G)
    assert d == value and sorted(order) == list(range(G.n))
    pos = {v: i for i, v in enumerate(order)}
    assert all(sum(pos[u] > pos[v] for u in bits(G.adj[v])) <= d for v in range(G.n))


def test_find_induced_copy_examples():
    assert find_induced_copy(path(5), cycle(5)) is None
    C6 = cycle(6)
    copies = list(iter_induced_copies(path(5), C6))
    # each of the 6 copies is found once per direction of the path
    images = {tuple(phi[i] for i in range(5)) for phi in copies}
    assert len({min(p, p[::-1]) for p in images}) == 6
    phi = find_induced_copy(complete(3), complete(3))
    assert sorted(phi.values()) == [0, 1, 2]


def test_find_induced_copy_anchors():
    G = cycle(6)
    anchors = [to_mask([0]), to_mask([1]), to_mask([2]), to_mask([3, 5]), to_mask([4])]
    assert find_induced_copy(path(5), G, anchors) == {0: 0, 1: 1, 2: 2, 3: 3, 4: 4}
    # the third vertex must then be adjacent to both 1 and the image of the fourth
    bad = [to_mask([0]), to_mask([1]), to_mask([2, 3]), to_mask([4]), to_mask([5])]
    assert find_induced_copy(path(5), G, bad) is None
    with pytest.raises(Exception):
        find_induced_copy(path(3), G, [to_mask([0, 1]), to_mask([1]), to_mask([2])])


def test_is_h_free_examples():
    assert is_h_free(cycle(5), path(5))
    assert is_h_free(complete_multipartite([3, 3]), path(4))
    assert not is_h_free(path(5), path(5))


def test_ramsey_examples():
    assert all(ramsey(2, w) == w for w in range(1, 9))
    assert ramsey(3, 3) == 6
    for t in range(1, 6):
        for w in range(1, 7):
            assert ramsey(t, w) <= w ** t or (t, w) in {(1, 1)}
            assert ramsey_fallback(t, w) >= ramsey(t, w)


def test_ramsey_table_verified_exhaustively():
    small = {k: v for k, v in tabulated_ramsey().items() if v <= 10}
    assert small
    for (t, w), v in small.items():
        assert verify_ramsey(t, w, v)
    assert not verify_ramsey(3, 3, 5)
    assert not verify_ramsey(3, 3, 7)


def test_c5_witnesses_r33():
    C5 = cycle(5)
    assert omega(C5) < 3 and alpha(C5) < 3


def test_submeasure_axioms():
    assert submeasure_axiom_check(CHROMATIC, cycle(5), 200).ok
    assert submeasure_axiom_check(CARDINALITY, petersen(), 200).ok
    broken = Submeasure("neg", lambda G, S: -size(S))
    rep = submeasure_axiom_check(broken, cycle(5), 50)
    assert not rep.ok
    assert any(v["axiom"] == "singleton" for v in rep.violations)


def test_chi_table_matches_branch_and_bound():
    for G in (petersen(), c5_join_power(2), join(cycle(5), path(4))):
        table = chi_table(G)
        for S in range(0, 1 << G.n, 37):
            assert table[S] == chromatic_number(G, S)[0]


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=9))
def test_chi_against_naive(G):
    assert chi(G) == naive_chi(G.n, G.edges())
    k, col = chromatic_number(G)
    assert k == chi(G) and col.is_proper(G)


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=10))
def test_clique_against_networkx(G):
    nxg = nx.Graph()
    nxg.add_nodes_from(range(G.n))
    nxg.add_edges_from(G.edges())
    ref = max((len(c) for c in nx.find_cliques(nxg)), default=0)
    assert omega(G) == ref == naive_clique(G.n, G.edges())
    assert alpha(G) == omega(G.complement())


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=11))
def test_oracle_consistency(G):
    if G.n == 0:
        return
    c = chi(G)
    assert c >= omega(G)
    assert c * alpha(G) >= G.n
    assert c <= degeneracy(G)[0] + 1


@settings(max_examples=120, deadline=None)
@given(graphs(max_n=9))
def test_induced_copy_against_naive(G):
    for H in (path(4), path(5), broom(3, 2), complete(3), cycle(4)):
        phi = find_induced_copy(H, G)
        assert (phi is not None) == naive_contains(G, H)
        if phi is not None:
            assert len(set(phi.values())) == H.n
            for i, j in itertools.combinations(range(H.n), 2):
                assert G.has_edge(phi[i], phi[j]) == H.has_edge(i, j)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7), graphs(max_n=7))
def test_isomorphic_against_networkx(G1, G2):
    def nxg(G):
        g = nx.Graph()
        g.add_nodes_from(range(G.n))
        g.add_edges_from(G.edges())
        return g
    assert isomorphic(G1, G2) == nx.is_isomorphic(nxg(G1), nxg(G2))


@settings(max_examples=80, deadline=None)
@given(graph_and_subset(max_n=10))
def test_chi_of_subsets_against_naive(gs):
    G, S = gs
    H, _ = G.induced(S)
    assert chi(G, S) == naive_chi(H.n, H.edges())
