from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from purepairs.extract import broom as xb
from purepairs.generators import (broom, c5_join_power, complete, cycle, edgeless, gnp, path, random_h_free)
from purepairs.graph import Graph, as_list, size, to_mask
from purepairs.harness.validate import cover_samples, validate
from purepairs.oracles import chi, omega, ramsey
from purepairs.outcomes import ExtractionError, NotHFree


def check(lemma, G, params, out):
    assert validate(lemma, G, params, out.to_json()) == []


# --- t-broom decomposition and colouring ----------------------------------------------

def test_decompose_complete_graph():
    out = xb.tbroom_decompose(complete(4), 2)
    # a singleton P with S the rest; two singletons would give chi(S) + chi(P) = 2 < 4
    assert as_list(out["P"]) == [0] and as_list(out["S"]) == [1, 2, 3]
    check("tbroom_decompose", complete(4), {"t": 2}, out)


def test_decompose_c5():
    G = cycle(5)
    out = xb.tbroom_decompose(G, 2)
    S, P = out["S"], out["P"]
    assert 3 <= chi(G, S) + chi(G, P) and 2 * chi(G, P) >= 3
    check("tbroom_decompose", G, {"t": 2}, out)


def test_decompose_c5_join_power():
    G = c5_join_power(2)
    check("tbroom_decompose", G, {"t": 3}, xb.tbroom_decompose(G, 3))


def test_decompose_rejects_broom():
    with pytest.raises(NotHFree):
        xb.tbroom_decompose(broom(3, 2), 2)


@pytest.mark.parametrize("G,t,count", [(edgeless(4), 2, 1), (cycle(5), 2, 3), (complete(4), 1, 4)])
def test_colour_examples(G, t, count):
    out = xb.tbroom_colour(G, t)
    assert out.data["count"] == count
    w = max(1, omega(G))
    assert count <= 2 * w * w * ramsey(t, w)
    check("tbroom_colour", G, {"t": t}, out)


def test_colour_bound_values():
    assert 2 * 4 * ramsey(2, 2) == 16
    assert 2 * 16 * ramsey(1, 4) == 32


# --- star lemma ---------------------------------------------------------------------

def test_star_step_empty_b():
    G = edgeless(8)
    out = xb.star_step(G, G.vertices, 0, 1, 1, 2)
    assert out.kind == "pair_xy" and out["Y"] == 0


def test_star_step_anticomplete_stable():
    G = Graph.from_edges(10, [(8, 9)])
    A, B = to_mask(range(8)), to_mask([8, 9])
    out = xb.star_step(G, A, B, 1, 1, 2)
    assert out.kind == "anticomplete_stable" and size(out["P"]) == 1
    assert chi(G, out["Q"]) >= Fraction(1, 8)
    params = {"t": 1, "w": 2, "q": 1, "A": as_list(A), "B": as_list(B)}
    check("star_step", G, params, out)


def test_star_step_size_boundary():
    G = edgeless(9)
    with pytest.raises(ExtractionError):
        xb.star_step(G, to_mask(range(7)), to_mask([8]), 1, 1, 2)


# --- covering blockades ----------------------------------------------------------------

def test_covering_c5():
    G = cycle(5)
    out = xb.covering_blockade(G, 1)
    assert out.kind in ("anticomplete_pair", "covering_blockade")
    check("covering_blockade", G, {"k": 1}, out)
    full = xb.covering_blockade(G, 1, eager=False)
    check("covering_blockade", G, {"k": 1}, full)


def test_covering_k4_minus_edge():
    G = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    out = xb.covering_blockade(G, 1)
    assert out.kind == "anticomplete_pair"
    assert {lo for lo in (as_list(out["A"]) + as_list(out["B"]))} == {2, 3}


def test_covering_rejects_complete():
    with pytest.raises(ExtractionError):
        xb.covering_blockade(complete(5), 1)


def test_covering_blockade_found_non_eager():
    G = gnp(10, 0.5, 4)
    out = xb.covering_blockade(G, 1, eager=False)
    assert out.kind == "covering_blockade"
    check("covering_blockade", G, {"k": 1}, out)


def test_cover_samples_respect_floor():
    G = gnp(10, 0.5, 1)
    D, E = to_mask(range(6)), to_mask(range(6, 10))
    for X, Y in cover_samples(G, D, E, 3, 30, seed=1):
        assert X & ~D == 0 and Y & ~E == 0 and 27 * chi(G, Y) >= chi(G, E)


# --- broom or anticomplete -----------------------------------------------------------

def test_broom_anti_examples():
    out = xb.broom_or_anticomplete(cycle(5), 3, 2)
    assert out.kind == "anticomplete_pair" and out.degenerate
    assert not cycle(5).has_edge(as_list(out["A"])[0], as_list(out["B"])[0])
    G = c5_join_power(2)
    for eager in (True, False):
        check("broom_anti", G, {"k": 3, "t": 1}, xb.broom_or_anticomplete(G, 3, 1, eager=eager))
    with pytest.raises(ExtractionError):
        xb.broom_or_anticomplete(complete(6), 3, 2)


def test_broom_exponent():
    assert xb.broom_exponent(3, 2) == 6 * 3 + 2 * 4 + 9


# --- properties ----------------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.integers(4, 11), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_tbroom_properties(n, t, seed):
    G = random_h_free(n, 0.5, broom(3, t), seed)
    check("tbroom_colour", G, {"t": t}, xb.tbroom_colour(G, t))
    if G.edge_count():
        check("tbroom_decompose", G, {"t": t}, xb.tbroom_decompose(G, t))


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 11), st.integers(0, 10 ** 6), st.booleans())
def test_covering_and_broom_properties(n, seed, eager):
    G = gnp(n, 0.5, seed)
    if G.lowest_non_edge() is None or G.lowest_edge() is None:
        return
    check("covering_blockade", G, {"k": 1}, xb.covering_blockade(G, 1, eager=eager))
    check("broom_anti", G, {"k": 3, "t": 1}, xb.broom_or_anticomplete(G, 3, 1, eager=eager))
