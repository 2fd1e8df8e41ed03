"""Shared helpers for the extractors: exact thresholds and pair maximisation."""

from __future__ import annotations

from fractions import Fraction

from ..graph import Graph, VertexSet, bits, lowest, size
from ..oracles import chi
from ..outcomes import ExtractionError


def F(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def wpow(w: int | Fraction, e: int) -> Fraction:
    """Exact ``w**e`` for integer ``e`` of either sign."""
    return Fraction(w) ** e


def floor_log2_power(w: int, q: int) -> int:
    """``floor(q * log2(w))`` computed exactly from ``w**q``."""
    return (w ** q).bit_length() - 1


def compare_pow_log(r: Fraction, eps: Fraction, c: int, w: int, max_q: int = 64) -> bool | None:
    """Decide ``r >= eps ** (c * log2 w)`` for ``0 < eps < 1`` without floating point.

    Returns ``None`` when rational bounds on ``log2 w`` with denominators up to
    ``max_q`` do not separate the two sides.
    """
    if r <= 0:
        return False
    if w <= 1:
        return r >= 1
    if w & (w - 1) == 0:
        return r >= eps ** (c * (w.bit_length() - 1))
    q = 1
    while q <= max_q:
        p = floor_log2_power(w, q)
        # log2 w in (p/q, (p+1)/q); eps < 1 so the threshold is decreasing in the exponent
        if r ** q >= eps ** (c * p):
            return True
        if r ** q < eps ** (c * (p + 1)):
            return False
        q *= 2
    return None


def lowest_non_edge(G: Graph, S: VertexSet) -> tuple[int, int] | None:
    return G.lowest_non_edge(S)


def max_chi_component(G: Graph, S: VertexSet) -> VertexSet:
    """The first (lowest-vertex) component of ``G[S]`` with the largest chromatic number."""
    comps = G.components(S)
    if not comps:
        raise ExtractionError("empty set has no component")
    best = max(chi(G, c) for c in comps)
    return next(c for c in comps if chi(G, c) == best)


def closed_nbhd(G: Graph, S: VertexSet) -> VertexSet:
    return S | G.neighbourhood(S)


def maximize_anticomplete_pair(G: Graph, C: VertexSet, P: VertexSet, Q: VertexSet,
                               trace: list[str] | None = None) -> tuple[VertexSet, VertexSet, VertexSet]:
    """Hill-climb an anticomplete pair of connected sets inside ``C``.

    Moves: grow each side to its component in ``C`` minus the closed
    neighbourhood of the other side, and swap the weaker side for any other
    component of ``C`` minus the cutset that scores higher in
    ``(chi, size)``.  Each move strictly increases ``(chi(P)+chi(Q), |P|+|Q|)``.

    Returns ``(P, Q, S)`` with ``chi(P) >= chi(Q)``, ``S = N_C(P) = N_C(Q)``
    a minimal cutset, and ``P``, ``Q`` components of ``C \\ S``.
    """
    if not P or not Q or P & ~C or Q & ~C:
        raise ExtractionError("pair must be nonempty and inside the host set")
    if not G.is_anticomplete_to(P, Q):
        raise ExtractionError("pair is not anticomplete")
    moves = 0
    while True:
        while True:
            P2 = G.component_of(lowest(P), C & ~closed_nbhd(G, Q))
            Q2 = G.component_of(lowest(Q), C & ~closed_nbhd(G, P2))
            if (P2, Q2) == (P, Q):
                break
            P, Q = P2, Q2
            moves += 1
        if (chi(G, P), size(P)) < (chi(G, Q), size(Q)):
            P, Q = Q, P
        S = G.neighbourhood(Q) & C
        swapped = False
        for K in G.components(C & ~S):
            if K in (P, Q):
                continue
            if (chi(G, K), size(K)) > (chi(G, Q), size(Q)):
                Q = K
                if (chi(G, Q), size(Q)) > (chi(G, P), size(P)):
                    P, Q = Q, P
                swapped = True
                moves += 1
                break
        if not swapped:
            break
    S = G.neighbourhood(Q) & C
    if trace is not None:
        trace.append(f"pair maximised after {moves} moves: chi(P)={chi(G, P)} chi(Q)={chi(G, Q)} |S|={size(S)}")
    return P, Q, S


def induced_path(G: Graph, src: VertexSet, dst: VertexSet, through: VertexSet) -> list[int] | None:
    """Shortest path from ``src`` to ``dst`` whose interior lies in ``through`` (BFS, ascending ties)."""
    parent: dict[int, int] = {}
    frontier = src
    seen = src
    while frontier:
        nxt = 0
        for v in bits(frontier):
            for u in bits(G.adj[v] & ~seen & (through | dst)):
                parent[u] = v
                nxt |= 1 << u
                seen |= 1 << u
        hit = nxt & dst
        if hit:
            u = lowest(hit)
            path = [u]
            while path[-1] in parent:
                path.append(parent[path[-1]])
            return path[::-1]
        frontier = nxt & through
    return None
