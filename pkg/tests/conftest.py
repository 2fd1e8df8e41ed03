"""Shared test helpers: naive reference oracles and hypothesis strategies.

The naive oracles here are deliberately simple and share no code with the
package's oracles, so agreement between the two is meaningful.
"""

from __future__ import annotations

import itertools

import pytest
from hypothesis import strategies as st

from purepairs.graph import Graph


def naive_chi(n: int, edges) -> int:
    """Smallest k admitting a proper colouring, by plain backtracking."""
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    if n == 0:
        return 0
    for k in range(1, n + 1):
        col = [-1] * n

        def go(i: int) -> bool:
            if i == n:
                return True
            for c in range(k):
                if all(col[u] != c for u in adj[i]):
                    col[i] = c
                    if go(i + 1):
                        return True
            col[i] = -1
            return False

        if go(0):
            return k
    raise AssertionError("unreachable")


def naive_clique(n: int, edges) -> int:
    es = {frozenset(e) for e in edges}
    best = 0
    for r in range(n, 0, -1):
        for S in itertools.combinations(range(n), r):
            if all(frozenset(p) in es for p in itertools.combinations(S, 2)):
                return r
    return best


def pattern_table(H: Graph) -> set[int]:
    """Adjacency patterns (over pairs of a sorted h-subset) isomorphic to H."""
    h = H.n
    pairs = list(itertools.combinations(range(h), 2))
    out = set()
    for perm in itertools.permutations(range(h)):
        code = 0
        for bit, (i, j) in enumerate(pairs):
            if H.has_edge(perm[i], perm[j]):
                code |= 1 << bit
        out.add(code)
    return out


def naive_contains(G: Graph, H: Graph, table: set[int] | None = None) -> bool:
    table = pattern_table(H) if table is None else table
    pairs = list(itertools.combinations(range(H.n), 2))
    for S in itertools.combinations(range(G.n), H.n):
        code = 0
        for bit, (i, j) in enumerate(pairs):
            if G.has_edge(S[i], S[j]):
                code |= 1 << bit
        if code in table:
            return True
    return False


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


@st.composite
def graph_and_subset(draw, min_n: int = 1, max_n: int = 9):
    G = draw(graphs(min_n, max_n))
    S = draw(st.integers(0, (1 << G.n) - 1))
    return G, S


@pytest.fixture
def c5():
    from purepairs.generators import cycle
    return cycle(5)
