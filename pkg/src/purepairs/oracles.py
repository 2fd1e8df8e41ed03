"""Exact ground-truth computations used to validate every extracted witness.

Chromatic numbers of vertex subsets are served from an all-subsets table for
graphs with at most ``EXACT_CHI_CAP`` vertices.  The table is built with
subset zeta/Moebius transforms over the lattice of vertex sets: ``cover_k``
marks the sets that are a union of ``k`` stable sets, and
``cover_{k+1} = moebius(zeta(cover_k) * zeta(stable)) > 0``.
Explicit colourings come from a DSATUR branch-and-bound.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .graph import Graph, GraphError, VertexSet, bits, lowest, size

EXACT_CHI_CAP = 20


class CapExceeded(GraphError):
    pass


# --- colourings -------------------------------------------------------------

@dataclass(frozen=True)
class Colouring:
    colour: dict[int, int]
    count: int

    def classes(self) -> list[VertexSet]:
        out: dict[int, int] = {}
        for v, c in self.colour.items():
            out[c] = out.get(c, 0) | 1 << v
        return [out[c] for c in sorted(out)]

    def is_proper(self, G: Graph) -> bool:
        for v, c in self.colour.items():
            for u in bits(G.adj[v]):
                if u in self.colour and self.colour[u] == c:
                    return False
        return len(set(self.colour.values())) == self.count

    def compacted(self) -> Colouring:
        """Relabel colours to ``0..count-1`` in order of first use."""
        remap: dict[int, int] = {}
        out = {}
        for v in sorted(self.colour):
            c = self.colour[v]
            if c not in remap:
                remap[c] = len(remap)
            out[v] = remap[c]
        return Colouring(out, len(remap))


def greedy_compact(G: Graph, col: Colouring) -> Colouring:
    """Dissolve colour classes whose vertices all fit into other classes.

    Never increases the colour count; smaller classes are tried first.
    """
    colour = dict(col.colour)
    progress = True
    while progress:
        progress = False
        counts: dict[int, int] = {}
        for c in colour.values():
            counts[c] = counts.get(c, 0) + 1
        for c in sorted(counts, key=lambda x: (counts[x], x)):
            trial = dict(colour)
            ok = True
            for v in sorted(u for u, x in colour.items() if x == c):
                used = {trial[u] for u in bits(G.adj[v]) if u in trial}
                target = next((d for d in sorted(counts) if d != c and d not in used), None)
                if target is None:
                    ok = False
                    break
                trial[v] = target
            if ok:
                colour = trial
                progress = True
                break
    return Colouring(colour, len(set(colour.values()))).compacted()


# --- stable-set indicator and chi table --------------------------------------

def _stable_indicator(G: Graph) -> np.ndarray:
    n = G.n
    ind = np.zeros(1 << n, dtype=np.int64)
    ind[0] = 1
    for h in range(n):
        low = np.arange(1 << h, dtype=np.int64)
        block = ind[: 1 << h] * ((low & G.adj[h]) == 0)
        ind[1 << h: 1 << (h + 1)] = block
    return ind


def _zeta(a: np.ndarray, n: int) -> np.ndarray:
    a = a.copy()
    for i in range(n):
        v = a.reshape(-1, 2, 1 << i)
        v[:, 1, :] += v[:, 0, :]
    return a


def _moebius(a: np.ndarray, n: int) -> np.ndarray:
    a = a.copy()
    for i in range(n):
        v = a.reshape(-1, 2, 1 << i)
        v[:, 1, :] -= v[:, 0, :]
    return a


def chi_table(G: Graph) -> np.ndarray:
    """``table[S] = chi(G[S])`` for every subset ``S``; needs ``n <= 20``."""
    if G.n > EXACT_CHI_CAP:
        raise CapExceeded(f"chi table needs n <= {EXACT_CHI_CAP}, got {G.n}")
    cached = G._cache.get("chi_table")
    if cached is not None:
        return cached
    n = G.n
    stable = _stable_indicator(G)
    table = np.full(1 << n, 255, dtype=np.uint8)
    table[0] = 0
    zs = _zeta(stable, n)
    cover = stable
    k = 1
    while True:
        fresh = (cover > 0) & (table == 255)
        table[fresh] = k
        if not (table == 255).any():
            break
        cover = (_moebius(_zeta(cover, n) * zs, n) > 0).astype(np.int64)
        k += 1
    G._cache["chi_table"] = table
    return table


def chi(G: Graph, S: VertexSet | None = None) -> int:
    """Exact chromatic number of ``G[S]``."""
    S = G.vertices if S is None else S
    if S == 0:
        return 0
    if G.n <= EXACT_CHI_CAP:
        return int(chi_table(G)[S])
    memo = G._cache.setdefault("chi_memo", {})
    if S not in memo:
        H, _ = G.induced(S)
        memo[S] = _chromatic_bnb(H)[0]
    return memo[S]


# --- DSATUR branch-and-bound ---------------------------------------------------

def _k_colour(G: Graph, k: int) -> list[int] | None:
    n = G.n
    colour = [-1] * n
    # forbidden[v] is a bitmask over colours already used by neighbours of v
    forbidden = [0] * n
    deg = [size(r) for r in G.adj]

    def pick() -> int:
        best, key = -1, None
        for v in range(n):
            if colour[v] < 0:
                kk = (size(forbidden[v]), deg[v], -v)
                if key is None or kk > key:
                    best, key = v, kk
        return best

    def rec(done: int, used: int) -> bool:
        if done == n:
            return True
        v = pick()
        options = [c for c in range(min(used + 1, k)) if not forbidden[v] >> c & 1]
        for c in options:
            colour[v] = c
            touched = []
            for u in bits(G.adj[v]):
                if colour[u] < 0 and not forbidden[u] >> c & 1:
                    forbidden[u] |= 1 << c
                    touched.append(u)
            if rec(done + 1, max(used, c + 1)):
                return True
            for u in touched:
                forbidden[u] &= ~(1 << c)
            colour[v] = -1
        return False

    return colour if rec(0, 0) else None


def _chromatic_bnb(G: Graph) -> tuple[int, list[int]]:
    if G.n == 0:
        return 0, []
    lower = size(max_clique(G))
    upper_col = _dsatur_greedy(G)
    upper = max(upper_col) + 1
    best = upper_col
    for k in range(upper - 1, lower - 1, -1):
        attempt = _k_colour(G, k)
        if attempt is None:
            break
        best = attempt
        upper = k
    return max(best) + 1, best


def _dsatur_greedy(G: Graph) -> list[int]:
    n = G.n
    colour = [-1] * n
    for _ in range(n):
        best, key = -1, None
        for v in range(n):
            if colour[v] < 0:
                sat = {colour[u] for u in bits(G.adj[v]) if colour[u] >= 0}
                kk = (len(sat), size(G.adj[v]), -v)
                if key is None or kk > key:
                    best, key = v, kk
        taken = {colour[u] for u in bits(G.adj[best]) if colour[u] >= 0}
        colour[best] = next(c for c in itertools.count() if c not in taken)
    return colour


def chromatic_number(G: Graph, S: VertexSet | None = None, *, certify: bool = False,
                     cap: int = EXACT_CHI_CAP) -> tuple[int, Colouring]:
    """Exact ``chi(G[S])`` with an optimal colouring in ``G``'s labelling.

    With ``certify`` the (chi-1)-colouring search is rerun and must fail.
    """
    S = G.vertices if S is None else S
    H, labels = G.induced(S)
    if H.n > cap:
        raise CapExceeded(f"exact chi needs at most {cap} vertices, got {H.n}")
    k, col = _chromatic_bnb(H)
    if certify and k > 0 and _k_colour(H, k - 1) is not None:
        raise AssertionError("colouring search found fewer colours than the optimum")
    return k, Colouring({labels[i]: c for i, c in enumerate(col)}, k)


# --- cliques, stable sets, degeneracy -----------------------------------------

def max_clique(G: Graph, S: VertexSet | None = None) -> VertexSet:
    """A maximum clique of ``G[S]`` (lexicographically first among the search order)."""
    S = G.vertices if S is None else S
    best = [0, 0]  # size, mask

    def colour_bound(P: VertexSet) -> int:
        # greedy colouring of P gives an upper bound on the clique inside P
        count = 0
        rest = P
        while rest:
            count += 1
            avail = rest
            while avail:
                v = lowest(avail)
                rest &= ~(1 << v)
                avail &= ~(1 << v) & ~G.adj[v]
        return count

    def expand(R: VertexSet, r: int, P: VertexSet) -> None:
        if not P:
            if r > best[0]:
                best[0], best[1] = r, R
            return
        if r + colour_bound(P) <= best[0]:
            return
        while P:
            if r + size(P) <= best[0]:
                return
            v = lowest(P)
            expand(R | 1 << v, r + 1, P & G.adj[v])
            P &= ~(1 << v)

    expand(0, 0, S)
    return best[1]


def omega(G: Graph, S: VertexSet | None = None) -> int:
    S = G.vertices if S is None else S
    memo = G._cache.setdefault("omega", {})
    if S not in memo:
        memo[S] = size(max_clique(G, S))
    return memo[S]


def clique_number(G: Graph, S: VertexSet | None = None) -> tuple[int, VertexSet]:
    K = max_clique(G, S)
    return size(K), K


def max_stable(G: Graph, S: VertexSet | None = None) -> VertexSet:
    Gc = G._cache.get("complement")
    if Gc is None:
        Gc = G._cache["complement"] = G.complement()
    return max_clique(Gc, S)


def alpha(G: Graph, S: VertexSet | None = None) -> int:
    S = G.vertices if S is None else S
    memo = G._cache.setdefault("alpha", {})
    if S not in memo:
        memo[S] = size(max_stable(G, S))
    return memo[S]


def stability_number(G: Graph, S: VertexSet | None = None) -> tuple[int, VertexSet]:
    I = max_stable(G, S)
    return size(I), I


def degeneracy(G: Graph, S: VertexSet | None = None) -> tuple[int, list[int]]:
    """Smallest-last ordering; each vertex has at most ``d`` later neighbours."""
    S = G.vertices if S is None else S
    rest = S
    order = []
    d = 0
    while rest:
        v = min(bits(rest), key=lambda x: (size(G.adj[x] & rest), x))
        d = max(d, size(G.adj[v] & rest))
        order.append(v)
        rest &= ~(1 << v)
    return d, order


# --- induced copies -----------------------------------------------------------

def _copy_order(H: Graph, anchored: set[int]) -> list[int]:
    order: list[int] = sorted(anchored)
    placed = set(order)
    while len(order) < H.n:
        best = max((x for x in range(H.n) if x not in placed),
                   key=lambda x: (sum(1 for y in placed if H.has_edge(x, y)), size(H.adj[x]), -x))
        order.append(best)
        placed.add(best)
    return order


def iter_induced_copies(H: Graph, G: Graph, anchors: Mapping[int, VertexSet] | Sequence[VertexSet] | None = None,
                        within: VertexSet | None = None) -> Iterator[dict[int, int]]:
    """Yield every injective map ``phi`` with ``G[phi(V(H))]`` equal to ``H`` under phi.

    ``anchors`` optionally restricts ``phi(x)`` to a given vertex set per
    vertex ``x`` of ``H``; anchor sets must be pairwise disjoint.
    """
    if anchors is None:
        anchors = {}
    elif not isinstance(anchors, Mapping):
        anchors = dict(enumerate(anchors))
    seen = 0
    for x, A in anchors.items():
        if A & seen:
            raise GraphError("anchor sets overlap")
        seen |= A
    pool = G.vertices if within is None else within
    if H.n == 0:
        yield {}
        return
    order = _copy_order(H, set(anchors))
    hdeg = [size(r) for r in H.adj]
    gdeg_in = {v: size(G.adj[v] & pool) for v in bits(pool)}
    phi: dict[int, int] = {}

    def rec(i: int, used: VertexSet) -> Iterator[dict[int, int]]:
        if i == len(order):
            yield dict(phi)
            return
        x = order[i]
        cand = pool & ~used
        if x in anchors:
            cand &= anchors[x]
        for y, gy in phi.items():
            cand &= G.adj[gy] if H.has_edge(x, y) else ~G.adj[gy]
        for c in bits(cand):
            if gdeg_in[c] < hdeg[x]:
                continue
            phi[x] = c
            yield from rec(i + 1, used | 1 << c)
            del phi[x]

    yield from rec(0, 0)


def find_induced_copy(H: Graph, G: Graph, anchors=None, within: VertexSet | None = None) -> dict[int, int] | None:
    return next(iter_induced_copies(H, G, anchors, within), None)


def is_h_free(G: Graph, H: Graph, within: VertexSet | None = None) -> bool:
    return find_induced_copy(H, G, within=within) is None


def isomorphic(G1: Graph, G2: Graph) -> bool:
    if G1.n != G2.n or G1.edge_count() != G2.edge_count():
        return False
    if sorted(size(r) for r in G1.adj) != sorted(size(r) for r in G2.adj):
        return False
    return find_induced_copy(G1, G2) is not None


# --- Ramsey numbers -----------------------------------------------------------

_RAMSEY = {(3, 3): 6, (3, 4): 9, (3, 5): 14, (3, 6): 18, (3, 7): 23, (4, 4): 18, (4, 5): 25}


def ramsey(t: int, w: int) -> int:
    """``R(t, w)``: exact when tabulated, else ``min(C(t+w-2, t-1), w**t)``."""
    if t < 1 or w < 1:
        raise ValueError("ramsey arguments must be positive")
    if t == 1 or w == 1:
        return 1
    if t == 2:
        return w
    if w == 2:
        return t
    key = (min(t, w), max(t, w))
    if key in _RAMSEY:
        return _RAMSEY[key]
    return min(comb(t + w - 2, t - 1), w ** t)


def ramsey_fallback(t: int, w: int) -> int:
    return min(comb(t + w - 2, t - 1), w ** t)


def tabulated_ramsey() -> dict[tuple[int, int], int]:
    return dict(_RAMSEY)


def _invariant(G: Graph) -> tuple:
    degs = [size(r) for r in G.adj]
    return tuple(sorted((degs[v], tuple(sorted(degs[u] for u in bits(G.adj[v])))) for v in range(G.n)))


def ramsey_good_graphs(t: int, w: int, n: int) -> list[Graph]:
    """All graphs on ``n`` vertices, up to isomorphism, with ``alpha < t`` and ``omega < w``.

    Grown one vertex at a time; a new vertex with neighbourhood ``N`` keeps
    the graph good iff ``omega(N) < w-1`` and ``alpha(V \\ N) < t-1``.
    """
    level = [Graph(0, [])] if t > 1 and w > 1 else []
    for m in range(n):
        buckets: dict[tuple, list[Graph]] = {}
        for G in level:
            full = G.vertices
            for N in range(1 << m):
                if N and omega(G, N) >= w - 1:
                    continue
                M = full & ~N
                if M and alpha(G, M) >= t - 1:
                    continue
                if (not N and w <= 1) or (not M and t <= 1):
                    continue
                adj = list(G.adj) + [N]
                for u in bits(N):
                    adj[u] |= 1 << m
                H = Graph(m + 1, adj)
                key = _invariant(H)
                bucket = buckets.setdefault(key, [])
                if not any(isomorphic(H, K) for K in bucket):
                    bucket.append(H)
        level = [H for key in sorted(buckets) for H in buckets[key]]
    return level


def verify_ramsey(t: int, w: int, value: int) -> bool:
    """Check ``R(t, w) = value`` exhaustively: a good graph on ``value-1`` vertices exists, none on ``value``."""
    if t == 1 or w == 1:
        return value == 1
    below = ramsey_good_graphs(t, w, value - 1)
    if not below:
        return False
    for G in below:
        full = G.vertices
        for N in range(1 << G.n):
            if (N == 0 or omega(G, N) < w - 1) and (N == full or alpha(G, full & ~N) < t - 1):
                return False
    return True


# --- submeasures --------------------------------------------------------------

@dataclass(frozen=True)
class Submeasure:
    name: str
    fn: Callable[[Graph, VertexSet], int | Fraction]

    def __call__(self, G: Graph, S: VertexSet) -> int | Fraction:
        return self.fn(G, S)


CHROMATIC = Submeasure("chi", chi)
CARDINALITY = Submeasure("card", lambda G, S: size(S))

SUBMEASURES = {"chi": CHROMATIC, "card": CARDINALITY}


@dataclass
class AxiomReport:
    checked: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def submeasure_axiom_check(mu: Submeasure, G: Graph, samples: int = 200, seed: int = 0) -> AxiomReport:
    rep = AxiomReport()
    if mu(G, 0) != 0:
        rep.violations.append({"axiom": "empty", "value": str(mu(G, 0))})
    for v in range(G.n):
        val = mu(G, 1 << v)
        if val != 1:
            rep.violations.append({"axiom": "singleton", "set": [v], "value": str(val)})
    rng = random.Random(seed)
    for _ in range(samples):
        Y = rng.getrandbits(G.n) if G.n else 0
        X = Y & (rng.getrandbits(G.n) if G.n else 0)
        Z = rng.getrandbits(G.n) if G.n else 0
        rep.checked += 1
        if mu(G, X) > mu(G, Y):
            rep.violations.append({"axiom": "monotone", "X": list(bits(X)), "Y": list(bits(Y))})
        if mu(G, X | Z) > mu(G, X) + mu(G, Z):
            rep.violations.append({"axiom": "subadditive", "X": list(bits(X)), "Y": list(bits(Z))})
    return rep
