"""Class-generic extractors: the Gyarfas path, degeneracy cores, controlled
subgraphs, vivid blockades and the Erdos-Hajnal submeasure recursion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..generators import path
from ..graph import Graph, VertexSet, as_list, bits, lowest, size
from ..oracles import (CARDINALITY, Colouring, Submeasure, chi, greedy_compact, is_h_free,
                       max_clique, omega)
from ..outcomes import (CLIQUE, COLOURING, INDUCED_COPY, NEAR_PURE_PAIR, NOT_VIVID, STABLE_SET,
                        SUBGRAPH, VERTEX, ExtractionError, NotHFree, Outcome)
from ._common import F, compare_pow_log, max_chi_component


# --- Gyarfas path --------------------------------------------------------------

def _grow_path(G: Graph, k: int, S: VertexSet) -> list[int]:
    """Run the path-growing argument inside ``G[S]`` and return an induced ``P_k``.

    Only called after the high-chi-neighbourhood scan failed, so every
    neighbourhood has ``(k-2) chi(N(v)) < chi(S)`` and the walk cannot stall.
    """
    comp = max_chi_component(G, S)
    v1 = lowest(comp)
    rest = comp & ~(G.adj[v1] | 1 << v1)
    if not rest:
        raise ExtractionError("path growth stalled at the first vertex", {"vertex": v1})
    D = max_chi_component(G, rest)
    link = G.adj[v1] & comp & G.neighbourhood(D)
    pathv = [v1, lowest(link)]
    # invariant: D connected, pathv[:-1] anticomplete to D, pathv[-1] has a neighbour in D
    while True:
        last = pathv[-1]
        layer = G.adj[last] & D
        Dn = D & ~G.adj[last]
        if not Dn:
            raise ExtractionError("path growth stalled", {"path": pathv})
        Dn = max_chi_component(G, Dn)
        nxt = lowest(layer & G.neighbourhood(Dn))
        end = lowest(G.adj[nxt] & Dn)
        if len(pathv) + 2 >= k:
            out = pathv + [nxt, end]
            return out[:k] if len(out) >= k else out
        pathv.append(nxt)
        D = Dn


def gyarfas_vertex(G: Graph, k: int, *, within: VertexSet | None = None, check_free: bool = True) -> Outcome:
    """A vertex ``v`` with ``(k-2) chi(N(v)) >= chi(G)`` in a ``P_k``-free graph."""
    S = G.vertices if within is None else within
    if k < 4:
        raise ExtractionError("path length must be at least 4")
    total = chi(G, S)
    if total < 2:
        raise ExtractionError("need chromatic number at least 2", {"chi": total})
    if check_free and not is_h_free(G, path(k), within=S):
        from ..oracles import find_induced_copy
        phi = find_induced_copy(path(k), G, within=S)
        raise NotHFree(f"input contains an induced P{k}", {"copy": [phi[i] for i in range(k)]})
    for v in bits(S):
        N = G.adj[v] & S
        if (k - 2) * chi(G, N) >= total:
            return Outcome(VERTEX, {"v": 1 << v, "N": N},
                           data={"vertex": v, "k": k},
                           margins={"chi_N": F(chi(G, N)), "threshold": Fraction(total, k - 2)})
    witness = _grow_path(G, k, S)
    raise NotHFree(f"no high-chi neighbourhood; induced P{k} found", {"path": witness})


def gyarfas_colour_bound(G: Graph, k: int, *, within: VertexSet | None = None) -> Outcome:
    """Colour a ``P_k``-free graph with at most ``(k-2)^(w-1)`` colours.

    Breadth-first layering from a root vertex: the layer ``N(v_l) & D`` at
    depth ``l`` is coloured recursively (its clique number is smaller) from
    palette ``l``; each component of what remains is handled one level
    deeper.  Depth ``k-1`` would expose an induced ``P_k``.  Colours are
    tuples of palette indices of length ``w-1``, so at most ``(k-2)^(w-1)``
    distinct colours can appear.
    """
    S = G.vertices if within is None else within
    if k < 4:
        raise ExtractionError("path length must be at least 4")
    w = omega(G, S)

    def colour_set(T: VertexSet, budget: int) -> dict[int, tuple]:
        if not T:
            return {}
        if budget <= 1:
            if budget < 1 or not G.is_stable(T):
                raise ExtractionError("clique budget exceeded", {"set": as_list(T)})
            return {v: () for v in bits(T)}
        out: dict[int, tuple] = {}
        for comp in G.components(T):
            out.update(colour_component(comp, budget))
        return out

    def colour_component(C: VertexSet, budget: int) -> dict[int, tuple]:
        v1 = lowest(C)
        out = {v1: (2,) + (1,) * (budget - 2)}
        layer = G.adj[v1] & C
        for v, c in colour_set(layer, budget - 1).items():
            out[v] = (1,) + c
        stack = [(D, [v1], 1, layer) for D in G.components(C & ~layer & ~(1 << v1))]
        while stack:
            D, trail, lvl, above = stack.pop()
            # trail is an induced path anticomplete to D except its last vertex,
            # whose layer ``above`` contains the attachment of D
            vnext = lowest(above & G.neighbourhood(D))
            if lvl + 1 > k - 2:
                witness = trail + [vnext, lowest(G.adj[vnext] & D)]
                raise NotHFree(f"layering passed depth {k - 2}; induced P{k} found", {"path": witness[:k]})
            lay = G.adj[vnext] & D
            for v, c in colour_set(lay, budget - 1).items():
                out[v] = (lvl + 1,) + c
            for comp in G.components(D & ~lay):
                stack.append((comp, trail + [vnext], lvl + 1, lay))
        return out

    tuples = colour_set(S, w)
    palette: dict[tuple, int] = {}
    for v in sorted(tuples):
        palette.setdefault(tuples[v], len(palette))
    raw = Colouring({v: palette[c] for v, c in tuples.items()}, len(palette))
    bound = (k - 2) ** (w - 1) if w >= 1 else 0
    if raw.count > bound:
        raise ExtractionError("palette colouring exceeded the (k-2)^(w-1) budget",
                              {"count": raw.count, "bound": bound})
    if not raw.is_proper(G):
        raise ExtractionError("palette colouring is not proper")
    compact = greedy_compact(G, raw)
    return Outcome(COLOURING, {"V": S},
                   data={"colouring": compact.colour, "count": compact.count, "raw_count": raw.count,
                         "bound": bound, "omega": w, "k": k},
                   margins={"count": F(compact.count), "bound": F(bound)})


# --- degeneracy core and controlled subgraphs -----------------------------------

def min_degree_core(G: Graph, p: int, *, within: VertexSet | None = None) -> Outcome:
    """Delete vertices of degree below ``p`` (lowest index first) until none remain."""
    S = G.vertices if within is None else within
    total = chi(G, S)
    if total <= p:
        raise ExtractionError("chromatic number must exceed p", {"chi": total, "p": p})
    rest = S
    removed = []
    while True:
        low = next((v for v in bits(rest) if size(G.adj[v] & rest) < p), None)
        if low is None:
            break
        removed.append(low)
        rest &= ~(1 << low)
    return Outcome(SUBGRAPH, {"F": rest},
                   data={"removed": removed, "p": p},
                   margins={"chi_F": F(chi(G, rest)), "chi_floor": F(total - p)},
                   degenerate=total - p <= 1)


def controlled_subgraph(G: Graph, q: int | Fraction, *, within: VertexSet | None = None) -> Outcome:
    """A connected ``J`` with ``chi(N_J(v)) < (1 - q^-2) chi(J)`` for every ``v``.

    Descends into a neighbourhood while it keeps a ``(1 - q^-2)`` share of the
    chromatic number, recording the clique of vertices descended through.
    """
    S = G.vertices if within is None else within
    if not S:
        raise ExtractionError("controlled subgraph of an empty graph")
    q = F(q)
    ratio = 1 - q ** -2
    clique = 0
    cur = S
    trace = []
    while True:
        c = chi(G, cur)
        hit = next((v for v in bits(cur) if chi(G, G.adj[v] & cur) >= ratio * c), None)
        if hit is None:
            break
        clique |= 1 << hit
        cur &= G.adj[hit]
        trace.append(f"descend into N({hit}): chi {c} -> {chi(G, cur)}")
    J = max_chi_component(G, cur)
    base = chi(G, S)
    w = omega(G, S)
    return Outcome(SUBGRAPH, {"J": J, "clique": clique},
                   data={"q": str(q)},
                   margins={"chi_J": F(chi(G, J)), "chi_floor": (1 - w * q ** -2) * base},
                   trace=trace)


def is_controlled(G: Graph, J: VertexSet, q: int | Fraction) -> int | None:
    """``None`` if ``G[J]`` is ``q``-controlled, else a violating vertex (or ``-1`` if disconnected)."""
    if not J or not G.is_connected(J):
        return -1
    ratio = 1 - F(q) ** -2
    c = chi(G, J)
    return next((v for v in bits(J) if chi(G, G.adj[v] & J) >= ratio * c), None)


# --- vivid blockades -------------------------------------------------------------

def vivid_violation(G: Graph, blocks: Sequence[VertexSet], eps: Fraction) -> tuple[int, int, int] | None:
    """First ``(i, j, v)`` with ``i < j``, ``v`` in block ``j`` and ``chi(B_i \\ N(v)) >= eps chi(B_i)``."""
    eps = F(eps)
    for i, Bi in enumerate(blocks):
        ci = chi(G, Bi)
        for j in range(i + 1, len(blocks)):
            for v in bits(blocks[j]):
                if chi(G, Bi & ~G.adj[v]) >= eps * ci:
                    return i, j, v
    return None


def vivid_clique(G: Graph, blocks: Sequence[VertexSet], eps: Fraction | int) -> Outcome:
    """Transversal clique of an ``eps``-vivid blockade, or the first vividness violation."""
    eps = F(eps)
    if any(not B for B in blocks):
        raise ExtractionError("blocks must be nonempty")
    seen = 0
    for B in blocks:
        if B & seen:
            raise ExtractionError("blocks must be disjoint")
        seen |= B
    bad = vivid_violation(G, blocks, eps)
    if bad is not None:
        i, j, v = bad
        Bi = blocks[i]
        return Outcome(NOT_VIVID, {"block": Bi, "miss": Bi & ~G.adj[v]},
                       data={"i": i, "j": j, "v": v},
                       margins={"chi_miss": F(chi(G, Bi & ~G.adj[v])), "threshold": eps * chi(G, Bi)})
    K = 0
    picks = []
    for B in reversed(blocks):
        cand = G.common_neighbours(K, within=B) if K else B
        if not cand:
            raise ExtractionError("vivid blockade admits no transversal clique; eps exceeds 1/omega",
                                  {"partial": picks[::-1]})
        v = lowest(cand)
        K |= 1 << v
        picks.append(v)
    return Outcome(CLIQUE, {"K": K}, data={"vertices": picks[::-1], "length": len(blocks)})


# --- Erdos-Hajnal recursion -------------------------------------------------------

@dataclass
class _PairFound:
    i: int
    j: int
    Di: VertexSet
    Dj: VertexSet
    direction: str


def _near(G: Graph, mu: Submeasure, v: int, A: VertexSet, eps: Fraction, edge: bool) -> bool:
    part = A & G.adj[v] if edge else A & ~G.adj[v]
    return mu(G, part) < eps * mu(G, A)


def eh_step(G: Graph, H: Graph, eps: Fraction, mu: Submeasure, anchors: Sequence[VertexSet]) -> Outcome:
    """Anchored copy of ``H`` or a near-pure pair inside two anchor sets.

    ``anchors[i]`` is the allowed image set of vertex ``i`` of ``H``.  The
    near-pure pair ``(D_i, D_j)``, ``i < j``, has ``D_i`` ``eps``-sparse or
    ``(1-eps)``-dense to ``D_j``.
    """
    eps = F(eps)
    h = H.n
    if not 0 < eps <= Fraction(1, 2):
        raise ExtractionError("eps must lie in (0, 1/2]")
    if len(anchors) != h:
        raise ExtractionError("need one anchor set per vertex of H")
    seen = 0
    for A in anchors:
        if not A or A & seen:
            raise ExtractionError("anchor sets must be nonempty and disjoint")
        seen |= A
    trace: list[str] = []
    depth = [0]

    def rec(idx: list[int], sets: list[VertexSet], level: int) -> dict[int, int] | _PairFound:
        depth[0] = max(depth[0], level)
        m = len(idx)
        if m == 1:
            return {idx[0]: lowest(sets[0])}
        if m == 2:
            a, b = idx
            edge = H.has_edge(a, b)
            for x in bits(sets[0]):
                hit = sets[1] & (G.adj[x] if edge else ~G.adj[x])
                if hit:
                    return {a: x, b: lowest(hit)}
            return _PairFound(0, 1, sets[0], sets[1], "sparse" if edge else "dense")
        A1 = sets[0]
        thresh = eps ** (m - 2) * mu(G, A1)
        bad = 0
        for pos in range(1, m):
            edge = H.has_edge(idx[0], idx[pos])
            Bi = 0
            for x in bits(A1):
                if _near(G, mu, x, sets[pos], eps, edge):
                    Bi |= 1 << x
            if Bi and mu(G, Bi) >= thresh:
                trace.append(f"level {level}: block {idx[pos]} gives a near-pure pair with the first block")
                return _PairFound(0, pos, Bi, sets[pos], "sparse" if edge else "dense")
            bad |= Bi
        free = A1 & ~bad
        if not free:
            raise ExtractionError("no vertex escapes the B_i sets; submeasure axioms violated", trace=trace)
        v = lowest(free)
        C = []
        for pos in range(1, m):
            edge = H.has_edge(idx[0], idx[pos])
            C.append(sets[pos] & (G.adj[v] if edge else ~G.adj[v]))
        trace.append(f"level {level}: peel vertex {idx[0]} at {v}")
        res = rec(idx[1:], C, level + 1)
        if isinstance(res, _PairFound):
            return _PairFound(res.i + 1, res.j + 1, res.Di, res.Dj, res.direction)
        res[idx[0]] = v
        return res

    res = rec(list(range(h)), list(anchors), 1)
    if isinstance(res, dict):
        return Outcome(INDUCED_COPY, {"image": sum(1 << x for x in res.values())},
                       data={"phi": res, "depth": depth[0]}, trace=trace)
    i, j = res.i, res.j
    factor = eps ** max(h - 2, 0)
    return Outcome(NEAR_PURE_PAIR, {"Di": res.Di, "Dj": res.Dj},
                   data={"i": i, "j": j, "direction": res.direction, "eps": eps, "depth": depth[0],
                         "mu": mu.name},
                   margins={"mu_Di": F(mu(G, res.Di)), "mu_Dj": F(mu(G, res.Dj)),
                            "floor_i": factor * mu(G, anchors[i]), "floor_j": factor * mu(G, anchors[j])},
                   trace=trace)


def near_pure_direction_holds(G: Graph, mu: Submeasure, A: VertexSet, B: VertexSet, eps: Fraction,
                              direction: str) -> bool:
    """Every ``v`` in ``B`` sees less than ``eps mu(A)`` of ``A`` (sparse) or misses less (dense)."""
    edge = direction == "sparse"
    return all(_near(G, mu, v, A, eps, edge) for v in bits(B))


def _minimal_block(G: Graph, mu: Submeasure, pool: VertexSet, floor: Fraction) -> VertexSet:
    A = pool
    for v in bits(pool):
        if mu(G, A & ~(1 << v)) >= floor:
            A &= ~(1 << v)
    return A


def near_pure_pair(G: Graph, H: Graph, eps: Fraction, mu: Submeasure = CARDINALITY, *,
                   within: VertexSet | None = None, check_free: bool = True) -> Outcome:
    """Disjoint ``A``, ``B`` of large submeasure with ``B`` near-pure to ``A``."""
    S = G.vertices if within is None else within
    eps = F(eps)
    h = H.n
    if not 0 < eps <= Fraction(1, 2):
        raise ExtractionError("eps must lie in (0, 1/2]")
    if check_free:
        from ..oracles import find_induced_copy
        phi = find_induced_copy(H, G, within=S)
        if phi is not None:
            raise NotHFree("input contains H", {"copy": phi})
    total = F(mu(G, S))
    floor = Fraction(1, 2 * h) * eps ** (h - 2) * total if h >= 2 else total
    trace: list[str] = []
    if h < 2 or total < 2 * h * eps ** (2 - h):
        if size(S) < 2:
            raise ExtractionError("need two vertices for the trivial pair")
        a = lowest(S)
        b = lowest(S & ~(1 << a))
        direction = "dense" if G.has_edge(a, b) else "sparse"
        trace.append("submeasure below 2h eps^(2-h); two singletons")
        return Outcome(NEAR_PURE_PAIR, {"A": 1 << b, "B": 1 << a},
                       data={"direction": direction, "eps": eps, "mu": mu.name, "trivial": True, "depth": 0},
                       margins={"mu_A": F(1), "mu_B": F(1), "floor": floor},
                       degenerate=True, trace=trace)
    blocks = []
    used = 0
    lo = Fraction(1, 2 * h) * total
    for _ in range(h):
        A = _minimal_block(G, mu, S & ~used, lo)
        if not A or mu(G, A) < lo or mu(G, A) > total / h:
            raise ExtractionError("block construction failed", {"blocks": [as_list(b) for b in blocks]})
        blocks.append(A)
        used |= A
    trace.append("blocks: " + " ".join(str(mu(G, b)) for b in blocks))
    res = eh_step(G, H, eps, mu, blocks)
    if res.kind == INDUCED_COPY:
        raise NotHFree("anchored copy of H found", {"copy": res.data["phi"]})
    Di, Dj = res["Di"], res["Dj"]
    return Outcome(NEAR_PURE_PAIR, {"A": Dj, "B": Di},
                   data={"direction": res.data["direction"], "eps": eps, "mu": mu.name, "trivial": False,
                         "depth": res.data["depth"], "i": res.data["i"], "j": res.data["j"]},
                   margins={"mu_A": F(mu(G, Dj)), "mu_B": F(mu(G, Di)), "floor": floor},
                   degenerate=floor <= 1, trace=trace + res.trace)


def quasi_pure(G: Graph, H: Graph, eps: Fraction, mu: Submeasure = CARDINALITY, *,
               within: VertexSet | None = None, check_free: bool = True, eager: bool = True) -> Outcome:
    """A stable set or an ``eps``-sparse pair, each of submeasure ``eps^(2|H| log w) mu(G)``.

    Keeps a list of disjoint sets whose clique numbers sum to at most ``w``;
    each round splits every set into a near-pure pair and either returns a
    sparse pair or replaces a dense pair by a largest clique side and its
    common neighbourhood, doubling the list.
    """
    S = G.vertices if within is None else within
    eps = F(eps)
    w = omega(G, S)
    if check_free:
        from ..oracles import find_induced_copy
        phi = find_induced_copy(H, G, within=S)
        if phi is not None:
            raise NotHFree("input contains H", {"copy": phi})
    if w >= 1 and not 0 < eps <= Fraction(1, w):
        raise ExtractionError("eps must lie in (0, 1/omega]")
    total = F(mu(G, S))
    trace: list[str] = []
    meta = {"eps": eps, "mu": mu.name, "omega": w, "exponent": f"2*{H.n}*log2({w})"}
    if w <= 1:
        trace.append("graph is stable")
        return Outcome(STABLE_SET, {"S": S}, data=meta, margins={"mu_S": total, "mu_G": total}, trace=trace)
    if eager:
        # the construction starts by assuming no stable set is large enough; test that directly
        from ..oracles import max_stable
        I = max_stable(G, S)
        if quasi_pure_floor_holds(F(mu(G, I)), total, eps, H.n, w):
            trace.append("a maximum stable set already meets the floor")
            return Outcome(STABLE_SET, {"S": I}, data={**meta, "rounds": 0},
                           margins={"mu_S": F(mu(G, I)), "mu_G": total}, trace=trace)
    E = [S]
    rounds = 0
    while True:
        for Ei in E:
            if omega(G, Ei) <= 1:
                trace.append(f"round {rounds}: a block is stable")
                return Outcome(STABLE_SET, {"S": Ei}, data={**meta, "rounds": rounds},
                               margins={"mu_S": F(mu(G, Ei)), "mu_G": total}, trace=trace)
        rounds += 1
        nxt = []
        for Ei in E:
            pair = near_pure_pair(G, H, eps, mu, within=Ei, check_free=False)
            A, B = pair["A"], pair["B"]
            if pair.data["direction"] == "sparse":
                trace.append(f"round {rounds}: sparse pair found")
                return Outcome(NEAR_PURE_PAIR, {"A": A, "B": B}, data={**meta, "direction": "sparse", "rounds": rounds},
                               margins={"mu_A": F(mu(G, A)), "mu_B": F(mu(G, B)), "mu_G": total},
                               trace=trace + pair.trace)
            D = max_clique(G, B)
            Dp = G.common_neighbours(D, within=A)
            if not Dp:
                raise ExtractionError("dense pair lost its common neighbourhood", trace=trace)
            nxt += [B, Dp]
        if sum(omega(G, X) for X in nxt) > w:
            raise ExtractionError("clique budget exceeded", trace=trace)
        E = nxt
        trace.append(f"round {rounds}: {len(E)} blocks, omegas {[omega(G, X) for X in E]}")


def quasi_pure_floor_holds(value: Fraction, total: Fraction, eps: Fraction, h: int, w: int) -> bool | None:
    """Decide ``value >= eps^(2 h log2 w) * total`` exactly (``None`` if undecided)."""
    if total == 0:
        return value >= 0
    if w <= 1:
        return value >= total
    return compare_pow_log(F(value) / F(total), F(eps), 2 * h, w)
