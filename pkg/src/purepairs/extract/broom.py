"""Broom-track extractors: t-broom decomposition and colouring, the star
step, covering blockades, and the broom-or-anticomplete-pair pipeline."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..generators import broom
from ..graph import Graph, VertexSet, as_list, bits, lowest, size
from ..oracles import (Colouring, chi, chromatic_number, degeneracy, find_induced_copy, greedy_compact,
                       isomorphic, max_clique, omega, ramsey)
from ..outcomes import (ANTICOMPLETE_PAIR, ANTICOMPLETE_STABLE, BROOM_PAIR, COLOURING, COVERING_BLOCKADE,
                        DECOMPOSITION, PAIR_XY, ExtractionError, NotHFree, Outcome)
from ._common import F, max_chi_component, maximize_anticomplete_pair, wpow
from .basic import controlled_subgraph, min_degree_core


def _check_tbroom_free(G: Graph, t: int, S: VertexSet) -> None:
    phi = find_induced_copy(broom(3, t), G, within=S)
    if phi is not None:
        raise NotHFree(f"input contains a {t}-broom", {"copy": [phi[i] for i in range(3 + t)]})


# --- t-broom decomposition -------------------------------------------------------

def tbroom_decompose(G: Graph, t: int, *, within: VertexSet | None = None, check_free: bool = True) -> Outcome:
    """Disjoint ``S``, ``P`` with ``chi(G) <= chi(S)+chi(P)``, ``w chi(P) >= chi(G)``
    and every ``u`` in ``S`` missing little of ``P``."""
    V = G.vertices if within is None else within
    if check_free:
        _check_tbroom_free(G, t, V)
    w = omega(G, V)
    if w < 2:
        raise ExtractionError("clique number must be at least 2")
    R = ramsey(t, w)
    total = chi(G, V)
    C = max_chi_component(G, V)
    trace = [f"component with chi {chi(G, C)} on {size(C)} vertices"]
    if G.is_clique(C):
        v = lowest(C)
        P, S = 1 << v, C & ~(1 << v)
        trace.append("complete component: P is one vertex, S the rest")
    else:
        K = max_clique(G, C)
        chosen = None
        for v in bits(K):
            Pv = C & ~K & ~G.adj[v]
            if Pv and w * chi(G, Pv) >= total:
                chosen = (v, Pv)
                break
        if chosen is None:
            raise ExtractionError("no clique vertex with a large non-neighbourhood", trace=trace)
        v, Pv = chosen
        P0 = max_chi_component(G, Pv)
        trace.append(f"clique vertex {v}: chi(P_v) = {chi(G, Pv)}")
        P, Q, S = maximize_anticomplete_pair(G, C, P0, 1 << v, trace)
    out = Outcome(DECOMPOSITION, {"S": S, "P": P},
                  data={"t": t, "omega": w, "ramsey": R},
                  margins={"chi_G": F(total), "chi_S": F(chi(G, S)), "chi_P": F(chi(G, P)),
                           "miss_bound": F(2 * R - 1)},
                  trace=trace)
    worst = 0
    for u in bits(S):
        d, _ = degeneracy(G, P & ~G.adj[u])
        worst = max(worst, d)
        if d > 2 * (R - 1):
            if check_free:
                raise ExtractionError("near-completeness claim failed on a broom-free input", {"u": u}, trace)
            _check_tbroom_free(G, t, V)
            raise ExtractionError("near-completeness claim failed", {"u": u}, trace)
    out.data["max_degeneracy"] = worst
    if not (total <= chi(G, S) + chi(G, P) and w * chi(G, P) >= total):
        raise ExtractionError("decomposition inequalities failed", trace=trace)
    return out


def tbroom_colour(G: Graph, t: int, *, within: VertexSet | None = None, check_free: bool = True) -> Outcome:
    """Colour a t-broom-free graph with at most ``2 w^2 R(t, w)`` colours.

    Decompose into ``(S, P)``, colour ``S`` recursively, colour the part ``D``
    of ``P`` missing a vertex of a maximum clique ``C`` of ``S`` by greedy
    degeneracy colouring per clique vertex, and colour ``P \\ D`` (complete to
    ``C``) recursively.  When that budget is exceeded (the proof's ``P = D``
    branch bounds chi non-constructively) the exact colouring is used.
    """
    V = G.vertices if within is None else within
    if check_free:
        _check_tbroom_free(G, t, V)
    notes: list[str] = []

    def greedy_degenerate(X: VertexSet) -> dict[int, int]:
        _, order = degeneracy(G, X)
        col: dict[int, int] = {}
        for v in reversed(order):
            used = {col[u] for u in bits(G.adj[v] & X) if u in col}
            col[v] = next(c for c in itertools.count() if c not in used)
        return col

    def colour(X: VertexSet) -> dict[int, int]:
        if not X:
            return {}
        comps = G.components(X)
        if len(comps) > 1:
            out: dict[int, int] = {}
            for c in comps:
                out.update(colour(c))
            return out
        w = omega(G, X)
        if G.is_clique(X):
            return {v: i for i, v in enumerate(bits(X))}
        R = ramsey(t, w)
        budget = 2 * w * w * R
        dec = tbroom_decompose(G, t, within=X, check_free=False)
        S, P = dec["S"], dec["P"]
        out = colour(S)
        base = max(out.values(), default=-1) + 1
        Cq = max_clique(G, S)
        D = 0
        for v in bits(P):
            if Cq & ~G.adj[v]:
                D |= 1 << v
        rest_cols: dict[int, int] = {}
        offset = 0
        covered = 0
        for u in bits(Cq):
            part = D & ~G.adj[u] & ~covered
            covered |= part
            if not part:
                continue
            g = greedy_degenerate(part)
            for v, c in g.items():
                rest_cols[v] = offset + c
            offset += max(g.values()) + 1
        inner = colour(P & ~D)
        for v, c in inner.items():
            rest_cols[v] = offset + c
        # other components of X \ S are anticomplete to P and reuse its colours
        for K in G.components(X & ~S & ~P):
            for v, c in colour(K).items():
                rest_cols[v] = c
        for v, c in rest_cols.items():
            out[v] = base + c
        if len(set(out.values())) > budget:
            notes.append(f"palette over budget on {size(X)} vertices; exact colouring used")
            _, exact = chromatic_number(G, X, cap=40)
            return dict(exact.colour)
        return out

    raw_map = colour(V)
    raw = Colouring(raw_map, len(set(raw_map.values())))
    if not raw.is_proper(G):
        raise ExtractionError("colouring is not proper")
    compact = greedy_compact(G, raw)
    w = omega(G, V)
    bound = 2 * w * w * ramsey(t, w) if w >= 1 else 0
    return Outcome(COLOURING, {"V": V},
                   data={"colouring": compact.colour, "count": compact.count, "raw_count": raw.count,
                         "bound": bound, "omega": w, "t": t},
                   margins={"count": F(compact.count), "bound": F(bound)}, trace=notes)


# --- star step -------------------------------------------------------------------

def star_step(G: Graph, A: VertexSet, B: VertexSet, t: int, q: int | Fraction, w: int, *,
              within: VertexSet | None = None) -> Outcome:
    """Either ``(X, Y)`` inside ``(A, B)`` with small clique sum and small leftovers,
    or a stable ``t``-set ``P`` in ``A`` anticomplete to a high-chi ``Q`` in ``B``."""
    Fv = G.vertices if within is None else within
    q = F(q)
    if (A | B) & ~Fv or A & B:
        raise ExtractionError("A and B must be disjoint subsets of F")
    if size(A) < w ** (t + 2):
        raise ExtractionError(f"|A| = {size(A)} is below w^(t+2) = {w ** (t + 2)}")
    wf = omega(G, Fv)
    if wf > w:
        raise ExtractionError("omega(F) exceeds w")
    n = w ** (t + 1) - 1
    used = 0
    cliques = []
    for _ in range(n):
        K = max_clique(G, A & ~used)
        if not K:
            raise ExtractionError("ran out of clique material")
        cliques.append(K)
        used |= K
    X = A & ~used
    p = size(cliques[-1]) if cliques else 0
    Y = 0
    for b in bits(B):
        if size(used & ~G.adj[b]) < w ** t:
            Y |= 1 << b
    floor = wpow(w, -t * (t + 2)) * q
    trace = [f"peeled {n} cliques, last of size {p}; |A\\X| = {size(used)}"]
    rest = B & ~Y
    for combo in itertools.combinations(as_list(used), t):
        Pm = sum(1 << x for x in combo)
        if not G.is_stable(Pm):
            continue
        BS = 0
        for b in bits(rest):
            if not G.adj[b] & Pm:
                BS |= 1 << b
        if BS and chi(G, BS) >= floor:
            trace.append(f"stable set {list(combo)} anticomplete to chi {chi(G, BS)}")
            return Outcome(ANTICOMPLETE_STABLE, {"P": Pm, "Q": BS},
                           data={"t": t, "w": w, "q": str(q)},
                           margins={"chi_Q": F(chi(G, BS)), "floor": floor}, trace=trace,
                           degenerate=floor <= 1)
    out = Outcome(PAIR_XY, {"X": X, "Y": Y},
                  data={"t": t, "w": w, "q": str(q), "p": p},
                  margins={"omega_sum": F(omega(G, X) + omega(G, Y)), "omega_F": F(wf),
                           "removed": F(size(A & ~X)), "removed_cap": F(w ** (t + 2)),
                           "chi_leftover": F(chi(G, B & ~Y)), "q": q},
                  trace=trace)
    if omega(G, X) + omega(G, Y) > wf or size(A & ~X) >= w ** (t + 2) or chi(G, B & ~Y) >= q:
        raise ExtractionError("star step first outcome failed its bounds", {"outcome": out.to_json()}, trace)
    return out


# --- covering blockades -------------------------------------------------------------

@dataclass
class CoveringBlockade:
    D: list[VertexSet]
    E: VertexSet
    w: int
    queried: list[VertexSet] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.D)


EXHAUSTIVE_COVER = 12


def cover_candidates(E: VertexSet, seed: int = 0, samples: int = 100) -> list[VertexSet]:
    """Subsets ``Y`` of ``E`` to test the covering bullet on: all of them when ``E`` is small."""
    items = as_list(E)
    if len(items) <= EXHAUSTIVE_COVER:
        return [sum(1 << items[i] for i in range(len(items)) if m >> i & 1) for m in range(1, 1 << len(items))]
    rng = random.Random(seed)
    out = [E]
    for _ in range(samples):
        m = 0
        while not m:
            m = sum(1 << x for x in items if rng.random() < 0.5)
        out.append(m)
    return out


def cover_violation(G: Graph, D: VertexSet, E: VertexSet, w: int, candidates=None) -> tuple[VertexSet, VertexSet] | None:
    """A ``Y`` in ``E`` (large) whose near-complete set ``Z_Y`` in ``D`` keeps a ``1 - w^-2`` share of ``chi(D)``."""
    cE = chi(G, E)
    cD = chi(G, D)
    floorY = wpow(w, -3) * cE
    cap = (1 - wpow(w, -2)) * cD
    for Y in (cover_candidates(E) if candidates is None else candidates):
        cY = chi(G, Y)
        if cY < floorY:
            continue
        Z = 0
        for u in bits(D):
            if w * chi(G, Y & ~G.adj[u]) < cY:
                Z |= 1 << u
        if Z and chi(G, Z) >= cap:
            return Y, Z
    return None


def _split_E(G: Graph, Bl: VertexSet, w: int) -> tuple[VertexSet, bool]:
    """Shrink ``Bl`` one vertex at a time until ``chi(E) <= 2 w^-4 chi(Bl)``."""
    c = chi(G, Bl)
    hi = 2 * wpow(w, -4) * c
    if hi < 1:
        return 1 << max(bits(Bl)), True
    E = Bl
    for v in bits(Bl):
        if chi(G, E) <= hi:
            break
        E &= ~(1 << v)
    return E, chi(G, E) < wpow(w, -4) * c


def _blockade_outcome(G: Graph, cb: CoveringBlockade, total: int, k: int, trace: list[str]) -> Outcome:
    floor = wpow(cb.w, -6 * k) * total
    return Outcome(COVERING_BLOCKADE, {**{f"D{i + 1}": Di for i, Di in enumerate(cb.D)}, "E": cb.E},
                   data={"k": k, "w": cb.w, "queried": [as_list(Y) for Y in cb.queried]},
                   margins={"chi_Dk": F(chi(G, cb.D[-1])), "chi_E": F(chi(G, cb.E)), "floor": floor},
                   degenerate=floor <= 1, trace=trace)


def _trivial_anticomplete(G: Graph, V: VertexSet, floor: Fraction, trace: list[str], note: str) -> Outcome:
    a, b = G.lowest_non_edge(V)
    trace.append(note)
    return Outcome(ANTICOMPLETE_PAIR, {"A": 1 << a, "B": 1 << b},
                   margins={"chi_A": F(1), "chi_B": F(1), "floor": floor},
                   degenerate=True, trace=trace)


def _base_blockade(G: Graph, V: VertexSet, w: int, trace: list[str]) -> CoveringBlockade | None:
    blocks = [V]
    while True:
        Bl = blocks[-1]
        if size(Bl) < 2:
            trace.append("last vivid block too small to split")
            return None
        E, flagged = _split_E(G, Bl, w)
        D = Bl & ~E
        if not D:
            trace.append("split left D empty")
            return None
        hit = cover_violation(G, D, E, w)
        if hit is None:
            trace.append(f"base blockade after {len(blocks) - 1} vivid extensions"
                         + (" (window empty, degenerate split)" if flagged else ""))
            return CoveringBlockade([D], E, w)
        Y, Z = hit
        blocks[-1:] = [Y, Z]
        if len(blocks) - 1 > w:
            raise ExtractionError("vivid blockade longer than w", trace=trace)
        trace.append(f"vivid extension to length {len(blocks)}")


def _extend_blockade(G: Graph, cb: CoveringBlockade, anti_floor: Fraction, trace: list[str],
                     prefer_blockade: bool = False):
    """One inductive step; returns a longer blockade, an anticomplete pair, or ``None`` when stalled.

    With ``prefer_blockade`` a qualifying pair is held back and only returned
    if the step stalls, so that degenerate floors still exercise the blockade.
    """
    w = cb.w
    held = None
    Dk = cb.D[-1]
    blocks = [cb.E]
    while True:
        Bl = blocks[-1]
        cB = chi(G, Bl)
        A = 0
        for x in bits(Dk):
            trial = A | 1 << x
            Bset = Bl & ~G.neighbourhood(trial)
            if w * chi(G, Bset) >= cB:
                A = trial
        Bset = Bl & ~G.neighbourhood(A)
        if A and Bset and chi(G, A) >= anti_floor and chi(G, Bset) >= anti_floor:
            if not prefer_blockade:
                trace.append("maximal A and its non-neighbourhood form the anticomplete outcome")
                return ("pair", A, Bset)
            held = held or ("pair", A, Bset)
        u = next((x for x in bits(Dk & ~A) if w * chi(G, Bset & ~G.adj[x]) >= chi(G, Bset)), None)
        if u is None or not Bset:
            trace.append("no vertex u in D_k \\ A sees little of B; step stalls")
            return held
        Dk2 = A | 1 << u
        Dn = Bl & G.neighbourhood(Dk2)
        En = Bl & ~Dn
        if not Dn or not En:
            trace.append("new blocks empty; step stalls")
            return held
        hit = cover_violation(G, Dn, En, w)
        if hit is None:
            out = CoveringBlockade(cb.D[:-1] + [Dk2, Dn], En, w)
            trace.append(f"extended to a {out.k}-covering blockade after {len(blocks) - 1} vivid extensions")
            return ("blockade", out)
        Y, Z = hit
        blocks[-1:] = [Y, Z]
        if len(blocks) - 1 > w:
            raise ExtractionError("vivid blockade longer than w", trace=trace)


def covering_blockade(G: Graph, k: int, *, within: VertexSet | None = None, eager: bool = True) -> Outcome:
    """Anticomplete pair with ``chi >= w^-8k chi(G)`` or a ``k``-covering blockade
    with ``chi(D_k), chi(E) >= w^-6k chi(G)``."""
    V = G.vertices if within is None else within
    if G.lowest_non_edge(V) is None:
        raise ExtractionError("input is complete")
    w = omega(G, V)
    if w < 2:
        w = 2  # clique number 1 means edgeless; every bound is taken with w = 2
    total = chi(G, V)
    anti_floor = wpow(w, -8 * k) * total
    trace: list[str] = []
    if eager and anti_floor <= 1:
        return _trivial_anticomplete(G, V, anti_floor, trace, "anticomplete floor below 1; lowest non-edge")
    cb = _base_blockade(G, V, w, trace)
    while cb is not None and cb.k < k:
        step = _extend_blockade(G, cb, anti_floor, trace, prefer_blockade=not eager)
        if step is None:
            cb = None
        elif step[0] == "pair":
            _, A, B = step
            return Outcome(ANTICOMPLETE_PAIR, {"A": A, "B": B},
                           margins={"chi_A": F(chi(G, A)), "chi_B": F(chi(G, B)), "floor": anti_floor},
                           degenerate=anti_floor <= 1, trace=trace)
        else:
            cb = step[1]
    if cb is not None:
        floor = wpow(w, -6 * k) * total
        if chi(G, cb.D[-1]) >= floor and chi(G, cb.E) >= floor:
            return _blockade_outcome(G, cb, total, k, trace)
        trace.append("blockade below the chromatic floor")
    if anti_floor <= 1:
        return _trivial_anticomplete(G, V, anti_floor, trace, "construction stalled; thresholds degenerate")
    raise ExtractionError("covering construction stalled above degenerate range", trace=trace)


def blockade_from_outcome(out: Outcome) -> CoveringBlockade:
    k = out.data["k"]
    return CoveringBlockade([out.sets[f"D{i + 1}"] for i in range(k)], out.sets["E"], out.data["w"])


# --- broom or anticomplete pair -------------------------------------------------------

def broom_exponent(k: int, t: int) -> int:
    return 6 * k + t * (t + 2) + 9


def _chain_back(G: Graph, blocks: list[VertexSet], v: int) -> list[int]:
    path_ = [v]
    for i in range(len(blocks) - 2, -1, -1):
        path_.append(lowest(G.adj[path_[-1]] & blocks[i]))
    return path_[::-1]


def broom_or_anticomplete(G: Graph, k: int, t: int, *, within: VertexSet | None = None,
                          eager: bool = True) -> Outcome:
    V = G.vertices if within is None else within
    if G.lowest_non_edge(V) is None:
        raise ExtractionError("input is complete")
    w = omega(G, V)
    if w < 2:
        raise ExtractionError("clique number must be at least 2")
    d = broom_exponent(k, t)
    total = chi(G, V)
    floor = wpow(w, -d) * total
    trace: list[str] = [f"d = {d}"]
    if eager and floor <= 1:
        return _trivial_anticomplete(G, V, floor, trace, "floor w^-d chi(G) below 1; lowest non-edge")

    def fallback(note: str) -> Outcome:
        if floor <= 1:
            return _trivial_anticomplete(G, V, floor, trace, note + "; thresholds degenerate")
        raise ExtractionError(note, trace=trace)

    cov = covering_blockade(G, k, within=V, eager=False)
    trace += cov.trace
    if cov.kind == ANTICOMPLETE_PAIR:
        A, B = cov["A"], cov["B"]
        if chi(G, A) >= floor and chi(G, B) >= floor:
            return Outcome(ANTICOMPLETE_PAIR, {"A": A, "B": B},
                           margins={"chi_A": F(chi(G, A)), "chi_B": F(chi(G, B)), "floor": floor},
                           degenerate=floor <= 1, trace=trace)
        return fallback("covering lemma pair below w^-d floor")
    cb = blockade_from_outcome(cov)
    Dk = cb.D[-1]
    Es = [cb.E]
    s = wpow(w, -6 * k - 7) * total
    for _round in range(w + 1):
        i0 = max(range(len(Es)), key=lambda i: (chi(G, Es[i]), -i))
        E0 = Es[i0]
        J = controlled_subgraph(G, w * w, within=E0)["J"]
        p = 2 * w ** (t + 2)
        if chi(G, J) <= p:
            return fallback(f"controlled subgraph has chi {chi(G, J)} <= 2w^(t+2) = {p}")
        Fs = min_degree_core(G, p, within=J)["F"]
        cb.queried.append(Fs)
        cF = chi(G, Fs)
        Z = 0
        for z in bits(Dk):
            if w * chi(G, Fs & ~G.adj[z]) < cF:
                Z |= 1 << z
        v = next((x for x in bits(Dk & ~Z) if G.adj[x] & Fs), None)
        if v is None:
            return fallback("no vertex of D_k \\ Z has a neighbour in F")
        u = lowest(G.adj[v] & Fs)
        Nu = G.adj[u] & Fs
        comp_side, anti_side = Nu & G.adj[v], Nu & ~G.adj[v]
        need = w ** (t + 2)
        if size(comp_side) >= need:
            A, complete = comp_side, True
            B = Fs & ~G.adj[v]
        elif size(anti_side) >= need:
            A, complete = anti_side, False
            B = Fs & ~(Nu | 1 << u) & ~G.adj[v]
        else:
            return fallback("neither side of N_F(u) reaches w^(t+2)")
        step = star_step(G, A, B, t, s, w, within=Fs)
        if step.kind == ANTICOMPLETE_STABLE:
            P, Q = step["P"], step["Q"]
            chain = _chain_back(G, cb.D, v)
            body = chain if complete else chain[1:] + [u]
            Pb = sum(1 << x for x in body) | P
            out = Outcome(BROOM_PAIR, {"P": Pb, "Q": Q, "path": sum(1 << x for x in body), "leaves": P},
                          data={"k": k, "t": t, "d": d, "path_order": body, "complete_case": complete},
                          margins={"chi_Q": F(chi(G, Q)), "floor": floor},
                          degenerate=floor <= 1, trace=trace)
            H, _ = G.induced(Pb)
            if not isomorphic(H, broom(k, t)) or not G.is_anticomplete_to(Pb, Q):
                raise ExtractionError("assembled broom is not an induced broom anticomplete to Q", trace=trace)
            return out
        X, Y = step["X"], step["Y"]
        Es = Es[:i0] + [X, Y] + Es[i0 + 1:]
        trace.append(f"star step split E_{i0}; {len(Es)} budget blocks")
        if sum(omega(G, e) for e in Es) > w:
            raise ExtractionError("clique budget of the E blocks exceeded", trace=trace)
    return fallback("budget loop did not terminate within w rounds")
