"""The P5 pipeline: mixed vertices, terminal partitions, colourful subgraphs,
the linear anticomplete / polynomial complete pair lemmas and the colouring
recursion for P5-free graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..generators import path
from ..graph import Graph, VertexSet, as_list, bits, lowest, size
from ..oracles import alpha, chi, find_induced_copy, max_stable, omega
from ..outcomes import (ANTICOMPLETE_PAIR, COLOURFUL_SUBGRAPH, COLOURING, COMPLETE_PAIR, COVER, OK,
                        P5_WITNESS, TERMINAL_PARTITION, VERTEX, ExtractionError, NotHFree, Outcome)
from ._common import F, max_chi_component, maximize_anticomplete_pair, wpow
from .basic import controlled_subgraph, gyarfas_colour_bound, gyarfas_vertex, is_controlled
from .broom import covering_blockade

P5 = path(5)


@dataclass(frozen=True)
class P5Params:
    """Exponents of the P5 pipeline, all derived from the Erdos-Hajnal exponent ``a``."""

    a: int = 4

    def __post_init__(self):
        if self.a < 4:
            raise ValueError("the Erdos-Hajnal exponent must be at least 4")

    @property
    def d(self) -> int:
        return self.a + 2

    @property
    def linanti_b(self) -> int:
        return self.d + 6

    @property
    def locdense_a(self) -> int:
        return self.linanti_b + 2

    @property
    def b(self) -> int:
        return max(self.locdense_a, 40)

    @property
    def d_final(self) -> int:
        return 2 * self.b

    def to_json(self) -> dict:
        return {"a": self.a, "d": self.d, "linanti_b": self.linanti_b, "locdense_a": self.locdense_a,
                "b": self.b, "d_final": self.d_final}


def _host(G: Graph, within: VertexSet | None) -> VertexSet:
    return G.vertices if within is None else within


def check_p5_free(G: Graph, V: VertexSet) -> None:
    phi = find_induced_copy(P5, G, within=V)
    if phi is not None:
        raise NotHFree("input contains an induced P5", {"copy": [phi[i] for i in range(5)]})


def _p5_or_fault(G: Graph, V: VertexSet, message: str, trace: list[str], detail: dict | None = None):
    """A structural claim failed: surface a P5 if there is one, else report a fault."""
    phi = find_induced_copy(P5, G, within=V)
    if phi is not None:
        raise NotHFree(message, {"copy": [phi[i] for i in range(5)], **(detail or {})}, trace)
    raise ExtractionError("implementation fault: " + message, detail, trace)


def _mixing_edge(G: Graph, v: int, S: VertexSet) -> tuple[int, int] | None:
    """An edge ``xy`` of ``G[S]`` with ``v`` adjacent to ``x`` and not to ``y``."""
    for x in bits(S & G.adj[v]):
        rest = G.adj[x] & S & ~G.adj[v]
        if rest:
            return x, lowest(rest)
    return None


# --- mixed vertices ---------------------------------------------------------------

def assert_unmixed(G: Graph, A: VertexSet, B: VertexSet) -> Outcome:
    """Confirm no vertex is mixed on both sides of an anticomplete pair of connected sets."""
    if not A or not B or A & B:
        raise ExtractionError("A and B must be nonempty and disjoint")
    if not G.is_anticomplete_to(A, B):
        raise ExtractionError("pair is not anticomplete")
    if not G.is_connected(A) or not G.is_connected(B):
        raise ExtractionError("both sides must induce connected subgraphs")
    for v in bits(G.vertices & ~A & ~B):
        ea, eb = _mixing_edge(G, v, A), _mixing_edge(G, v, B)
        if ea and eb:
            p = [ea[1], ea[0], v, eb[0], eb[1]]
            return Outcome(P5_WITNESS, {"path": sum(1 << x for x in p)}, data={"path": p, "vertex": v})
    return Outcome(OK)


# --- colourful graphs -------------------------------------------------------------

def colourful_violation(G: Graph, eps: Fraction, V: VertexSet) -> int | None:
    total = chi(G, V)
    for v in bits(V):
        if chi(G, V & ~G.adj[v] & ~(1 << v)) >= eps * total:
            return v
    return None


def colourful_check(G: Graph, eps, *, within: VertexSet | None = None) -> Outcome:
    V = _host(G, within)
    eps = F(eps)
    v = colourful_violation(G, eps, V)
    if v is None:
        return Outcome(OK, {"V": V}, data={"eps": eps})
    rest = V & ~G.adj[v] & ~(1 << v)
    return Outcome(VERTEX, {"v": 1 << v}, data={"vertex": v, "eps": eps},
                   margins={"chi_rest": F(chi(G, rest)), "threshold": eps * chi(G, V)})


# --- terminal partitions -------------------------------------------------------------

@dataclass
class TerminalPartition:
    A: list[VertexSet]
    B: VertexSet
    D: VertexSet
    p: Fraction
    w: int
    history: list[str] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.A)

    def B_i(self, G: Graph, i: int) -> VertexSet:
        return self.B & G.neighbourhood(self.A[i])

    def extend(self, A_new: VertexSet, B_extra: VertexSet) -> TerminalPartition:
        return TerminalPartition(self.A + [A_new], self.B | B_extra, self.D & ~(A_new | B_extra),
                                 self.p, self.w, list(self.history))

    def sets(self) -> dict[str, VertexSet]:
        out = {f"A{i + 1}": a for i, a in enumerate(self.A)}
        out.update(B=self.B, D=self.D)
        return out


def terminal_violations(G: Graph, V: VertexSet, tp: TerminalPartition) -> list[str]:
    """Check the five defining conditions; returns a list of human-readable failures."""
    out = []
    allA = 0
    for a in tp.A:
        if a & allA:
            out.append("A blocks overlap")
        allA |= a
    if allA & (tp.B | tp.D) or tp.B & tp.D or (allA | tp.B | tp.D) != V:
        out.append("blocks do not partition the vertex set")
    total = chi(G, V)
    if allA and tp.D and not G.is_anticomplete_to(tp.D, allA):
        out.append("D is not anticomplete to the A blocks")
    for y in bits(tp.B):
        if not G.adj[y] & allA:
            out.append(f"B vertex {y} has no neighbour in the A blocks")
    cap = wpow(tp.w, -4) * total
    for i in range(tp.k):
        c = chi(G, tp.B_i(G, i))
        if not (1 <= c <= cap):
            out.append(f"chi(B_{i + 1}) = {c} outside [1, {cap}]")
    comps = G.components(V & ~tp.B & ~tp.D)
    if sorted(comps) != sorted(tp.A):
        out.append("A blocks are not the components of G minus (B u D)")
    for i, a in enumerate(tp.A):
        if chi(G, a) < tp.p:
            out.append(f"chi(A_{i + 1}) below p")
    high = (1 - wpow(tp.w, -2)) * total
    if chi(G, tp.D) < high:
        out.append("chi(D) below (1 - w^-2) chi(G)")
    for C in G.components(tp.D):
        if chi(G, C) >= high:
            for y in bits(tp.B):
                if not G.adj[y] & C:
                    out.append(f"B vertex {y} misses a high component of D")
    return out


def lemma44_component(G: Graph, V: VertexSet, tp: TerminalPartition) -> VertexSet:
    """The unique high-chi component of ``G[D]``; raises if the occupation property fails."""
    total = chi(G, V)
    high = [C for C in G.components(tp.D) if chi(G, C) >= (1 - wpow(tp.w, -2)) * total]
    if len(high) != 1:
        raise ExtractionError(f"D has {len(high)} high components, expected exactly one")
    if chi(G, tp.D) < (1 - wpow(tp.w, -3)) * total:
        raise ExtractionError("chi(D) below (1 - w^-3) chi(G)")
    return high[0]


def _validate_host(G: Graph, V: VertexSet, w: int, check_free: bool) -> None:
    if not V or not G.is_connected(V):
        raise ExtractionError("input must be connected")
    if check_free:
        check_p5_free(G, V)
    bad = is_controlled(G, V, w)
    if bad is not None:
        raise ExtractionError("input is not controlled", {"vertex": bad})


def _terminal_outcome(G: Graph, V: VertexSet, tp: TerminalPartition) -> Outcome:
    total = chi(G, V)
    C = lemma44_component(G, V, tp)
    return Outcome(TERMINAL_PARTITION, {**tp.sets(), "C": C},
                   data={"k": tp.k, "p": tp.p, "w": tp.w},
                   margins={"chi_D": F(chi(G, tp.D)), "lemma44_floor": (1 - wpow(tp.w, -3)) * total,
                            "B_i_cap": wpow(tp.w, -4) * total},
                   degenerate=wpow(tp.w, -4) * total < 1, trace=list(tp.history))


def build_terminal_partition(G: Graph, p, *, within: VertexSet | None = None, w: int | None = None,
                             check_free: bool = True, seeds: int = 64) -> TerminalPartition:
    """Extension loop from ``(B, D) = (empty, V)``.

    An extension cuts a connected ``Q`` out of the high component of ``D``
    along its minimal cutset ``S`` (the cut-and-extend step used for complete
    pairs) and keeps it only if all five conditions survive.
    """
    V = _host(G, within)
    w = max(2, omega(G, V)) if w is None else w
    _validate_host(G, V, w, check_free)
    tp = TerminalPartition([], 0, V, F(p), w, ["base partition: B empty, D = V"])
    if wpow(w, -4) * chi(G, V) < 1:
        tp.history.append("w^-4 chi(G) < 1: no B_i can meet its bounds, so k = 0 is maximal")
        return tp
    while True:
        C = lemma44_component(G, V, tp)
        extended = None
        tried = 0
        for x in bits(C):
            for y in bits(C & ~G.adj[x] & ~((1 << (x + 1)) - 1)):
                if tried >= seeds:
                    break
                tried += 1
                P, Q, S = maximize_anticomplete_pair(G, C, 1 << x, 1 << y)
                for part in (Q, P):
                    if chi(G, part) < tp.p:
                        continue
                    cut = G.neighbourhood(part) & C
                    cand = tp.extend(part, cut)
                    if not terminal_violations(G, V, cand):
                        extended = cand
                        break
                if extended:
                    break
            if extended or tried >= seeds:
                break
        if extended is None:
            tp.history.append(f"no extension applies; k = {tp.k}")
            return tp
        extended.history.append(f"extended to k = {extended.k}")
        tp = extended


def terminal_partition(G: Graph, p, *, within: VertexSet | None = None, check_free: bool = True) -> Outcome:
    V = _host(G, within)
    tp = build_terminal_partition(G, p, within=V, check_free=check_free)
    bad = terminal_violations(G, V, tp)
    if bad:
        raise ExtractionError("terminal partition invalid: " + "; ".join(bad), trace=tp.history)
    return _terminal_outcome(G, V, tp)


# --- complete pairs from terminal partitions ------------------------------------------

Supplier = Callable[[Graph, VertexSet], "tuple[VertexSet, VertexSet] | None"]


def default_anti_supplier(p) -> Supplier:
    """Anticomplete pairs with both chromatic numbers at least ``p``: covering lemma first, then seeds."""
    p = F(p)

    def supplier(G: Graph, Fm: VertexSet):
        try:
            out = covering_blockade(G, 1, within=Fm)
            if out.kind == ANTICOMPLETE_PAIR and min(chi(G, out["A"]), chi(G, out["B"])) >= p:
                return out["A"], out["B"]
        except ExtractionError:
            pass
        for x in bits(Fm):
            for y in bits(Fm & ~G.adj[x] & ~((1 << (x + 1)) - 1)):
                P, Q, _ = maximize_anticomplete_pair(G, Fm, 1 << x, 1 << y)
                if min(chi(G, P), chi(G, Q)) >= p:
                    return P, Q
        return None

    return supplier


def _complete_pair(G: Graph, A: VertexSet, B: VertexSet, margins: dict, trace: list[str],
                   data: dict | None = None) -> Outcome:
    degenerate = all(v <= 1 for k, v in margins.items() if k.endswith("floor"))
    return Outcome(COMPLETE_PAIR, {"A": A, "B": B}, data=data or {},
                   margins={"chi_A": F(chi(G, A)), "chi_B": F(chi(G, B)), **margins},
                   degenerate=degenerate, trace=trace)


def terminal_complete_pair(G: Graph, p, anti_supplier: Supplier | None = None, *,
                           within: VertexSet | None = None, w: int | None = None,
                           check_free: bool = True) -> Outcome:
    """Complete ``(A, B)`` with ``w^4 chi(A) >= chi(G)`` and ``chi(B) >= p``."""
    V = _host(G, within)
    p = F(p)
    w = max(2, omega(G, V)) if w is None else w
    supplier = anti_supplier or default_anti_supplier(p)
    tp = build_terminal_partition(G, p, within=V, w=w, check_free=check_free)
    total = chi(G, V)
    thr = wpow(w, -4) * total
    trace = list(tp.history)
    margins = {"A_floor": thr, "B_floor": p}

    def done(A, B, note):
        trace.append(note)
        return _complete_pair(G, A, B, margins, trace, {"k": tp.k})

    while True:
        C = lemma44_component(G, V, tp)
        pair = supplier(G, C)
        if pair is None:
            raise ExtractionError("anticomplete-pair supplier failed on the high component", trace=trace)
        P, Q = max_chi_component(G, pair[0]), max_chi_component(G, pair[1])
        if not G.is_anticomplete_to(P, Q) or (P | Q) & ~C:
            raise ExtractionError("supplier returned an invalid pair", trace=trace)
        P, Q, S = maximize_anticomplete_pair(G, C, P, Q, trace)
        if min(chi(G, P), chi(G, Q)) < p:
            raise ExtractionError("supplied pair is below p", trace=trace)
        SP = sum(1 << s for s in bits(S) if G.is_complete_to(1 << s, P))
        SQ = S & ~SP
        if SQ and not G.is_complete_to(SQ, Q):
            _p5_or_fault(G, V, "cutset vertex complete to neither side", trace)
        if SP and chi(G, SP) >= thr:
            return done(SP, P, "cutset part complete to P is large")
        if SQ and chi(G, SQ) >= thr:
            return done(SQ, Q, "cutset part complete to Q is large")
        # first claim: P occupies chi(G) and every cutset vertex is mixed on it
        if chi(G, P) < (1 - wpow(w, -2)) * total or SP:
            raise ExtractionError("occupation claim failed", trace=trace)
        for y in bits(tp.B):
            if not G.adj[y] & P:
                _p5_or_fault(G, V, f"B vertex {y} has no neighbour in P", trace)
        Z = tp.B & G.neighbourhood(Q)
        if Z and not G.is_complete_to(Z, Q):
            _p5_or_fault(G, V, "B is not pure to Q", trace)
        if chi(G, S | Z) >= thr:
            return done(S | Z, Q, "S and Z together are complete to Q and large")
        nxt = tp.extend(Q, S)
        bad = terminal_violations(G, V, nxt)
        if bad:
            raise ExtractionError("extension violates the partition: " + "; ".join(bad), trace=trace)
        trace.append(f"extended terminal partition to k = {nxt.k}")
        tp = nxt


# --- nonneighbour cover -----------------------------------------------------------

def nonneighbour_cover(G: Graph, P: VertexSet, Q: VertexSet, params: P5Params = P5Params(), *,
                       w: int | None = None) -> Outcome:
    """Bound the part of ``Q`` missed by ``P`` when each ``u`` in ``P`` misses little of ``Q``."""
    if not P or not Q:
        raise ExtractionError("P and Q must be nonempty")
    w = omega(G) if w is None else w
    if w < 2:
        raise ExtractionError("clique number must be at least 2")
    d = params.d
    cQ = chi(G, Q)
    for u in bits(P):
        if w ** d * chi(G, Q & ~G.adj[u]) > cQ:
            raise ExtractionError("precondition fails", {"u": u})
    Tu = {u: Q & ~G.adj[u] & ~(1 << u) for u in bits(P)}
    T = 0
    for m in Tu.values():
        T |= m
    S = [u for u in Tu if Tu[u]]
    i = 0
    while i < len(S):
        others = 0
        for u in S:
            if u != S[i]:
                others |= Tu[u]
        if others == T:
            S.pop(i)
        else:
            i += 1
    Smask = sum(1 << u for u in S)
    z = {}
    for u in S:
        others = 0
        for x in S:
            if x != u:
                others |= Tu[x]
        z[u] = lowest(Tu[u] & ~others)
    trace = [f"minimal cover of size {len(S)}"]
    a_S = alpha(G, Smask) if Smask else 0
    if a_S > w:
        I = as_list(max_stable(G, Smask))
        for i_, j_ in ((i_, j_) for i_ in I for j_ in I if i_ < j_):
            if not G.has_edge(z[i_], z[j_]):
                ell = next(x for x in I if x not in (i_, j_))
                p_ = [j_, z[i_], ell, z[j_], i_]
                raise NotHFree("induced P5 among the cover witnesses", {"path": p_}, trace)
        raise ExtractionError("cover witnesses form a clique larger than w", trace=trace)
    eh_violation = len(S) > w ** params.a
    if eh_violation:
        trace.append(f"EH-constant violation at a = {params.a}: |S| = {len(S)}")
    cap = wpow(w, -2) * cQ
    out = Outcome(COVER, {"T": T, "S": Smask},
                  data={"z": z, "alpha_S": a_S, "eh_violation": eh_violation, "d": d},
                  margins={"chi_T": F(chi(G, T)), "cap": cap}, trace=trace)
    if chi(G, T) > cap:
        raise ExtractionError("cover bound failed", {"outcome": out.to_json()}, trace)
    return out


# --- complete pairs in colourful graphs ---------------------------------------------

def colourful_complete_pair(G: Graph, eps, *, within: VertexSet | None = None, w: int | None = None,
                            check_free: bool = True) -> Outcome:
    """Complete ``(A, B)`` with ``w^32 chi(A) >= chi(G)`` and ``2 chi(B) >= (1 - eps) chi(G)``."""
    V = _host(G, within)
    eps = F(eps)
    if not 0 < eps < 1:
        raise ExtractionError("eps must lie in (0, 1)")
    total = chi(G, V)
    if total < 2:
        raise ExtractionError("chromatic number must be at least 2")
    if check_free:
        check_p5_free(G, V)
    v = colourful_violation(G, eps, V)
    if v is not None:
        raise ExtractionError("input is not eps-colourful", {"vertex": v})
    w = max(2, omega(G, V)) if w is None else w
    margins = {"A_floor": wpow(w, -32) * total, "B_floor": (1 - eps) * total / 2}
    trace: list[str] = []
    ne = G.lowest_non_edge(V)
    if ne is None:
        x = lowest(V)
        trace.append("complete input: one vertex against the rest")
        return _complete_pair(G, 1 << x, V & ~(1 << x), margins, trace)
    cov = covering_blockade(G, 4, within=V)
    if cov.kind == ANTICOMPLETE_PAIR:
        A0, B0 = cov["A"], cov["B"]
    else:
        trace.append("covering lemma returned a blockade; seeding from the lowest non-edge")
        A0, B0 = 1 << ne[0], 1 << ne[1]
    A0, B0 = max_chi_component(G, A0), max_chi_component(G, B0)
    if not G.is_connected(V):
        raise ExtractionError("an eps-colourful graph with eps < 1 must be connected")
    A, B, S = maximize_anticomplete_pair(G, V, A0, B0, trace)
    PA = sum(1 << s for s in bits(S) if G.is_complete_to(1 << s, A))
    QB = S & ~PA
    if QB and not G.is_complete_to(QB, B):
        _p5_or_fault(G, V, "cutset vertex complete to neither side", trace)
    if chi(G, PA) >= chi(G, QB):
        X, Y = A, PA
    else:
        X, Y = B, QB
    out = _complete_pair(G, X, Y, margins, trace)
    if not (w ** 32 * chi(G, X) >= total and 2 * chi(G, Y) >= (1 - eps) * total):
        raise ExtractionError("colourful pair bounds failed", {"outcome": out.to_json()}, trace)
    return out


# --- linear anticomplete pairs -------------------------------------------------------

class _Done(Exception):
    def __init__(self, outcome: Outcome):
        self.outcome = outcome


def linanti(G: Graph, eps, params: P5Params = P5Params(), *, within: VertexSet | None = None,
            w: int | None = None, check_free: bool = True) -> Outcome:
    """Colourful ``J``, linear anticomplete pair or polynomial complete pair.

    Outcomes (``chi = chi(G)``):

    * ``J`` eps-colourful with ``16 chi(J) >= chi``;
    * anticomplete ``(P, Q)`` with ``16 chi(P) >= chi`` and ``16 chi(Q) >= eps chi``;
    * complete ``(A, B)`` with ``w^b chi(A) >= chi`` and ``256 chi(B) >= eps chi``.

    The construction is executed step by step; wherever the argument assumes
    an outcome fails, that outcome is tested and returned if it holds.
    """
    V = _host(G, within)
    eps = F(eps)
    if not 0 < eps <= Fraction(1, 2):
        raise ExtractionError("eps must lie in (0, 1/2]")
    if check_free:
        check_p5_free(G, V)
    total = chi(G, V)
    w = max(2, omega(G, V)) if w is None else w
    b, d = params.linanti_b, params.d
    trace: list[str] = []
    claims: list[dict] = []

    def finish(out: Outcome) -> Outcome:
        out.data["claims"] = claims
        out.trace = trace
        return out

    def try_J(J, note):
        if J and 16 * chi(G, J) >= total and colourful_violation(G, eps, J) is None:
            trace.append(note)
            raise _Done(Outcome(COLOURFUL_SUBGRAPH, {"J": J}, data={"eps": eps},
                                margins={"chi_J": F(chi(G, J)), "floor": Fraction(total, 16)},
                                degenerate=Fraction(total, 16) <= 1))

    def try_anti(P, Q, note):
        if P and Q and G.is_anticomplete_to(P, Q) and 16 * chi(G, P) >= total and 16 * chi(G, Q) >= eps * total:
            trace.append(note)
            fl = (Fraction(total, 16), eps * total / 16)
            raise _Done(Outcome(ANTICOMPLETE_PAIR, {"P": P, "Q": Q},
                                margins={"chi_P": F(chi(G, P)), "chi_Q": F(chi(G, Q)),
                                         "P_floor": fl[0], "Q_floor": fl[1]},
                                degenerate=max(fl) <= 1))

    def try_complete(A, B, note):
        if A and B and G.is_complete_to(A, B) and w ** b * chi(G, A) >= total and 256 * chi(G, B) >= eps * total:
            trace.append(note)
            raise _Done(_complete_pair(G, A, B, {"A_floor": wpow(w, -b) * total, "B_floor": eps * total / 256},
                                       []))

    def claim(name, ok, numeric=True, **detail):
        claims.append({"claim": name, "ok": bool(ok), **{k: str(v) for k, v in detail.items()}})
        if ok:
            return
        if not numeric:
            _p5_or_fault(G, V, f"claim {name} failed", trace, detail)
        fallback(f"claim {name} failed at desk scale")

    def fallback(note):
        trace.append(note)
        ne = G.lowest_non_edge(V)
        if ne and 16 >= total:
            try_anti(1 << ne[0], 1 << ne[1], "degenerate floors: lowest non-edge")
        e = G.lowest_edge(V)
        if e and w ** b >= total and 256 >= eps * total:
            try_complete(1 << e[0], 1 << e[1], "degenerate floors: lowest edge")
        if size(V) == 1:
            try_J(V, "single vertex")
        raise ExtractionError(note, {"claims": claims}, trace)

    try:
        try_J(V, "G itself is colourful")
        Nb = {x: G.adj[x] & V for x in bits(V)}
        Z = sum(1 << z for z in bits(V) if 8 * chi(G, Nb[z]) < total)
        claim("gyarfas-Z", 2 * chi(G, Z) < total, chi_Z=chi(G, Z))
        Fm = controlled_subgraph(G, w, within=V & ~Z)["J"]
        claim("controlled-F", 4 * chi(G, Fm) > total, chi_F=chi(G, Fm))
        try_J(Fm, "controlled core is colourful")
        v = colourful_violation(G, eps, Fm)
        Qv = V & ~Nb[v] & ~(1 << v)
        Nv = Nb[v]
        trace.append(f"vertex v = {v}: chi(N(v)) = {chi(G, Nv)}, chi(Q) = {chi(G, Qv)}")
        S = controlled_subgraph(G, w, within=Qv)["J"]
        claim("controlled-S", w * chi(G, S) > (w - 1) * chi(G, Qv), chi_S=chi(G, S))
        cS = chi(G, S)
        p = wpow(w, -d) * total / 2
        tp = build_terminal_partition(G, p, within=S, w=w, check_free=False)
        trace += tp.history
        while True:
            D = lemma44_component(G, S, tp)
            cD = chi(G, D)
            X = sum(1 << x for x in bits(Nv) if not G.adj[x] & D)
            Y = sum(1 << y for y in bits(Nv & ~X) if w ** d * chi(G, D & ~G.adj[y]) < cD)
            R = Nv & ~X & ~Y
            try_anti(X, D, "X is anticomplete to D")
            if Y:
                cov = nonneighbour_cover(G, Y, D, params, w=w)
                try_complete(Y, D & ~cov["T"], "Y against the part of D complete to it")
            claim("4.8.1", 16 * chi(G, R) >= total, chi_R=chi(G, R))
            try_J(R, "R is colourful")
            u = colourful_violation(G, eps, R)
            E = R & ~Nb[u] & ~(1 << u)
            T = G.adj[u] & D
            C = max_chi_component(G, D & ~G.adj[u]) if D & ~G.adj[u] else 0
            claim("C-size", C and w ** d * chi(G, C) >= cD, chi_C=chi(G, C) if C else 0)
            for z in bits(E | T):
                if _mixing_edge(G, z, C):
                    claim("4.8.2", False, numeric=False, z=z)
            E1 = sum(1 << x for x in bits(E) if not G.adj[x] & C)
            try_complete(C, E & ~E1, "C against the part of E complete to it")
            claim("4.8.3", 2 * chi(G, E1) >= chi(G, E), chi_E1=chi(G, E1))
            U = sum(1 << x for x in bits(T) if G.adj[x] & C)
            claim("U", U and G.is_complete_to(U, C), numeric=False)
            W = sum(1 << y for y in bits(tp.B) if G.adj[y] & C)
            W1, W2 = W & ~G.adj[u], W & G.adj[u]
            C1 = max_chi_component(G, W1) if W1 else 0
            claim("4.8.4", (not E1 or not (U | W2) or G.is_complete_to(E1, U | W2))
                  and all(not C1 or not _mixing_edge(G, x, C1) for x in bits(E1)), numeric=False)
            E2 = sum(1 << x for x in bits(E1) if C1 & ~G.adj[x])
            if C1:
                y = lowest(C1)
                i = next((j for j, a in enumerate(tp.A) if G.is_complete_to(1 << y, a)), None)
                claim("4.8.5-index", i is not None, numeric=False)
                claim("4.8.5", not E2 or G.is_complete_to(E2, tp.A[i]), numeric=False)
                try_complete(tp.A[i], E2, "A_i against E_2")
            claim("4.8.5-bound", 64 * chi(G, E2) <= eps * total, chi_E2=chi(G, E2))
            E12 = E1 & ~E2
            claim("4.8.6-complete", not E12 or not (C1 | U | W2) or G.is_complete_to(E12, C1 | U | W2),
                  numeric=False)
            for part, name in ((U, "U"), (C1, "C1"), (W2, "W2")):
                try_complete(part, E12, f"{name} against E_1 minus E_2")
            claim("4.8.6", all(w ** b * chi(G, x) <= total for x in (U, C1, W2)))
            Dp = D & ~C & ~U
            Cp = max_chi_component(G, Dp) if Dp else 0
            claim("C'", Cp and chi(G, Cp) >= (1 - wpow(w, -2)) * cS)
            Up = sum(1 << x for x in bits(U) if G.adj[x] & Cp)
            claim("U'", bool(Up), numeric=False)
            C0 = G.component_of(lowest(C), D & ~Up)
            claim("C0", C & ~C0 == 0, numeric=False)
            high = [K for K in G.components(D & ~Up) if chi(G, K) >= (1 - wpow(w, -2)) * cS]
            claim("4.8.7", all(_mixing_edge(G, x, Cp) for x in bits(Up)) and high == [Cp], numeric=False)
            claim("4.8.8", all(G.adj[y] & Cp for y in bits(tp.B)), numeric=False)
            Wp = sum(1 << y for y in bits(tp.B) if G.adj[y] & C0)
            claim("W'=W", Wp == W, numeric=False, W=as_list(W), Wp=as_list(Wp))
            nxt = tp.extend(C0, Up)
            bad = terminal_violations(G, S, nxt)
            claim("extension", not bad, detail="; ".join(bad))
            trace.append(f"terminal partition extended to k = {nxt.k}")
            tp = nxt
    except _Done as done:
        return finish(done.outcome)


# --- locally dense outcome ---------------------------------------------------------

def locdense(G: Graph, eps, params: P5Params = P5Params(), *, within: VertexSet | None = None,
             check_free: bool = True) -> Outcome:
    """Colourful ``J`` with ``64 chi(J) >= chi(G)`` or complete ``(A, B)`` with
    ``w^a chi(A) >= chi(G)`` and ``256 chi(B) >= eps chi(G)``."""
    V = _host(G, within)
    eps = F(eps)
    if not 0 < eps <= Fraction(1, 2):
        raise ExtractionError("eps must lie in (0, 1/2]")
    if check_free:
        check_p5_free(G, V)
    total = chi(G, V)
    w = max(2, omega(G, V))
    a = params.locdense_a
    trace: list[str] = []
    Fm = controlled_subgraph(G, w, within=V)["J"]
    if w * chi(G, Fm) <= (w - 1) * total:
        raise ExtractionError("controlled core too small", trace=trace)
    cF = chi(G, Fm)
    p = eps * cF / 32
    trace.append(f"controlled core with chi {cF}; p = {p}")

    def colourful_out(J):
        return Outcome(COLOURFUL_SUBGRAPH, {"J": J}, data={"eps": eps},
                       margins={"chi_J": F(chi(G, J)), "floor": Fraction(total, 64)},
                       degenerate=Fraction(total, 64) <= 1, trace=trace)

    def supplier(_G: Graph, J: VertexSet):
        out = linanti(G, eps, params, within=J, w=w, check_free=False)
        trace.append(f"linanti on {size(J)} vertices: {out.kind}")
        if out.kind == COLOURFUL_SUBGRAPH and 64 * chi(G, out["J"]) >= total:
            raise _Done(colourful_out(out["J"]))
        if out.kind == COMPLETE_PAIR and w ** a * chi(G, out["A"]) >= total and 256 * chi(G, out["B"]) >= eps * total:
            raise _Done(_complete_pair(G, out["A"], out["B"],
                                       {"A_floor": wpow(w, -a) * total, "B_floor": eps * total / 256}, trace))
        if out.kind == ANTICOMPLETE_PAIR and min(chi(G, out["P"]), chi(G, out["Q"])) >= p:
            return out["P"], out["Q"]
        return None

    try:
        if colourful_violation(G, eps, Fm) is None and 64 * cF >= total:
            return colourful_out(Fm)
        pair = terminal_complete_pair(G, p, supplier, within=Fm, w=w, check_free=False)
    except _Done as done:
        return done.outcome
    A, B = pair["A"], pair["B"]
    trace += pair.trace
    out = _complete_pair(G, A, B, {"A_floor": wpow(w, -a) * total, "B_floor": eps * total / 256}, trace)
    if not (w ** a * chi(G, A) >= total and 256 * chi(G, B) >= eps * total):
        raise ExtractionError("locdense pair bounds failed", {"outcome": out.to_json()}, trace)
    return out


# --- complete pairs and the colouring bound -----------------------------------------------

def p5_complete_pair(G: Graph, params: P5Params = P5Params(), *, within: VertexSet | None = None,
                     check_free: bool = True, shortcut: bool = True) -> Outcome:
    """Complete ``(A, B)`` with ``w^b chi(A) >= chi(G)`` and ``2^b chi(B) >= chi(G)``."""
    V = _host(G, within)
    w = omega(G, V)
    if w < 2:
        raise ExtractionError("clique number must be at least 2")
    if check_free:
        check_p5_free(G, V)
    b = params.b
    total = chi(G, V)
    margins = {"A_floor": wpow(w, -b) * total, "B_floor": wpow(2, -b) * total}
    trace: list[str] = []
    if shortcut and total < w ** b:
        gv = gyarfas_vertex(G, 5, within=V, check_free=False)
        x = gv.data["vertex"]
        trace.append(f"chi < w^b: vertex {x} against its neighbourhood")
        out = _complete_pair(G, 1 << x, gv["N"], margins, trace)
    else:
        ld = locdense(G, Fraction(1, 2), params, within=V, check_free=False)
        trace += ld.trace
        if ld.kind == COMPLETE_PAIR:
            out = _complete_pair(G, ld["A"], ld["B"], margins, trace)
        else:
            J = ld["J"]
            if chi(G, J) < 2:
                raise ExtractionError("colourful subgraph has chromatic number below 2", trace=trace)
            cp = colourful_complete_pair(G, Fraction(1, 2), within=J, w=w, check_free=False)
            trace += cp.trace
            out = _complete_pair(G, cp["A"], cp["B"], margins, trace)
    if not (w ** b * chi(G, out["A"]) >= total and 2 ** b * chi(G, out["B"]) >= total):
        raise ExtractionError("complete pair bounds failed", {"outcome": out.to_json()}, trace)
    return out


def log2_bounds(x: Fraction, q: int = 64) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= log2(x) <= hi`` for ``x >= 1`` with denominator ``q``."""
    x = F(x)
    if x < 1:
        raise ValueError("x must be at least 1")
    num, den = x.numerator ** q, x.denominator ** q
    m = (num // den).bit_length() - 1
    return Fraction(m, q), Fraction(m + 1, q)


def chi_envelope_exponent(w: int, d: int, q: int = 64) -> int:
    """An integer ``e >= d log w / log log w`` (binary logs), for ``w >= 3``."""
    if w < 3:
        raise ValueError("w must be at least 3")
    lw_lo, lw_hi = log2_bounds(Fraction(w), q)
    llw_lo, _ = log2_bounds(lw_lo, q)
    if llw_lo <= 0:
        raise ValueError("log log w lower bound not positive; raise q")
    e = d * lw_hi / llw_lo
    return -((-e.numerator) // e.denominator)


def p5_chi_bound(G: Graph, params: P5Params = P5Params(), *, within: VertexSet | None = None,
                 check_free: bool = True) -> Outcome:
    """Colour a P5-free graph and certify ``chi <= w^(d log w / log log w)`` with ``d = 2b``."""
    V = _host(G, within)
    w = omega(G, V)
    if w < 3:
        raise ExtractionError("clique number must be at least 3")
    if check_free:
        check_p5_free(G, V)
    d = params.d_final
    e = chi_envelope_exponent(w, d)
    envelope = w ** e
    trace = [f"envelope w^{e}"]
    col = gyarfas_colour_bound(G, 5, within=V)
    count = col.data["count"]
    total = chi(G, V)
    data = {"colouring": col.data["colouring"], "count": count, "omega": w, "d": d,
            "envelope_exponent": e, "branch": "small-w" if w <= 16 else "blockade"}
    margins = {"count": F(count), "envelope": F(envelope), "chi": F(total)}
    if w <= 16:
        margins["three_pow_w"] = F(3 ** w)
        trace.append("w <= 16: layered colouring within 3^w")
        if count > 3 ** w:
            raise ExtractionError("colour count above 3^w", trace=trace)
    else:
        blocks = [V]
        while 2 ** (len(blocks) - 1) < w:
            last = blocks[-1]
            if omega(G, last) < 2:
                trace.append("last block is stable; blockade growth stops (degenerate)")
                break
            cp = p5_complete_pair(G, params, within=last, check_free=False)
            blocks[-1:] = [cp["A"], cp["B"]]
        k = len(blocks) - 1
        data["blockade"] = [as_list(x) for x in blocks]
        if 2 ** k >= w:
            i = next(j for j in range(k) if 2 ** w >= w ** omega(G, blocks[j]))
            trace.append(f"block {i} has clique number {omega(G, blocks[i])} <= w / log w")
            data["low_clique_block"] = i
        if k >= 1 and not G.is_complete_to(blocks[0], blocks[1]):
            raise ExtractionError("blockade is not complete", trace=trace)
    if count > envelope:
        raise ExtractionError("colour count above the certificate", trace=trace)
    return Outcome(COLOURING, {"V": V}, data=data, margins=margins, trace=trace)
