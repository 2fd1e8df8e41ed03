"""Certificate validators.

Each validator re-checks an outcome (in its JSON form) against the graph
using only the graph structure and the exact oracles; nothing from the
extractors is imported.  A validator returns a list of failure messages,
empty when the certificate holds.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from ..generators import broom, forbidden_graph, path
from ..graph import Graph, VertexSet, bits, size, to_mask
from ..oracles import chi, degeneracy, find_induced_copy, omega, ramsey

Check = Callable[[Graph, dict, dict], list]


def _set(out: dict, key: str) -> VertexSet:
    return to_mask(out["sets"][key])


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def _colour_map(out: dict) -> dict[int, int]:
    return {int(k): int(v) for k, v in out["data"]["colouring"].items()}


def _mu(name: str):
    if name == "chi":
        return chi
    if name == "card":
        return lambda G, S: size(S)
    raise ValueError(f"unknown submeasure {name!r}")


def _w(G: Graph) -> int:
    return max(2, omega(G))


class _Fails(list):
    def need(self, ok, msg: str):
        if not ok:
            self.append(msg)
        return ok


def _proper(G: Graph, col: dict[int, int], fails: _Fails) -> int:
    fails.need(set(col) == set(range(G.n)), "colouring does not cover every vertex")
    for u, v in G.edges():
        if col.get(u) == col.get(v):
            fails.append(f"edge {u}-{v} is monochromatic")
            break
    return len(set(col.values()))


def _complete(G: Graph, A: VertexSet, B: VertexSet) -> bool:
    return bool(A) and bool(B) and not A & B and all(G.adj[a] & B == B for a in bits(A))


def _anticomplete(G: Graph, A: VertexSet, B: VertexSet) -> bool:
    return bool(A) and bool(B) and not A & B and all(not G.adj[a] & B for a in bits(A))


def _log2_floor_scaled(x: Fraction, q: int) -> int:
    """``floor(q * log2 x)`` for rational ``x > 0``."""
    num, den = x.numerator ** q, x.denominator ** q
    if num >= den:
        return (num // den).bit_length() - 1
    # x < 1: floor(log2) = -ceil(log2(1/x))
    m = (den // num).bit_length() - 1
    return -m if den == num << m else -m - 1


def at_least_eps_power_log(r: Fraction, eps: Fraction, c: int, w: int) -> bool | None:
    """Decide ``r >= eps^(c log2 w)``, using ``eps^(c log2 w) = w^(c log2 eps)``."""
    if r <= 0:
        return False
    if w == 1:
        return r >= 1
    for q in (8, 32, 128):
        lo = _log2_floor_scaled(Fraction(w), q)  # q log2 w in [lo, lo + 1)
        # eps < 1 so the threshold is largest at the lower end of log2 w
        if r ** q >= eps ** (c * lo):
            return True
        if r ** q < eps ** (c * (lo + 1)):
            return False
    return None


# --- basic track ---------------------------------------------------------------

def v_gyarfas_vertex(G, params, out):
    f = _Fails()
    v = out["data"]["vertex"]
    N = _set(out, "N")
    f.need(N == G.adj[v], "N is not the neighbourhood of v")
    k = int(params.get("k", 5))
    f.need((k - 2) * chi(G, N) >= chi(G), "(k-2) chi(N(v)) < chi(G)")
    return f


def v_gyarfas_colour(G, params, out):
    f = _Fails()
    k = int(params.get("k", 5))
    count = _proper(G, _colour_map(out), f)
    f.need(count == out["data"]["count"], "reported count differs from colours used")
    f.need(count <= (k - 2) ** (omega(G) - 1), "count above (k-2)^(w-1)")
    f.need(count >= chi(G), "count below chi(G)")
    return f


def v_min_degree_core(G, params, out):
    f = _Fails()
    p = int(params["p"])
    F = _set(out, "F")
    f.need(F != 0, "core is empty")
    f.need(all(size(G.adj[v] & F) >= p for v in bits(F)), "minimum degree below p")
    f.need(chi(G, F) >= chi(G) - p, "chi(F) < chi(G) - p")
    return f


def v_controlled(G, params, out):
    f = _Fails()
    q = _fr(params["q"])
    J = _set(out, "J")
    f.need(J != 0 and G.is_connected(J), "J is not connected")
    cJ = chi(G, J)
    f.need(all(chi(G, G.adj[v] & J) < (1 - q ** -2) * cJ for v in bits(J)), "a neighbourhood is too colourful")
    w = omega(G)
    if q >= w:
        f.need(cJ > (1 - w * q ** -2) * chi(G), "chi(J) not above (1 - w q^-2) chi(G)")
    return f


def _is_vivid(G: Graph, blocks: list[VertexSet], eps: Fraction) -> bool:
    for j, Bj in enumerate(blocks):
        for i in range(j):
            ci = chi(G, blocks[i])
            for v in bits(Bj):
                if chi(G, blocks[i] & ~G.adj[v]) >= eps * ci:
                    return False
    return True


def v_vivid(G, params, out):
    f = _Fails()
    blocks = [to_mask(b) for b in out["data"]["blocks"]]
    eps = _fr(out["data"]["eps"])
    vivid = _is_vivid(G, blocks, eps)
    if out["kind"] == "clique":
        f.need(vivid, "blockade reported as vivid is not")
        picks = out["data"]["vertices"]
        f.need(len(picks) == len(blocks), "clique does not pick one vertex per block")
        f.need(all(picks[i] in out["data"]["blocks"][i] for i in range(min(len(picks), len(blocks)))),
               "clique vertex outside its block")
        f.need(G.is_clique(to_mask(picks)), "transversal is not a clique")
        f.need(len(blocks) <= omega(G), "vivid blockade longer than omega")
    elif out["kind"] == "not_vivid":
        f.need(not vivid, "blockade reported as not vivid is vivid")
    else:
        f.append(f"unexpected kind {out['kind']}")
    return f


def _direction_ok(G, mu, A, B, eps, direction) -> bool:
    mA = mu(G, A)
    for v in bits(B):
        part = A & G.adj[v] if direction == "sparse" else A & ~G.adj[v]
        if not mu(G, part) < eps * mA:
            return False
    return True


def v_near_pure(G, params, out):
    f = _Fails()
    H = forbidden_graph(params["H"])
    h = H.n
    eps = _fr(params["eps"])
    mu = _mu(params.get("mu", "card"))
    A, B = _set(out, "A"), _set(out, "B")
    total = mu(G, G.vertices)
    f.need(A and B and not A & B, "A, B must be nonempty and disjoint")
    f.need(_direction_ok(G, mu, A, B, eps, out["data"]["direction"]), "direction fails for some v in B")
    f.need(out["data"]["depth"] <= h, "recursion deeper than |H|")
    if out["data"].get("trivial"):
        f.need(total < 2 * h * eps ** (2 - h), "trivial branch taken above the threshold")
    else:
        floor = Fraction(1, 2 * h) * eps ** (h - 2) * total
        f.need(mu(G, A) >= floor and mu(G, B) >= floor, "submeasure below (2h)^-1 eps^(h-2) mu(G)")
    return f


def v_quasi_pure(G, params, out):
    f = _Fails()
    H = forbidden_graph(params["H"])
    eps = _fr(params["eps"])
    mu = _mu(params.get("mu", "card"))
    w = omega(G)
    total = Fraction(mu(G, G.vertices))
    f.need(w <= 1 or eps <= Fraction(1, w), "eps above 1/omega")
    c = 2 * H.n
    if out["kind"] == "stable_set":
        S = _set(out, "S")
        f.need(S and G.is_stable(S), "S is not a nonempty stable set")
        if w > 1:
            f.need(at_least_eps_power_log(mu(G, S) / total, eps, c, w) is not False, "stable set below the floor")
    elif out["kind"] == "near_pure_pair":
        A, B = _set(out, "A"), _set(out, "B")
        f.need(A and B and not A & B, "A, B must be nonempty and disjoint")
        f.need(out["data"]["direction"] == "sparse", "only sparse pairs are allowed")
        f.need(_direction_ok(G, mu, A, B, eps, "sparse"), "pair is not eps-sparse")
        for X in (A, B):
            f.need(at_least_eps_power_log(mu(G, X) / total, eps, c, w) is not False, "pair side below the floor")
    else:
        f.append(f"unexpected kind {out['kind']}")
    return f


def v_eh_step(G, params, out):
    f = _Fails()
    H = forbidden_graph(params["H"])
    eps = _fr(params["eps"])
    mu = _mu(params.get("mu", "card"))
    anchors = [to_mask(a) for a in params["anchors"]]
    if out["kind"] == "induced_copy":
        phi = {int(k): v for k, v in out["data"]["phi"].items()}
        f.need(all(phi[i] in out_list for i, out_list in enumerate(params["anchors"])), "copy leaves an anchor")
        for i in range(H.n):
            for j in range(i + 1, H.n):
                f.need(G.has_edge(phi[i], phi[j]) == H.has_edge(i, j), "copy is not induced")
    else:
        i, j = out["data"]["i"], out["data"]["j"]
        Di, Dj = _set(out, "Di"), _set(out, "Dj")
        factor = eps ** max(H.n - 2, 0)
        f.need(Di & ~anchors[i] == 0 and Dj & ~anchors[j] == 0, "pair leaves its anchors")
        f.need(mu(G, Di) >= factor * mu(G, anchors[i]) and mu(G, Dj) >= factor * mu(G, anchors[j]),
               "pair below eps^(h-2) of its anchors")
        # D_i eps-sparse (or (1-eps)-dense) to D_j: every vertex of D_i sees little of D_j
        f.need(_direction_ok(G, mu, Dj, Di, eps, out["data"]["direction"]), "direction fails")
        f.need(out["data"]["depth"] <= H.n, "recursion deeper than |H|")
    return f


# --- broom track ---------------------------------------------------------------

def v_tbroom_decompose(G, params, out):
    f = _Fails()
    t = int(params["t"])
    S, P = _set(out, "S"), _set(out, "P")
    w = omega(G)
    R = ramsey(t, w)
    total = chi(G)
    f.need(S and P and not S & P, "S, P must be nonempty and disjoint")
    f.need(total <= chi(G, S) + chi(G, P), "chi(G) > chi(S) + chi(P)")
    f.need(w * chi(G, P) >= total, "w chi(P) < chi(G)")
    for u in bits(S):
        miss = P & ~G.adj[u]
        f.need(chi(G, miss) <= 2 * R - 1, f"chi(P minus N({u})) above 2R-1")
        f.need(degeneracy(G, miss)[0] <= 2 * (R - 1), f"degeneracy of P minus N({u}) above 2(R-1)")
    return f


def v_tbroom_colour(G, params, out):
    f = _Fails()
    t = int(params["t"])
    w = omega(G)
    count = _proper(G, _colour_map(out), f)
    f.need(count <= 2 * w * w * ramsey(t, w), "count above 2 w^2 R(t, w)")
    f.need(count >= chi(G), "count below chi(G)")
    return f


def cover_samples(G: Graph, D: VertexSet, E: VertexSet, w: int, samples: int, seed: int):
    """Sampled ``(X, Y)`` with ``chi(Y) >= w^-3 chi(E)``: (X in D, Y in E)."""
    rng = random.Random(seed)
    floor = Fraction(chi(G, E), w ** 3)
    Ds, Es = list(bits(D)), list(bits(E))
    out = []
    tries = 0
    while len(out) < samples and tries < 20 * samples:
        tries += 1
        Y = sum(1 << x for x in Es if rng.random() < 0.6) or (1 << rng.choice(Es))
        if chi(G, Y) < floor:
            continue
        X = sum(1 << x for x in Ds if rng.random() < 0.8) or (1 << rng.choice(Ds))
        out.append((X, Y))
    return out


def v_covering(G, params, out, samples: int = 100):
    f = _Fails()
    k = int(params["k"])
    w = _w(G)
    total = chi(G)
    if out["kind"] == "anticomplete_pair":
        A, B = _set(out, "A"), _set(out, "B")
        f.need(_anticomplete(G, A, B), "pair is not anticomplete")
        fl = Fraction(total, w ** (8 * k))
        f.need(chi(G, A) >= fl and chi(G, B) >= fl, "pair below w^-8k chi(G)")
        return f
    if out["kind"] != "covering_blockade":
        f.append(f"unexpected kind {out['kind']}")
        return f
    D = [_set(out, f"D{i + 1}") for i in range(k)]
    E = _set(out, "E")
    used = 0
    for X in D + [E]:
        f.need(X and not X & used, "blocks must be nonempty and disjoint")
        used |= X
    for i in range(1, k):
        before = 0
        for j in range(i - 1):
            before |= D[j]
        for v in bits(D[i]):
            f.need(G.adj[v] & D[i - 1], f"vertex {v} of D{i + 1} has no neighbour in D{i}")
            f.need(not G.adj[v] & before, f"vertex {v} of D{i + 1} sees an earlier block")
    for j in range(k - 1):
        f.need(_anticomplete_or_empty(G, E, D[j]), f"E is not anticomplete to D{j + 1}")
    fl = Fraction(total, w ** (6 * k))
    f.need(chi(G, D[-1]) >= fl and chi(G, E) >= fl, "blocks below w^-6k chi(G)")
    Dk = D[-1]
    cD = chi(G, Dk)
    for X, Y in cover_samples(G, Dk, E, w, samples, seed=G.n * 7919 + size(E)):
        cY = chi(G, Y)
        Z = sum(1 << u for u in bits(Dk) if w * chi(G, Y & ~G.adj[u]) < cY)
        f.need(chi(G, Z) < (1 - Fraction(1, w * w)) * cD, "covering bullet fails for a sampled Y")
        if chi(G, X) >= (1 - Fraction(1, w * w)) * cD:
            f.need(any(w * chi(G, Y & ~G.adj[u]) >= cY for u in bits(X)),
                   "sampled X has no vertex missing much of Y")
    return f


def _anticomplete_or_empty(G: Graph, A: VertexSet, B: VertexSet) -> bool:
    return all(not G.adj[a] & B for a in bits(A))


def v_star_step(G, params, out):
    f = _Fails()
    t, w, q = int(params["t"]), int(params["w"]), _fr(params["q"])
    A, B = to_mask(params["A"]), to_mask(params["B"])
    if out["kind"] == "pair_xy":
        X, Y = _set(out, "X"), _set(out, "Y")
        f.need(X & ~A == 0 and Y & ~B == 0, "X, Y leave A, B")
        f.need(omega(G, X) + omega(G, Y) <= omega(G), "omega(X) + omega(Y) above omega(F)")
        f.need(size(A & ~X) < w ** (t + 2), "|A minus X| not below w^(t+2)")
        f.need(chi(G, B & ~Y) < q, "chi(B minus Y) not below q")
    else:
        P, Q = _set(out, "P"), _set(out, "Q")
        f.need(P & ~A == 0 and Q & ~B == 0, "P, Q leave A, B")
        f.need(size(P) == t and G.is_stable(P), "P is not a stable t-set")
        f.need(_anticomplete(G, P, Q), "P, Q not anticomplete")
        f.need(chi(G, Q) >= q / w ** (t * (t + 2)), "chi(Q) below the floor")
    return f


def v_broom_anti(G, params, out):
    f = _Fails()
    k, t = int(params["k"]), int(params["t"])
    d = 6 * k + t * (t + 2) + 9
    w = _w(G)
    floor = Fraction(chi(G), w ** d)
    if out["kind"] == "anticomplete_pair":
        A, B = _set(out, "A"), _set(out, "B")
        f.need(_anticomplete(G, A, B), "pair is not anticomplete")
        f.need(chi(G, A) >= floor and chi(G, B) >= floor, "pair below w^-d chi(G)")
    elif out["kind"] == "broom_pair":
        P, Q = _set(out, "P"), _set(out, "Q")
        f.need(_anticomplete(G, P, Q), "P, Q not anticomplete")
        f.need(size(P) == k + t and find_induced_copy(broom(k, t), G, within=P) is not None,
               "G[P] is not the (k,t)-broom")
        f.need(chi(G, Q) >= floor, "chi(Q) below w^-d chi(G)")
    else:
        f.append(f"unexpected kind {out['kind']}")
    f.need(out["degenerate"] == (floor <= 1), "degenerate label inconsistent with the floor")
    return f


# --- P5 track ------------------------------------------------------------------

def _mixed_edge(G, v, S):
    for x in bits(S & G.adj[v]):
        if G.adj[x] & S & ~G.adj[v]:
            return True
    return False


def v_unmixed(G, params, out):
    f = _Fails()
    A, B = to_mask(params["A"]), to_mask(params["B"])
    if out["kind"] == "p5_witness":
        p = out["data"]["path"]
        sub = to_mask(p)
        f.need(size(sub) == 5 and find_induced_copy(path(5), G, within=sub) is not None,
               "witness is not an induced P5")
    else:
        for v in bits(G.vertices & ~A & ~B):
            f.need(not (_mixed_edge(G, v, A) and _mixed_edge(G, v, B)), f"vertex {v} is mixed on both sides")
    return f


def _terminal_checks(G: Graph, V: VertexSet, A: list[VertexSet], B: VertexSet, D: VertexSet, p: Fraction,
                     w: int, f: _Fails):
    total = chi(G, V)
    allA = 0
    for a in A:
        f.need(not a & allA, "A blocks overlap")
        allA |= a
    f.need((allA | B | D) == V and not (allA & B or allA & D or B & D), "not a partition")
    f.need(_anticomplete_or_empty(G, D, allA), "D sees an A block")
    f.need(all(G.adj[y] & allA for y in bits(B)), "a B vertex has no neighbour in the A blocks")
    for a in A:
        Bi = sum(1 << y for y in bits(B) if G.adj[y] & a)
        f.need(1 <= chi(G, Bi) <= Fraction(total, w ** 4), "chi(B_i) outside [1, w^-4 chi(G)]")
        f.need(chi(G, a) >= p, "an A block is below p")
    rest = V & ~B & ~D
    f.need(sorted(G.components(rest)) == sorted(A), "A blocks are not the components of G minus (B u D)")
    hi = (1 - Fraction(1, w * w)) * total
    f.need(chi(G, D) >= hi, "chi(D) below (1 - w^-2) chi(G)")
    highs = [C for C in G.components(D) if chi(G, C) >= hi]
    for C in highs:
        f.need(all(G.adj[y] & C for y in bits(B)), "a B vertex misses a high component of D")
    # occupation property of terminal partitions in controlled P5-free graphs
    f.need(len(highs) == 1, "D does not have exactly one high component")
    f.need(chi(G, D) >= (1 - Fraction(1, w ** 3)) * total, "chi(D) below (1 - w^-3) chi(G)")


def v_terminal(G, params, out):
    f = _Fails()
    sets = out["sets"]
    A = [to_mask(sets[f"A{i + 1}"]) for i in range(out["data"]["k"])]
    B, D = to_mask(sets["B"]), to_mask(sets["D"])
    V = to_mask(params["V"]) if "V" in params else G.vertices
    _terminal_checks(G, V, A, B, D, _fr(out["data"]["p"]), int(out["data"]["w"]), f)
    return f


def _v_complete(G, out, a_floor: Fraction, b_floor: Fraction, f: _Fails):
    A, B = _set(out, "A"), _set(out, "B")
    f.need(_complete(G, A, B), "pair is not complete")
    f.need(chi(G, A) >= a_floor, "chi(A) below its floor")
    f.need(chi(G, B) >= b_floor, "chi(B) below its floor")


def v_terminal_pair(G, params, out):
    f = _Fails()
    V = to_mask(params["V"]) if "V" in params else G.vertices
    w = max(2, omega(G, V))
    _v_complete(G, out, Fraction(chi(G, V), w ** 4), _fr(params["p"]), f)
    return f


def _colourful(G, eps, J) -> bool:
    c = chi(G, J)
    return all(chi(G, J & ~G.adj[v] & ~(1 << v)) < eps * c for v in bits(J))


def v_colourful_pair(G, params, out):
    f = _Fails()
    eps = _fr(params["eps"])
    w = _w(G)
    _v_complete(G, out, Fraction(chi(G), w ** 32), (1 - eps) * chi(G) / 2, f)
    return f


def v_linanti(G, params, out):
    f = _Fails()
    eps = _fr(params["eps"])
    a = int(params.get("a", 4))
    b = a + 8
    w = _w(G)
    total = chi(G)
    if out["kind"] == "colourful_subgraph":
        J = _set(out, "J")
        f.need(J and _colourful(G, eps, J), "J is not eps-colourful")
        f.need(16 * chi(G, J) >= total, "chi(J) below chi(G)/16")
    elif out["kind"] == "anticomplete_pair":
        P, Q = _set(out, "P"), _set(out, "Q")
        f.need(_anticomplete(G, P, Q), "pair not anticomplete")
        f.need(16 * chi(G, P) >= total and 16 * chi(G, Q) >= eps * total, "anticomplete pair below its floors")
    elif out["kind"] == "complete_pair":
        _v_complete(G, out, Fraction(total, w ** b), eps * total / 256, f)
    else:
        f.append(f"unexpected kind {out['kind']}")
    return f


def v_locdense(G, params, out):
    f = _Fails()
    eps = _fr(params["eps"])
    a = int(params.get("a", 4)) + 10
    w = _w(G)
    total = chi(G)
    if out["kind"] == "colourful_subgraph":
        J = _set(out, "J")
        f.need(J and _colourful(G, eps, J), "J is not eps-colourful")
        f.need(64 * chi(G, J) >= total, "chi(J) below chi(G)/64")
    elif out["kind"] == "complete_pair":
        _v_complete(G, out, Fraction(total, w ** a), eps * total / 256, f)
    else:
        f.append(f"unexpected kind {out['kind']}")
    return f


def v_p5_pair(G, params, out):
    f = _Fails()
    b = max(int(params.get("a", 4)) + 10, 40)
    w = omega(G)
    _v_complete(G, out, Fraction(chi(G), w ** b), Fraction(chi(G), 2 ** b), f)
    return f


def v_p5_chi(G, params, out):
    f = _Fails()
    w = omega(G)
    count = _proper(G, _colour_map(out), f)
    d = 2 * max(int(params.get("a", 4)) + 10, 40)
    e = int(out["data"]["envelope_exponent"])
    # e >= d log w / log log w  <=>  (log2 w)^e >= w^d; use a lower bound on log2 w
    q = 64
    lo = Fraction(_log2_floor_scaled(Fraction(w), q), q)
    f.need(lo ** e >= w ** d, "envelope exponent not certified")
    f.need(count <= w ** e, "colour count above the envelope")
    if w <= 16:
        f.need(count <= 3 ** w, "colour count above 3^w")
    f.need(count >= chi(G), "count below chi(G)")
    return f


VALIDATORS: dict[str, Check] = {
    "gyarfas_vertex": v_gyarfas_vertex,
    "gyarfas_colour": v_gyarfas_colour,
    "min_degree_core": v_min_degree_core,
    "controlled_subgraph": v_controlled,
    "vivid_extension": v_vivid,
    "eh_step": v_eh_step,
    "near_pure_pair": v_near_pure,
    "quasi_pure": v_quasi_pure,
    "tbroom_decompose": v_tbroom_decompose,
    "tbroom_colour": v_tbroom_colour,
    "star_step": v_star_step,
    "covering_blockade": v_covering,
    "broom_anti": v_broom_anti,
    "unmixed": v_unmixed,
    "terminal_partition": v_terminal,
    "terminal_pair": v_terminal_pair,
    "colourful_pair": v_colourful_pair,
    "linanti": v_linanti,
    "locdense": v_locdense,
    "p5_pair": v_p5_pair,
    "p5_chi": v_p5_chi,
}


def validate(lemma: str, G: Graph, params: dict, out: dict) -> list[str]:
    return list(VALIDATORS[lemma](G, params, out))
