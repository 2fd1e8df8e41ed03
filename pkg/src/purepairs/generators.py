"""Seeded graph generators for the hereditary classes the extractors act on."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from .graph import STRUCTURE_CAP, Graph, GraphError, bits
from .oracles import find_induced_copy, is_h_free


class RepairExhausted(RuntimeError):
    """``random_h_free`` ran out of repair rounds; retry with another seed."""


def gnp(n: int, p: float, seed: int) -> Graph:
    if not 0 <= p <= 1:
        raise GraphError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def random_h_free(n: int, p: float, H: Graph, seed: int, max_rounds: int = 2000) -> Graph:
    """Sample ``G(n, p)`` and repair induced copies of ``H`` until none remain.

    Each repair toggles one uniformly chosen vertex pair inside the copy just
    found (an edge of the copy is deleted, a non-edge added).
    """
    if H.n == 0:
        raise GraphError("H must be nonempty")
    rng = random.Random(seed)
    adj = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    for _ in range(max_rounds):
        G = Graph(n, adj)
        phi = find_induced_copy(H, G)
        if phi is None:
            break
        image = sorted(phi.values())
        if len(image) < 2:
            raise RepairExhausted("a single-vertex H cannot be repaired away")
        u, v = rng.sample(image, 2)
        adj[u] ^= 1 << v
        adj[v] ^= 1 << u
    else:
        raise RepairExhausted(f"no {H.n}-vertex-free graph after {max_rounds} rounds (seed {seed})")
    G = Graph(n, adj)
    assert is_h_free(G, H)
    return G


# --- named families -----------------------------------------------------------

def path(k: int) -> Graph:
    return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


def cycle(k: int) -> Graph:
    if k < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def complete(k: int) -> Graph:
    return Graph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def edgeless(k: int) -> Graph:
    return Graph(k, [0] * k)


def broom(k: int, t: int) -> Graph:
    """Path on ``k+1`` vertices with one end leaf blown up to ``t`` independent vertices.

    Labelling: path ``0..k-1``, leaves ``k..k+t-1`` all attached to ``k-1``.
    """
    if k < 1 or t < 1:
        raise GraphError("broom parameters must be at least 1")
    edges = [(i, i + 1) for i in range(k - 1)]
    edges += [(k - 1, k + j) for j in range(t)]
    return Graph.from_edges(k + t, edges)


def double_star(a: int, b: int) -> Graph:
    """``P4`` with its two leaves blown up to ``a`` and ``b`` independent vertices."""
    if a < 1 or b < 1:
        raise GraphError("double star sides must be at least 1")
    edges = [(0, 1)] + [(0, 2 + i) for i in range(a)] + [(1, 2 + a + j) for j in range(b)]
    return Graph.from_edges(2 + a + b, edges)


def complete_multipartite(parts: list[int]) -> Graph:
    if any(p < 1 for p in parts):
        raise GraphError("parts must be nonempty")
    label = []
    for i, p in enumerate(parts):
        label += [i] * p
    n = len(label)
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if label[u] != label[v]])


def join(G1: Graph, G2: Graph) -> Graph:
    n = G1.n + G2.n
    if n > STRUCTURE_CAP:
        raise GraphError(f"join has {n} vertices, above the cap")
    low = G1.vertices
    high = G2.vertices << G1.n
    adj = [row | high for row in G1.adj] + [(row << G1.n) | low for row in G2.adj]
    return Graph(n, adj)


def disjoint_union(G1: Graph, G2: Graph) -> Graph:
    n = G1.n + G2.n
    if n > STRUCTURE_CAP:
        raise GraphError(f"union has {n} vertices, above the cap")
    return Graph(n, list(G1.adj) + [row << G1.n for row in G2.adj])


def c5_join_power(m: int) -> Graph:
    """Join of ``m`` copies of ``C5``: P5-free with chi = 3m and omega = 2m."""
    if m < 1:
        raise GraphError("need at least one copy")
    G = cycle(5)
    for _ in range(m - 1):
        G = join(G, cycle(5))
    return G


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Graph.from_edges(10, outer + inner + spokes)


def wheel(k: int) -> Graph:
    return join(complete(1), cycle(k))


NAMED = {
    "petersen": petersen,
    "c5": lambda: cycle(5),
    "p4": lambda: path(4),
    "p5": lambda: path(5),
    "k3": lambda: complete(3),
    "k4": lambda: complete(4),
    "w5": lambda: wheel(5),
}


# --- spec-driven construction ---------------------------------------------------

FAMILIES = ("gnp", "h_free_rejection", "broom", "path", "cycle", "complete", "edgeless",
            "double_star", "c5_join_power", "complete_multipartite", "named")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> dict:
        return {"family": self.family, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_json(cls, d: dict) -> GeneratorSpec:
        return cls(d["family"], dict(d.get("params", {})), int(d.get("seed", 0)))


def forbidden_graph(name: str) -> Graph:
    """Parse names like ``P5``, ``K3``, ``broom3,2`` or ``tbroom2``."""
    key = name.lower().replace(" ", "")
    if key.startswith("tbroom"):
        return broom(3, int(key[6:]))
    if key.startswith("broom"):
        k, t = key[5:].split(",")
        return broom(int(k), int(t))
    if key[0] == "p":
        return path(int(key[1:]))
    if key[0] == "k":
        return complete(int(key[1:]))
    if key[0] == "c":
        return cycle(int(key[1:]))
    raise GraphError(f"unknown forbidden graph {name!r}")


def build_family(spec: GeneratorSpec) -> Graph:
    f, p = spec.family, spec.params
    try:
        if f == "gnp":
            return gnp(int(p["n"]), float(p["p"]), spec.seed)
        if f == "h_free_rejection":
            H = p["H"] if isinstance(p["H"], Graph) else forbidden_graph(str(p["H"]))
            return random_h_free(int(p["n"]), float(p["p"]), H, spec.seed, int(p.get("max_rounds", 2000)))
        if f == "broom":
            return broom(int(p["k"]), int(p["t"]))
        if f == "path":
            return path(int(p["k"]))
        if f == "cycle":
            return cycle(int(p["k"]))
        if f == "complete":
            return complete(int(p["k"]))
        if f == "edgeless":
            return edgeless(int(p["k"]))
        if f == "double_star":
            return double_star(int(p["a"]), int(p["b"]))
        if f == "c5_join_power":
            return c5_join_power(int(p["m"]))
        if f == "complete_multipartite":
            return complete_multipartite([int(x) for x in p["parts"]])
        if f == "named":
            return NAMED[str(p["name"]).lower()]()
    except KeyError as exc:
        raise GraphError(f"missing or unknown parameter {exc} for family {f!r}") from None
    raise GraphError(f"unknown family {f!r}")


def relabel(G: Graph, perm: list[int]) -> Graph:
    """Graph with vertex ``v`` renamed to ``perm[v]``."""
    adj = [0] * G.n
    for v in range(G.n):
        for u in bits(G.adj[v]):
            adj[perm[v]] |= 1 << perm[u]
    return Graph(G.n, adj)
