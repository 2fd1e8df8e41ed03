"""Exhaustive hard-instance search for the two open colourfulness questions.

For every candidate graph the search scans all induced subgraphs and records
the best ``delta`` any of them achieves.  The worst graph (smallest best
``delta``) is the hard instance reported; nothing here claims a refutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..generators import forbidden_graph
from ..graph import Graph, as_list, bits, to_graph6
from ..oracles import chi, is_h_free

EXHAUSTIVE_CAP = 11
TARGETS = ("clful", "modp5")


class SearchCapExceeded(ValueError):
    pass


@dataclass
class Instance:
    graph6: str
    chi: int
    best_delta: Fraction
    best_F: list[int]

    def to_json(self) -> dict:
        d = self.best_delta
        return {"graph6": self.graph6, "chi": self.chi, "best_delta": f"{d.numerator}/{d.denominator}",
                "best_F": self.best_F}


@dataclass
class SearchResult:
    target: str
    eps: Fraction | None
    instances: list[Instance] = field(default_factory=list)
    rejected: int = 0

    @property
    def exhausted(self) -> bool:
        return not self.instances

    @property
    def worst(self) -> Instance | None:
        if not self.instances:
            return None
        return min(self.instances, key=lambda i: (i.best_delta, i.graph6))

    def to_json(self) -> dict:
        w = self.worst
        return {"target": self.target,
                "eps": None if self.eps is None else f"{self.eps.numerator}/{self.eps.denominator}",
                "status": "exhausted" if self.exhausted else "finding",
                "candidates": len(self.instances), "rejected_not_free": self.rejected,
                "worst": None if w is None else w.to_json(),
                "instances": [i.to_json() for i in self.instances]}


def is_colourful(G: Graph, F: int, eps: Fraction) -> bool:
    c = chi(G, F)
    return all(chi(G, F & ~G.adj[v] & ~(1 << v)) < eps * c for v in bits(F))


def _delta_clful(G: Graph, F: int, total: int, eps: Fraction) -> Fraction | None:
    if not is_colourful(G, F, eps):
        return None
    return Fraction(chi(G, F), total)


def _delta_modp5(G: Graph, F: int, total: int) -> Fraction:
    cF = chi(G, F)
    worst = min(Fraction(chi(G, G.adj[v] & F), cF) for v in bits(F))
    return min(Fraction(cF, total), worst)


def best_delta(G: Graph, target: str, eps: Fraction | None = None) -> tuple[Fraction, int]:
    """Largest ``delta`` achieved by an induced subgraph, and the subgraph."""
    if G.n > EXHAUSTIVE_CAP:
        raise SearchCapExceeded(f"exhaustive search is capped at {EXHAUSTIVE_CAP} vertices")
    total = chi(G)
    best, arg = Fraction(0), 0
    for F in range(1, 1 << G.n):
        if target == "clful":
            d = _delta_clful(G, F, total, eps)
        else:
            d = _delta_modp5(G, F, total)
        if d is not None and (d > best or (d == best and arg == 0)):
            best, arg = d, F
    return best, arg


def search_counterexample(target: str, graphs, eps: Fraction | None = None, forest: str = "P5") -> SearchResult:
    if target not in TARGETS:
        raise ValueError(f"target must be one of {TARGETS}")
    if target == "clful" and (eps is None or not 0 < eps < 1):
        raise ValueError("clful search needs eps in (0, 1)")
    T = forbidden_graph(forest)
    res = SearchResult(target, eps)
    for G in graphs:
        if G.n == 0 or chi(G) == 0:
            continue
        if not is_h_free(G, T):
            res.rejected += 1
            continue
        d, F = best_delta(G, target, eps)
        res.instances.append(Instance(to_graph6(G), chi(G), d, as_list(F)))
    return res
