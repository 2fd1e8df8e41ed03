"""Immutable simple graphs over vertices ``0..n-1`` with bitmask adjacency.

Vertex sets are plain ``int`` bitmasks (bit ``v`` set iff ``v`` is in the
set).  Every witness produced elsewhere in the package stores masks in the
labelling of the graph it was extracted from, so certificates compose across
nested extractions without relabelling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

VertexSet = int

STRUCTURE_CAP = 40


class GraphError(ValueError):
    pass


def bits(mask: VertexSet) -> Iterator[int]:
    """Yield the vertices of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> VertexSet:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def lowest(mask: VertexSet) -> int:
    if not mask:
        raise GraphError("empty vertex set has no lowest vertex")
    return (mask & -mask).bit_length() - 1


def size(mask: VertexSet) -> int:
    return bin(mask).count("1")


def as_list(mask: VertexSet) -> list[int]:
    return list(bits(mask))


@dataclass(frozen=True)
class PairStatus:
    kind: str  # "complete" | "anticomplete" | "mixed"
    edge: tuple[int, int] | None = None
    non_edge: tuple[int, int] | None = None


class Graph:
    """A finite simple graph; adjacency row ``adj[v]`` is a bitmask."""

    __slots__ = ("n", "adj", "_cache")

    def __init__(self, n: int, adj: Sequence[int], *, cap: int = STRUCTURE_CAP):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        if n > cap:
            raise GraphError(f"graph has {n} vertices, above the cap of {cap}")
        if len(adj) != n:
            raise GraphError("adjacency rows do not match vertex count")
        full = (1 << n) - 1
        for v, row in enumerate(adj):
            if row & ~full:
                raise GraphError(f"row {v} references vertices outside 0..{n - 1}")
            if row >> v & 1:
                raise GraphError(f"self-loop at {v}")
            for u in bits(row):
                if not adj[u] >> v & 1:
                    raise GraphError(f"adjacency not symmetric at {u},{v}")
        self.n = n
        self.adj = tuple(adj)
        # per-instance memo tables for the oracles (chi table, omega memo, ...)
        self._cache: dict = {}

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], *, cap: int = STRUCTURE_CAP) -> Graph:
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj, cap=cap)

    @property
    def vertices(self) -> VertexSet:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_count(self) -> int:
        return sum(size(r) for r in self.adj) // 2

    def degree(self, v: int, within: VertexSet | None = None) -> int:
        row = self.adj[v]
        return size(row if within is None else row & within)

    def neighbours(self, v: int, within: VertexSet | None = None) -> VertexSet:
        return self.adj[v] if within is None else self.adj[v] & within

    def neighbourhood(self, S: VertexSet) -> VertexSet:
        """Vertices outside ``S`` with a neighbour in ``S``."""
        out = 0
        for v in bits(S):
            out |= self.adj[v]
        return out & ~S

    def common_neighbours(self, S: VertexSet, within: VertexSet | None = None) -> VertexSet:
        """Vertices (outside ``S``) complete to ``S``."""
        out = self.vertices if within is None else within
        for v in bits(S):
            out &= self.adj[v]
        return out & ~S

    def check_subset(self, S: VertexSet) -> None:
        if S < 0 or S & ~self.vertices:
            raise GraphError("vertex set is not a subset of V(G)")

    def induced(self, S: VertexSet) -> tuple[Graph, list[int]]:
        """Return ``G[S]`` relabelled to ``0..|S|-1`` and the map back to ``G``."""
        self.check_subset(S)
        labels = as_list(S)
        index = {v: i for i, v in enumerate(labels)}
        adj = []
        for v in labels:
            row = 0
            for u in bits(self.adj[v] & S):
                row |= 1 << index[u]
            adj.append(row)
        return Graph(len(labels), adj, cap=max(STRUCTURE_CAP, len(labels))), labels

    def complement(self) -> Graph:
        full = self.vertices
        return Graph(self.n, [full & ~row & ~(1 << v) for v, row in enumerate(self.adj)],
                     cap=max(STRUCTURE_CAP, self.n))

    def components(self, S: VertexSet | None = None) -> list[VertexSet]:
        """Connected components of ``G[S]``, ordered by lowest vertex."""
        S = self.vertices if S is None else S
        self.check_subset(S)
        out = []
        rest = S
        while rest:
            frontier = comp = rest & -rest
            while frontier:
                grow = 0
                for v in bits(frontier):
                    grow |= self.adj[v]
                frontier = grow & rest & ~comp
                comp |= frontier
            out.append(comp)
            rest &= ~comp
        return out

    def component_of(self, v: int, S: VertexSet) -> VertexSet:
        for comp in self.components(S):
            if comp >> v & 1:
                return comp
        raise GraphError(f"vertex {v} not in the given set")

    def is_connected(self, S: VertexSet | None = None) -> bool:
        S = self.vertices if S is None else S
        return S == 0 or len(self.components(S)) == 1

    def is_clique(self, S: VertexSet) -> bool:
        return all(S & ~self.adj[v] & ~(1 << v) == 0 for v in bits(S))

    def is_stable(self, S: VertexSet) -> bool:
        return all(self.adj[v] & S == 0 for v in bits(S))

    def is_complete(self) -> bool:
        return self.is_clique(self.vertices)

    def pair_status(self, A: VertexSet, B: VertexSet) -> PairStatus:
        self.check_subset(A | B)
        if not A or not B:
            raise GraphError("pair sides must be nonempty")
        if A & B:
            raise GraphError("pair sides overlap")
        edge = non_edge = None
        for a in bits(A):
            hit = self.adj[a] & B
            if hit and edge is None:
                edge = (a, lowest(hit))
            miss = B & ~self.adj[a]
            if miss and non_edge is None:
                non_edge = (a, lowest(miss))
            if edge and non_edge:
                return PairStatus("mixed", edge, non_edge)
        return PairStatus("anticomplete" if edge is None else "complete")

    def is_complete_to(self, A: VertexSet, B: VertexSet) -> bool:
        return all(B & ~self.adj[a] == 0 for a in bits(A))

    def is_anticomplete_to(self, A: VertexSet, B: VertexSet) -> bool:
        return all(self.adj[a] & B == 0 for a in bits(A))

    def is_mixed_on(self, v: int, S: VertexSet) -> bool:
        if S >> v & 1:
            raise GraphError(f"vertex {v} lies in the set it is tested against")
        row = self.adj[v]
        return bool(row & S) and bool(S & ~row)

    def lowest_non_edge(self, S: VertexSet | None = None) -> tuple[int, int] | None:
        S = self.vertices if S is None else S
        for u in bits(S):
            miss = S & ~self.adj[u] & ~((1 << (u + 1)) - 1)
            if miss:
                return u, lowest(miss)
        return None

    def lowest_edge(self, S: VertexSet | None = None) -> tuple[int, int] | None:
        S = self.vertices if S is None else S
        for u in bits(S):
            hit = S & self.adj[u] & ~((1 << (u + 1)) - 1)
            if hit:
                return u, lowest(hit)
        return None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    return Graph.from_edges(n, edges)


# --- text formats -----------------------------------------------------------

def to_edgelist(G: Graph) -> str:
    lines = [f"{G.n} {G.edge_count()}"]
    lines += [f"{u} {v}" for u, v in G.edges()]
    return "\n".join(lines) + "\n"


def from_edgelist(text: str) -> Graph:
    tokens = text.split()
    if len(tokens) < 2:
        raise GraphError("edge list needs a header line 'n m'")
    n, m = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != 2 * m:
        raise GraphError(f"header announces {m} edges, found {len(body) / 2:g}")
    edges = [(int(body[2 * i]), int(body[2 * i + 1])) for i in range(m)]
    return Graph.from_edges(n, edges)


def _graph6_size(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])
    raise GraphError("graph too large for graph6")


def to_graph6(G: Graph) -> str:
    out = bytearray(_graph6_size(G.n))
    bitstream = [1 if G.has_edge(i, j) else 0 for j in range(1, G.n) for i in range(j)]
    bitstream += [0] * (-len(bitstream) % 6)
    for k in range(0, len(bitstream), 6):
        chunk = 0
        for b in bitstream[k:k + 6]:
            chunk = chunk << 1 | b
        out.append(chunk + 63)
    return out.decode("ascii")


def from_graph6(line: str, *, cap: int = STRUCTURE_CAP) -> Graph:
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = [c - 63 for c in s.encode("ascii")]
    if not data or any(not 0 <= c < 64 for c in data):
        raise GraphError("malformed graph6 string")
    if data[0] < 63:
        n, data = data[0], data[1:]
    elif len(data) >= 4 and data[1] < 63:
        n, data = data[1] << 12 | data[2] << 6 | data[3], data[4:]
    else:
        raise GraphError("graph6 sizes above 258047 are not supported")
    need = (n * (n - 1) // 2 + 5) // 6
    if len(data) != need:
        raise GraphError(f"graph6 body has {len(data)} bytes, expected {need}")
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if data[k // 6] >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    return Graph(n, adj, cap=cap)


def read_graphs(text: str) -> list[Graph]:
    """Parse either one edge list or a stream of graph6 lines."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        return []
    first = lines[0].split()
    if len(first) == 2 and all(tok.lstrip("-").isdigit() for tok in first):
        return [from_edgelist(text)]
    return [from_graph6(ln) for ln in lines]
