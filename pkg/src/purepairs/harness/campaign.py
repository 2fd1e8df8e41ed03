"""Seeded verification campaigns over generated graph corpora.

A campaign draws graphs from generator templates, runs one extraction
operation per graph, and re-checks every returned certificate with the
independent validators.  Records are plain JSON; any record can be replayed
from its seed and generator spec alone.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from ..extract import basic, broom as xbroom, p5 as xp5
from ..extract.p5 import P5Params
from ..generators import GeneratorSpec, RepairExhausted, build_family, forbidden_graph
from ..graph import Graph, VertexSet, as_list, bits, lowest, size, to_graph6
from ..oracles import SUBMEASURES, chi, omega
from ..outcomes import ExtractionError, Outcome, fraction_str, parse_fraction
from .validate import validate

SCHEMA_VERSION = 1
SEED_STRIDE = 1_000_003
WORKERS_ENV = "PUREPAIRS_WORKERS"


class Skip(Exception):
    """The sampled graph does not meet the operation's preconditions."""


class ConfigError(ValueError):
    pass


# --- runners ----------------------------------------------------------------------

def _eps(params: dict, default: str) -> Fraction:
    params.setdefault("eps", default)
    return parse_fraction(params["eps"])


def _need_edge(G: Graph) -> None:
    if G.lowest_edge() is None:
        raise Skip("edgeless graph")


def _need_non_complete(G: Graph) -> None:
    if G.lowest_non_edge() is None:
        raise Skip("complete graph")


def r_gyarfas_vertex(G, params, seed):
    if chi(G) < 2:
        raise Skip("chromatic number below 2")
    return basic.gyarfas_vertex(G, int(params.get("k", 5)))


def r_gyarfas_colour(G, params, seed):
    return basic.gyarfas_colour_bound(G, int(params.get("k", 5)))


def r_min_degree_core(G, params, seed):
    p = int(params["p"]) if "p" in params else 1 + seed % 3
    if chi(G) <= p:
        raise Skip("chromatic number at most p")
    params["p"] = p
    return basic.min_degree_core(G, p)


def r_controlled(G, params, seed):
    if "q" not in params:
        params["q"] = max(2, omega(G)) + seed % 2
    return basic.controlled_subgraph(G, parse_fraction(params["q"]))


def r_vivid_extension(G, params, seed):
    """One randomised attempt to grow a long ``(1/w)``-vivid blockade."""
    rng = random.Random(seed)
    w = max(1, omega(G))
    eps = Fraction(1, w)
    free = G.vertices
    blocks: list[VertexSet] = []
    while free:
        grown = False
        for _ in range(20):
            pool = list(bits(free))
            pick = rng.sample(pool, min(len(pool), rng.randint(1, 3)))
            B = sum(1 << v for v in pick)
            if basic.vivid_violation(G, blocks + [B], eps) is None:
                blocks.append(B)
                free &= ~B
                grown = True
                break
        if not grown:
            break
    out = basic.vivid_clique(G, blocks, eps)
    out.data["blocks"] = [as_list(b) for b in blocks]
    out.data["eps"] = eps
    return out


def _anchors(G: Graph, h: int, seed: int) -> list[VertexSet]:
    rng = random.Random(seed)
    order = list(range(G.n))
    rng.shuffle(order)
    anchors = [0] * h
    for i, v in enumerate(order):
        anchors[i % h] |= 1 << v
    return anchors


def r_eh_step(G, params, seed):
    H = forbidden_graph(params.get("H", "P4"))
    if G.n < H.n:
        raise Skip("fewer vertices than H")
    anchors = _anchors(G, H.n, seed)
    params["anchors"] = [as_list(a) for a in anchors]
    return basic.eh_step(G, H, _eps(params, "1/2"), SUBMEASURES[params.get("mu", "card")], anchors)


def r_near_pure(G, params, seed):
    H = forbidden_graph(params.get("H", "P4"))
    if G.n < 2:
        raise Skip("fewer than two vertices")
    return basic.near_pure_pair(G, H, _eps(params, "1/2"), SUBMEASURES[params.get("mu", "card")])


def r_quasi_pure(G, params, seed):
    H = forbidden_graph(params.get("H", "P4"))
    w = omega(G)
    if "eps" not in params:
        params["eps"] = fraction_str(Fraction(1, max(2, w)))
    eps = parse_fraction(params["eps"])
    if w >= 1 and eps > Fraction(1, w):
        raise Skip("eps above 1/omega")
    return basic.quasi_pure(G, H, eps, SUBMEASURES[params.get("mu", "card")])


def r_tbroom_decompose(G, params, seed):
    _need_edge(G)
    return xbroom.tbroom_decompose(G, int(params.get("t", 2)))


def r_tbroom_colour(G, params, seed):
    return xbroom.tbroom_colour(G, int(params.get("t", 2)))


def r_covering(G, params, seed):
    _need_non_complete(G)
    return xbroom.covering_blockade(G, int(params.get("k", 1)), eager=bool(params.get("eager", False)))


def r_broom_anti(G, params, seed):
    _need_non_complete(G)
    _need_edge(G)
    return xbroom.broom_or_anticomplete(G, int(params.get("k", 3)), int(params.get("t", 1)),
                                        eager=bool(params.get("eager", True)))


def r_unmixed(G, params, seed):
    """Anticomplete connected pair grown from a seeded non-edge."""
    rng = random.Random(seed)
    non_edges = [(u, v) for u in range(G.n) for v in range(u + 1, G.n) if not G.has_edge(u, v)]
    if not non_edges:
        raise Skip("complete graph")
    a, b = rng.choice(non_edges)
    A = G.component_of(a, G.vertices & ~G.adj[b] & ~(1 << b))
    B = G.component_of(b, G.vertices & ~G.neighbourhood(A) & ~A)
    params["A"], params["B"] = as_list(A), as_list(B)
    return xp5.assert_unmixed(G, A, B)


def _controlled_host(G: Graph, params: dict) -> VertexSet:
    w = omega(G)
    if w < 2:
        raise Skip("edgeless graph")
    J = basic.controlled_subgraph(G, w)["J"]
    params["V"] = as_list(J)
    return J


def r_terminal(G, params, seed):
    J = _controlled_host(G, params)
    return xp5.terminal_partition(G, parse_fraction(params.setdefault("p", 1)), within=J)


def r_terminal_pair(G, params, seed):
    J = _controlled_host(G, params)
    p = parse_fraction(params.setdefault("p", 1))
    try:
        return xp5.terminal_complete_pair(G, p, within=J)
    except ExtractionError as exc:
        if "supplier" in str(exc):
            raise Skip(f"anticomplete supplier has nothing to offer: {exc}") from None
        raise


def r_colourful_pair(G, params, seed):
    eps = _eps(params, "3/4")
    if chi(G) < 2:
        raise Skip("chromatic number below 2")
    if xp5.colourful_violation(G, eps, G.vertices) is not None:
        raise Skip("not eps-colourful")
    return xp5.colourful_complete_pair(G, eps)


def _params(params: dict) -> P5Params:
    return P5Params(int(params.get("a", 4)))


def r_linanti(G, params, seed):
    _need_edge(G)
    return xp5.linanti(G, _eps(params, "1/4"), _params(params))


def r_locdense(G, params, seed):
    _need_edge(G)
    return xp5.locdense(G, _eps(params, "1/4"), _params(params))


def r_p5_pair(G, params, seed):
    _need_edge(G)
    return xp5.p5_complete_pair(G, _params(params))


def r_p5_chi(G, params, seed):
    if omega(G) < 3:
        raise Skip("clique number below 3")
    return xp5.p5_chi_bound(G, _params(params))


def _tmpl(family: str, **params) -> dict:
    return {"family": family, "params": params}


P5_FREE = [_tmpl("h_free_rejection", H="P5", p=p) for p in (0.3, 0.5, 0.7)]
P5_MIXED = P5_FREE + [_tmpl("c5_join_power", m=1), _tmpl("c5_join_power", m=2), _tmpl("c5_join_power", m=3)]
GNP = [_tmpl("gnp", p=p) for p in (0.25, 0.5, 0.75)]
# "$name" values are filled in from the campaign parameters
H_FREE = [_tmpl("h_free_rejection", H="$H", p=p) for p in (0.3, 0.5, 0.7)]
TBROOM_FREE = [_tmpl("h_free_rejection", H="$tbroom", p=p) for p in (0.3, 0.5, 0.7)]


def _fill(template: dict, params: dict) -> dict:
    out = {}
    for k, v in template.get("params", {}).items():
        if isinstance(v, str) and v.startswith("$"):
            name = v[1:]
            v = f"tbroom{params.get('t', 2)}" if name == "tbroom" else params[name]
        out[k] = v
    return {"family": template["family"], "params": out}


@dataclass(frozen=True)
class LemmaEntry:
    runner: Callable[[Graph, dict, int], Outcome]
    generators: list
    params: dict = field(default_factory=dict)


REGISTRY: dict[str, LemmaEntry] = {
    "gyarfas_vertex": LemmaEntry(r_gyarfas_vertex, P5_FREE),
    "gyarfas_colour": LemmaEntry(r_gyarfas_colour, P5_FREE),
    "min_degree_core": LemmaEntry(r_min_degree_core, P5_FREE),
    "controlled_subgraph": LemmaEntry(r_controlled, P5_FREE),
    "vivid_extension": LemmaEntry(r_vivid_extension, GNP),
    "eh_step": LemmaEntry(r_eh_step, H_FREE, {"H": "P4"}),
    "near_pure_pair": LemmaEntry(r_near_pure, H_FREE, {"H": "P4"}),
    "quasi_pure": LemmaEntry(r_quasi_pure, H_FREE, {"H": "P4"}),
    "tbroom_decompose": LemmaEntry(r_tbroom_decompose, TBROOM_FREE, {"t": 2}),
    "tbroom_colour": LemmaEntry(r_tbroom_colour, TBROOM_FREE, {"t": 2}),
    "covering_blockade": LemmaEntry(r_covering, GNP, {"k": 1}),
    "broom_anti": LemmaEntry(r_broom_anti, GNP + [_tmpl("c5_join_power", m=2)], {"k": 3, "t": 1}),
    "unmixed": LemmaEntry(r_unmixed, P5_FREE),
    "terminal_partition": LemmaEntry(r_terminal, P5_MIXED),
    "terminal_pair": LemmaEntry(r_terminal_pair, P5_MIXED),
    "colourful_pair": LemmaEntry(r_colourful_pair, P5_MIXED + [_tmpl("complete", k=4)]),
    "linanti": LemmaEntry(r_linanti, P5_MIXED),
    "locdense": LemmaEntry(r_locdense, P5_MIXED),
    "p5_pair": LemmaEntry(r_p5_pair, P5_MIXED),
    "p5_chi": LemmaEntry(r_p5_chi, P5_MIXED),
}


# --- config and report ------------------------------------------------------------

@dataclass
class CampaignConfig:
    lemma: str
    samples: int = 100
    seed: int = 0
    max_n: int = 10
    min_n: int = 4
    generators: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    workers: int | None = None
    out: str | None = None

    def __post_init__(self):
        if self.lemma not in REGISTRY:
            raise ConfigError(f"unknown lemma id {self.lemma!r}; known: {', '.join(sorted(REGISTRY))}")
        if self.samples < 0:
            raise ConfigError("samples must be nonnegative")
        if not 1 <= self.min_n <= self.max_n <= 16:
            raise ConfigError("vertex caps must satisfy 1 <= min_n <= max_n <= 16")
        self.params = {**REGISTRY[self.lemma].params, **self.params}
        if "eps" in self.params:
            e = parse_fraction(self.params["eps"])
            if not 0 < e < 1:
                raise ConfigError("eps must lie in (0, 1)")
            self.params["eps"] = fraction_str(e)
        if not self.generators:
            self.generators = [_fill(g, self.params) for g in REGISTRY[self.lemma].generators]

    def to_json(self) -> dict:
        return {"lemma": self.lemma, "samples": self.samples, "seed": self.seed, "max_n": self.max_n,
                "min_n": self.min_n, "generators": self.generators, "params": self.params}

    @classmethod
    def from_json(cls, d: dict) -> CampaignConfig:
        known = {"lemma", "samples", "seed", "max_n", "min_n", "generators", "params", "workers", "out"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        if "lemma" not in d:
            raise ConfigError("config needs a lemma id")
        return cls(**d)


@dataclass
class CampaignReport:
    config: dict
    records: list[dict]
    wall_clock: float = 0.0

    @property
    def counts(self) -> dict[str, int]:
        c = {"pass": 0, "fail": 0, "skipped": 0}
        for r in self.records:
            c[r["status"]] += 1
        c["samples"] = len(self.records)
        return c

    @property
    def ok(self) -> bool:
        return self.counts["fail"] == 0

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "config": self.config, "summary": self.counts,
                "wall_clock": round(self.wall_clock, 3), "records": self.records}

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)


def sample_seed(seed: int, index: int) -> int:
    return seed * SEED_STRIDE + index


def sample_spec(cfg: dict, index: int) -> dict:
    """Generator spec (with ``n`` and seed filled in) for sample ``index``."""
    gens = cfg["generators"]
    tmpl = gens[index % len(gens)]
    s = sample_seed(cfg["seed"], index)
    params = dict(tmpl.get("params", {}))
    if tmpl["family"] in ("gnp", "h_free_rejection") and "n" not in params:
        params["n"] = cfg["min_n"] + s % (cfg["max_n"] - cfg["min_n"] + 1)
    return {"family": tmpl["family"], "params": params, "seed": s}


def outcome_fingerprint(outcome: dict | None) -> str:
    return json.dumps(outcome, sort_keys=True, separators=(",", ":"))


def run_sample(lemma: str, spec: dict, base_params: dict, index: int) -> dict:
    seed = spec["seed"]
    rec: dict[str, Any] = {"index": index, "lemma": lemma, "seed": seed, "generator": spec}
    try:
        G = build_family(GeneratorSpec.from_json(spec))
    except RepairExhausted as exc:
        rec.update(status="skipped", reason=f"generator: {exc}")
        return rec
    g6 = to_graph6(G)
    rec["graph6"] = g6
    rec["graph_hash"] = hashlib.sha256(g6.encode()).hexdigest()[:16]
    params = dict(base_params)
    trace: list[str] = []
    try:
        out = REGISTRY[lemma].runner(G, params, seed)
    except Skip as exc:
        rec.update(status="skipped", reason=str(exc), params=params)
        return rec
    except ExtractionError as exc:
        rec.update(status="fail", params=params, error=f"{type(exc).__name__}: {exc}",
                   witness=json.loads(json.dumps(exc.witness, default=str)), trace=list(exc.trace))
        return rec
    js = out.to_json()
    failures = validate(lemma, G, params, js)
    rec.update(params=params, kind=out.kind, margins=js["margins"], degenerate=out.degenerate, outcome=js,
               status="fail" if failures else "pass")
    if failures:
        rec["failures"] = failures
        rec["trace"] = out.trace + trace
    return rec


def _run_chunk(args):
    lemma, cfg, indices = args
    return [run_sample(lemma, sample_spec(cfg, i), cfg["params"], i) for i in indices]


def worker_count(explicit: int | None = None) -> int:
    if explicit:
        return max(1, int(explicit))
    return max(1, int(os.environ.get(WORKERS_ENV, "1")))


def run_campaign(config: CampaignConfig, workers: int | None = None) -> CampaignReport:
    start = time.perf_counter()
    cfg = config.to_json()
    n_workers = worker_count(workers or config.workers)
    indices = list(range(config.samples))
    if n_workers == 1 or len(indices) < 2:
        records = _run_chunk((config.lemma, cfg, indices))
    else:
        step = max(1, len(indices) // (n_workers * 4))
        chunks = [(config.lemma, cfg, indices[i:i + step]) for i in range(0, len(indices), step)]
        records = []
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            for part in pool.map(_run_chunk, chunks):
                records.extend(part)
    report = CampaignReport(cfg, records, time.perf_counter() - start)
    if config.out:
        report.write(config.out)
    return report


@dataclass
class ReplayResult:
    record: dict
    identical: bool
    detail: str = ""

    @property
    def trace(self) -> list[str]:
        return self.record.get("trace", [])


def replay(record: dict, report_schema: int = SCHEMA_VERSION, with_trace: bool = True) -> ReplayResult:
    """Re-run one record from its lemma, seed and generator spec and compare outcomes."""
    if report_schema != SCHEMA_VERSION:
        return ReplayResult({}, False, f"schema version {report_schema} differs from {SCHEMA_VERSION}")
    base = {k: v for k, v in record.get("params", {}).items()}
    lemma = record["lemma"]
    fresh = run_sample(lemma, record["generator"], _base_params(lemma, base), record["index"])
    if with_trace and "trace" not in fresh and fresh.get("status") != "skipped":
        fresh["trace"] = _full_trace(lemma, record)
    same = all(outcome_fingerprint(fresh.get(k)) == outcome_fingerprint(record.get(k))
               for k in ("status", "kind", "outcome", "graph6", "margins", "degenerate", "failures"))
    return ReplayResult(fresh, same, "" if same else "outcome fields differ")


_DERIVED_KEYS = {"anchors", "A", "B", "V"}


def _base_params(lemma: str, params: dict) -> dict:
    # parameters a runner derives from the sampled graph are recomputed, not fed back
    return {k: v for k, v in params.items() if k not in _DERIVED_KEYS}


def _full_trace(lemma: str, record: dict) -> list[str]:
    G = build_family(GeneratorSpec.from_json(record["generator"]))
    params = _base_params(lemma, record.get("params", {}))
    try:
        return REGISTRY[lemma].runner(G, params, record["seed"]).trace
    except (Skip, ExtractionError) as exc:
        return [str(exc)]


def load_report(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)
