"""Command line front end: oracles, generators, extractors and campaigns."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .extract import basic, broom as xbroom, p5 as xp5
from .generators import FAMILIES, GeneratorSpec, build_family, forbidden_graph
from .graph import Graph, GraphError, as_list, read_graphs, to_edgelist, to_graph6, to_mask
from .oracles import (SUBMEASURES, chromatic_number, degeneracy, find_induced_copy, max_clique, max_stable)
from .outcomes import ExtractionError, fraction_str, parse_fraction


def _read_input(path: str | None) -> list[Graph]:
    text = sys.stdin.read() if path in (None, "-") else open(path).read()
    graphs = read_graphs(text)
    if not graphs:
        raise GraphError("no graph in input")
    return graphs


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=1, sort_keys=True, default=str)
    sys.stdout.write("\n")


def _mask(text: str | None) -> int:
    if not text:
        return 0
    return to_mask(int(x) for x in text.split(",") if x.strip())


def _masks(text: str) -> list[int]:
    return [_mask(part) for part in text.split(";")]


# --- oracle ---------------------------------------------------------------------

def _oracle_value(name: str, G: Graph, pattern: str | None) -> dict:
    if name == "chi":
        k, col = chromatic_number(G)
        return {"value": k, "witness": {str(v): c for v, c in sorted(col.colour.items())}}
    if name == "omega":
        K = max_clique(G)
        return {"value": len(as_list(K)), "witness": as_list(K)}
    if name == "alpha":
        S = max_stable(G)
        return {"value": len(as_list(S)), "witness": as_list(S)}
    if name == "degeneracy":
        d, order = degeneracy(G)
        return {"value": d, "witness": order}
    if pattern is None:
        raise GraphError("copy needs --pattern (e.g. P5, K3, broom3,2)")
    phi = find_induced_copy(forbidden_graph(pattern), G)
    return {"value": phi is not None, "witness": None if phi is None else [phi[i] for i in sorted(phi)]}


def cmd_oracle(args) -> int:
    results = [_oracle_value(args.which, G, args.pattern) for G in _read_input(args.input)]
    _emit(results[0] if len(results) == 1 else results)
    return 0


# --- gen ------------------------------------------------------------------------

def _parse_value(v: str):
    if "," in v:
        return [_parse_value(x) for x in v.split(",")]
    for cast in (int, float):
        try:
            return cast(v)
        except ValueError:
            pass
    return v


def cmd_gen(args) -> int:
    params = {}
    for item in args.params:
        if "=" not in item:
            raise GraphError(f"parameter {item!r} must look like key=value")
        k, v = item.split("=", 1)
        params[k] = _parse_value(v)
    if args.family == "complete_multipartite" and not isinstance(params.get("parts"), list):
        params["parts"] = [params["parts"]]
    G = build_family(GeneratorSpec(args.family, params, args.seed))
    text = to_graph6(G) + "\n" if args.format == "graph6" else to_edgelist(G)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


# --- extract --------------------------------------------------------------------

def _p5params(args) -> xp5.P5Params:
    return xp5.P5Params(args.a)


def _eps(args, default: str) -> Fraction:
    return parse_fraction(args.eps or default)


EXTRACT_OPS = {
    "gyarfas-vertex": lambda G, a: basic.gyarfas_vertex(G, a.k or 5),
    "gyarfas-colour": lambda G, a: basic.gyarfas_colour_bound(G, a.k or 5),
    "min-degree-core": lambda G, a: basic.min_degree_core(G, int(a.p or 1)),
    "controlled": lambda G, a: basic.controlled_subgraph(G, parse_fraction(a.q or "2")),
    "vivid": lambda G, a: basic.vivid_clique(G, _masks(a.blocks), _eps(a, "1/2")),
    "eh-step": lambda G, a: basic.eh_step(G, forbidden_graph(a.H), _eps(a, "1/2"), SUBMEASURES[a.mu],
                                          _masks(a.anchors)),
    "near-pure": lambda G, a: basic.near_pure_pair(G, forbidden_graph(a.H), _eps(a, "1/2"), SUBMEASURES[a.mu]),
    "quasi-pure": lambda G, a: basic.quasi_pure(G, forbidden_graph(a.H), _eps(a, "1/2"), SUBMEASURES[a.mu]),
    "tbroom-decompose": lambda G, a: xbroom.tbroom_decompose(G, a.t),
    "tbroom-colour": lambda G, a: xbroom.tbroom_colour(G, a.t),
    "star-step": lambda G, a: xbroom.star_step(G, _mask(a.A), _mask(a.B), a.t, parse_fraction(a.q or "1"),
                                               a.w or 2),
    "covering-blockade": lambda G, a: xbroom.covering_blockade(G, a.k or 1, eager=not a.full),
    "broom-anti": lambda G, a: xbroom.broom_or_anticomplete(G, a.k or 3, a.t, eager=not a.full),
    "unmixed": lambda G, a: xp5.assert_unmixed(G, _mask(a.A), _mask(a.B)),
    "colourful-check": lambda G, a: xp5.colourful_check(G, _eps(a, "1/2")),
    "terminal": lambda G, a: xp5.terminal_partition(G, parse_fraction(a.p or "1")),
    "terminal-pair": lambda G, a: xp5.terminal_complete_pair(G, parse_fraction(a.p or "1")),
    "mid": lambda G, a: xp5.nonneighbour_cover(G, _mask(a.P), _mask(a.Q), _p5params(a)),
    "colourful-pair": lambda G, a: xp5.colourful_complete_pair(G, _eps(a, "1/2")),
    "linanti": lambda G, a: xp5.linanti(G, _eps(a, "1/4"), _p5params(a)),
    "locdense": lambda G, a: xp5.locdense(G, _eps(a, "1/4"), _p5params(a)),
    "p5-pair": lambda G, a: xp5.p5_complete_pair(G, _p5params(a)),
    "p5-chi": lambda G, a: xp5.p5_chi_bound(G, _p5params(a)),
}


def cmd_extract(args) -> int:
    G = _read_input(args.input)[0]
    try:
        out = EXTRACT_OPS[args.op](G, args)
    except ExtractionError as exc:
        _emit({"error": str(exc), "type": type(exc).__name__, "witness": exc.witness, "trace": exc.trace})
        return 1
    payload = {**out.to_json(), "trace": out.trace}
    if args.json:
        _emit(payload)
    else:
        print(out.kind, json.dumps(payload["sets"]))
    return 0


# --- harness --------------------------------------------------------------------

def cmd_verify(args) -> int:
    from .harness.campaign import CampaignConfig, run_campaign
    if args.config:
        with open(args.config) as fh:
            raw = json.load(fh)
        raw.setdefault("lemma", args.lemma)
        if raw["lemma"] != args.lemma:
            raise GraphError(f"config is for {raw['lemma']!r}, not {args.lemma!r}")
        cfg = CampaignConfig.from_json(raw)
    else:
        params = {}
        for item in args.param:
            k, v = item.split("=", 1)
            params[k] = _parse_value(v) if k != "eps" else v
        cfg = CampaignConfig(args.lemma, samples=args.samples, seed=args.seed, max_n=args.max_n,
                             min_n=min(args.min_n, args.max_n), params=params)
    if args.out:
        cfg.out = args.out
    report = run_campaign(cfg, workers=args.workers)
    c = report.counts
    print(f"{cfg.lemma}: {c['pass']} pass, {c['fail']} fail, {c['skipped']} skipped of {c['samples']}"
          f" ({report.wall_clock:.1f}s)")
    for rec in report.records:
        if rec["status"] == "fail":
            print(f"  fail #{rec['index']} seed={rec['seed']} {rec.get('error') or rec.get('failures')}")
    return 0 if report.ok else 1


def cmd_search(args) -> int:
    from .harness.search import search_counterexample
    graphs = _read_input(args.corpus) if args.corpus else []
    eps = parse_fraction(args.eps) if args.eps else None
    _emit(search_counterexample(args.target, graphs, eps, forest=args.forest).to_json())
    return 0


def cmd_replay(args) -> int:
    from .harness.campaign import load_report, replay
    rep = load_report(args.report)
    records = rep["records"]
    if not 0 <= args.index < len(records):
        raise GraphError(f"index {args.index} outside 0..{len(records) - 1}")
    res = replay(records[args.index], rep.get("schema_version", -1))
    _emit({"identical": res.identical, "detail": res.detail, "record": res.record})
    return 0 if res.identical and res.record.get("status") != "fail" else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="purepairs", description="Pure-pair extraction toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    o = sub.add_parser("oracle", help="exact graph invariants")
    o.add_argument("which", choices=["chi", "omega", "alpha", "degeneracy", "copy"])
    o.add_argument("--input", "-i")
    o.add_argument("--pattern", help="pattern graph for copy, e.g. P5")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="generate a graph")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("params", nargs="*", help="key=value pairs, e.g. n=10 p=0.5 H=P5")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", "-o")
    g.add_argument("--format", choices=["edgelist", "graph6"], default="edgelist")
    g.set_defaults(func=cmd_gen)

    x = sub.add_parser("extract", help="run one extraction")
    x.add_argument("op", choices=sorted(EXTRACT_OPS))
    x.add_argument("--input", "-i")
    x.add_argument("--json", action="store_true")
    x.add_argument("--eps")
    x.add_argument("--k", type=int)
    x.add_argument("--t", type=int, default=2)
    x.add_argument("--p")
    x.add_argument("--q")
    x.add_argument("--w", type=int)
    x.add_argument("--a", type=int, default=4)
    x.add_argument("--H", default="P5")
    x.add_argument("--mu", choices=sorted(SUBMEASURES), default="card")
    x.add_argument("--A")
    x.add_argument("--B")
    x.add_argument("--P")
    x.add_argument("--Q")
    x.add_argument("--blocks", default="", help="blocks as '0,1;2,3'")
    x.add_argument("--anchors", default="", help="anchor sets as '0,1;2;3'")
    x.add_argument("--full", action="store_true", help="run the full construction even when thresholds degenerate")
    x.set_defaults(func=cmd_extract)

    v = sub.add_parser("verify", help="run a verification campaign")
    v.add_argument("lemma")
    v.add_argument("--config")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-n", type=int, default=10)
    v.add_argument("--min-n", type=int, default=4)
    v.add_argument("--param", action="append", default=[], help="key=value lemma parameter")
    v.add_argument("--workers", type=int)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="hard-instance search for the colourfulness questions")
    s.add_argument("target", choices=["clful", "modp5"])
    s.add_argument("--eps")
    s.add_argument("--corpus")
    s.add_argument("--forest", default="P5")
    s.set_defaults(func=cmd_search)

    r = sub.add_parser("replay", help="replay one report record")
    r.add_argument("--report", required=True)
    r.add_argument("--index", type=int, required=True)
    r.set_defaults(func=cmd_replay)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
