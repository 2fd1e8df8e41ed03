import json
from fractions import Fraction

import pytest

from purepairs.extract import basic, broom as xb, p5 as xp
from purepairs.generators import c5_join_power, complete, cycle, edgeless, join, path
from purepairs.graph import to_graph6
from purepairs.harness import campaign, validate as V
from purepairs.harness.campaign import (CampaignConfig, ConfigError, LemmaEntry, REGISTRY, outcome_fingerprint,
                                        replay, run_campaign, sample_seed)
from purepairs.harness.search import SearchCapExceeded, best_delta, search_counterexample
from purepairs.outcomes import ExtractionError

J55 = join(cycle(5), cycle(5))


def strip_clock(rep):
    d = rep.to_json()
    d.pop("wall_clock")
    return d


def test_gyarfas_campaign_all_pass():
    rep = run_campaign(CampaignConfig("gyarfas_vertex", samples=500, seed=0, max_n=12))
    c = rep.counts
    assert c["fail"] == 0 and c["pass"] + c["skipped"] == 500 and c["pass"] >= 490


def test_tbroom_colour_campaign():
    rep = run_campaign(CampaignConfig("tbroom_colour", samples=200, seed=1, max_n=10, params={"t": 2}))
    assert rep.counts == {"pass": 200, "fail": 0, "skipped": 0, "samples": 200}


def test_empty_campaign():
    rep = run_campaign(CampaignConfig("linanti", samples=0))
    assert rep.ok and rep.records == [] and rep.counts["samples"] == 0


@pytest.mark.parametrize("lemma", sorted(REGISTRY))
def test_every_lemma_small_campaign(lemma):
    rep = run_campaign(CampaignConfig(lemma, samples=12, seed=9, max_n=9))
    c = rep.counts
    assert c["pass"] + c["fail"] + c["skipped"] == c["samples"] == 12
    assert c["fail"] == 0, [r for r in rep.records if r["status"] == "fail"][:1]


def test_campaign_deterministic_and_parallel_invariant(tmp_path):
    cfg = dict(lemma="p5_pair", samples=16, seed=4, max_n=10)
    a = run_campaign(CampaignConfig(**cfg), workers=1)
    b = run_campaign(CampaignConfig(**cfg), workers=3)
    assert strip_clock(a) == strip_clock(b)
    out = tmp_path / "r.json"
    run_campaign(CampaignConfig(**cfg, out=str(out)))
    data = json.loads(out.read_text())
    assert data["schema_version"] == campaign.SCHEMA_VERSION
    assert data["summary"]["samples"] == 16


def test_report_rationals_are_strings():
    rep = run_campaign(CampaignConfig("controlled_subgraph", samples=5, seed=2))
    for rec in rep.records:
        for v in rec.get("margins", {}).values():
            assert isinstance(v, str) and Fraction(v) == Fraction(v)


def test_records_carry_replayable_spec():
    rep = run_campaign(CampaignConfig("locdense", samples=6, seed=3))
    for i, rec in enumerate(rep.records):
        assert rec["seed"] == sample_seed(3, i)
        res = replay(rec)
        assert res.identical, res.detail
        assert isinstance(res.trace, list)


def test_replay_of_failure_is_identical(monkeypatch):
    def broken(G, params, seed):
        raise ExtractionError("deliberate failure", {"n": G.n}, trace=[f"seed {seed}"])
    monkeypatch.setitem(REGISTRY, "broken", LemmaEntry(broken, [{"family": "cycle", "params": {"k": 5}}]))
    rep = run_campaign(CampaignConfig("broken", samples=3, seed=1))
    assert rep.counts["fail"] == 3 and not rep.ok
    rec = rep.records[1]
    assert rec["trace"] == [f"seed {sample_seed(1, 1)}"]
    res = replay(rec)
    assert res.identical and res.record["trace"] == rec["trace"]


def test_replay_flags_version_mismatch():
    rec = run_campaign(CampaignConfig("gyarfas_colour", samples=1)).records[0]
    res = replay(rec, report_schema=999)
    assert not res.identical and "schema" in res.detail


def test_config_validation():
    with pytest.raises(ConfigError):
        CampaignConfig("no_such_lemma")
    with pytest.raises(ConfigError):
        CampaignConfig("linanti", params={"eps": "3/2"})
    with pytest.raises(ConfigError):
        CampaignConfig("linanti", max_n=30)
    with pytest.raises(ConfigError):
        CampaignConfig.from_json({"lemma": "linanti", "bogus": 1})
    cfg = CampaignConfig.from_json({"lemma": "linanti", "samples": 2, "params": {"eps": "0.25"}})
    assert cfg.params["eps"] == "1/4"


def test_worker_env(monkeypatch):
    monkeypatch.setenv(campaign.WORKERS_ENV, "3")
    assert campaign.worker_count() == 3
    assert campaign.worker_count(5) == 5


# --- validators reject tampered certificates ---------------------------------------------

def test_validator_rejects_bad_complete_pair():
    out = xp.p5_complete_pair(J55).to_json()
    assert V.validate("p5_pair", J55, {}, out) == []
    bad = json.loads(json.dumps(out))
    bad["sets"]["B"] = bad["sets"]["B"] + bad["sets"]["A"][:1]
    assert V.validate("p5_pair", J55, {}, bad)


def test_validator_rejects_bad_colouring():
    out = basic.gyarfas_colour_bound(cycle(5), 5).to_json()
    bad = json.loads(json.dumps(out))
    bad["data"]["colouring"]["1"] = bad["data"]["colouring"]["0"]
    assert V.validate("gyarfas_colour", cycle(5), {"k": 5}, bad)


def test_validator_rejects_bad_anticomplete_pair():
    out = xb.broom_or_anticomplete(cycle(5), 3, 2).to_json()
    bad = json.loads(json.dumps(out))
    bad["sets"]["A"], bad["sets"]["B"] = [0], [1]
    assert V.validate("broom_anti", cycle(5), {"k": 3, "t": 2}, bad)


def test_validator_rejects_bad_decomposition():
    out = xb.tbroom_decompose(complete(4), 2).to_json()
    bad = json.loads(json.dumps(out))
    bad["sets"]["S"], bad["sets"]["P"] = [1], [0]
    assert V.validate("tbroom_decompose", complete(4), {"t": 2}, bad)


def test_validator_rejects_bad_terminal_partition():
    out = xp.terminal_partition(cycle(5), 0).to_json()
    bad = json.loads(json.dumps(out))
    bad["sets"]["D"] = [0, 1, 2, 3]
    assert V.validate("terminal_partition", cycle(5), {}, bad)


def test_eps_power_log_decision():
    assert V.at_least_eps_power_log(Fraction(1, 3), Fraction(1, 3), 10, 3) is True
    assert V.at_least_eps_power_log(Fraction(1, 10 ** 40), Fraction(1, 2), 1, 3) is False


# --- conjecture search -------------------------------------------------------------------

def test_search_clful_c5():
    res = search_counterexample("clful", [cycle(5)], Fraction(1, 2))
    w = res.worst
    assert w.best_delta == Fraction(2, 3) and len(w.best_F) == 2


def test_search_modp5_k4():
    res = search_counterexample("modp5", [complete(4)])
    assert res.worst.best_delta == Fraction(3, 4) and res.worst.best_F == [0, 1, 2, 3]


def test_search_empty_corpus():
    res = search_counterexample("modp5", [])
    assert res.exhausted and res.to_json()["status"] == "exhausted"


def test_search_filters_non_free_and_caps():
    res = search_counterexample("modp5", [path(5), cycle(5)])
    assert res.rejected == 1 and len(res.instances) == 1
    with pytest.raises(SearchCapExceeded):
        best_delta(c5_join_power(3), "modp5")
    with pytest.raises(ValueError):
        search_counterexample("clful", [cycle(5)], None)


def test_search_worst_instance_selection():
    res = search_counterexample("modp5", [complete(4), cycle(5), edgeless(3)])
    # edgeless graphs only reach delta 0: every neighbourhood is empty
    assert res.worst.graph6 == to_graph6(edgeless(3)) and res.worst.best_delta == 0
