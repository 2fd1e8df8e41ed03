import json
import subprocess
import sys

import pytest

from purepairs.cli import EXTRACT_OPS, main
from purepairs.generators import c5_join_power, cycle, join
from purepairs.graph import from_edgelist, from_graph6, to_edgelist, to_graph6


@pytest.fixture
def c5_file(tmp_path):
    p = tmp_path / "c5.txt"
    p.write_text(to_edgelist(cycle(5)))
    return str(p)


@pytest.fixture
def j55_file(tmp_path):
    p = tmp_path / "j55.g6"
    p.write_text(to_graph6(join(cycle(5), cycle(5))) + "\n")
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize("which,value", [("chi", 3), ("omega", 2), ("alpha", 2), ("degeneracy", 2)])
def test_oracle(capsys, c5_file, which, value):
    code, out = run(capsys, "oracle", which, "--input", c5_file)
    data = json.loads(out)
    assert code == 0 and data["value"] == value and data["witness"] is not None


def test_oracle_copy(capsys, c5_file):
    code, out = run(capsys, "oracle", "copy", "--pattern", "P4", "--input", c5_file)
    data = json.loads(out)
    assert data["value"] is True and len(data["witness"]) == 4


def test_gen_formats(capsys, tmp_path):
    out = tmp_path / "g.txt"
    assert main(["gen", "c5_join_power", "m=2", "--out", str(out)]) == 0
    assert from_edgelist(out.read_text()) == c5_join_power(2)
    code, text = run(capsys, "gen", "h_free_rejection", "n=9", "p=0.5", "H=P5", "--seed", "3", "--format", "graph6")
    assert code == 0 and from_graph6(text.strip()).n == 9
    code, text = run(capsys, "gen", "complete_multipartite", "parts=2,3")
    assert from_edgelist(text).edge_count() == 6


def test_extract_json(capsys, j55_file):
    code, out = run(capsys, "extract", "p5-pair", "--input", j55_file, "--json")
    data = json.loads(out)
    assert code == 0 and data["kind"] == "complete_pair" and "trace" in data


def test_extract_linanti_has_claims(capsys, j55_file):
    code, out = run(capsys, "extract", "linanti", "--input", j55_file, "--eps", "1/4", "--json")
    assert code == 0 and "claims" in json.loads(out)["data"]


def test_extract_error_exit(capsys, c5_file):
    code, out = run(capsys, "extract", "colourful-pair", "--input", c5_file, "--eps", "1/2", "--json")
    assert code == 1 and "error" in json.loads(out)


def test_extract_every_op_registered():
    expected = {"gyarfas-vertex", "gyarfas-colour", "min-degree-core", "controlled", "vivid", "eh-step",
                "near-pure", "quasi-pure", "tbroom-decompose", "tbroom-colour", "star-step",
                "covering-blockade", "broom-anti", "unmixed", "terminal", "terminal-pair", "mid",
                "colourful-pair", "linanti", "locdense", "p5-pair", "p5-chi"}
    assert expected <= set(EXTRACT_OPS)


@pytest.mark.parametrize("op,extra", [
    ("vivid", ["--blocks", "0;2", "--eps", "1/2"]),
    ("eh-step", ["--H", "K3", "--anchors", "0;1;3"]),
    ("star-step", ["--A", "0,2", "--B", "1", "--t", "1", "--w", "1"]),
    ("unmixed", ["--A", "0", "--B", "2"]),
    ("mid", ["--P", "0", "--Q", "1"]),
])
def test_extract_set_arguments(capsys, c5_file, op, extra):
    code, out = run(capsys, "extract", op, "--input", c5_file, "--json", *extra)
    assert code in (0, 1)
    json.loads(out)


def test_verify_and_replay(capsys, tmp_path):
    rep = tmp_path / "rep.json"
    code, out = run(capsys, "verify", "gyarfas_vertex", "--samples", "8", "--seed", "2", "--max-n", "9",
                    "--out", str(rep))
    assert code == 0 and "0 fail" in out
    code, out = run(capsys, "replay", "--report", str(rep), "--index", "3")
    assert code == 0 and json.loads(out)["identical"]


def test_verify_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"lemma": "tbroom_colour", "samples": 4, "seed": 1, "params": {"t": 1}}))
    code, _ = run(capsys, "verify", "tbroom_colour", "--config", str(cfg))
    assert code == 0


def test_verify_unknown_lemma(capsys):
    assert main(["verify", "nope", "--samples", "1"]) == 2


def test_search(capsys, tmp_path):
    corpus = tmp_path / "c.g6"
    corpus.write_text(to_graph6(cycle(5)) + "\n")
    code, out = run(capsys, "search", "clful", "--eps", "1/2", "--corpus", str(corpus))
    data = json.loads(out)
    assert code == 0 and data["worst"]["best_delta"] == "2/3"
    code, out = run(capsys, "search", "modp5")
    assert json.loads(out)["status"] == "exhausted"


def test_console_script_runs(tmp_path):
    g = tmp_path / "k.txt"
    g.write_text("3 3\n0 1\n1 2\n0 2\n")
    res = subprocess.run([sys.executable, "-m", "purepairs.cli", "oracle", "chi", "--input", str(g)],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["value"] == 3
