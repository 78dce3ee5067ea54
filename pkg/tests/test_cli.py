import json

import pytest

from risklab.cli import main
from risklab.detector import save_decisions
from risklab.risknet import RiskNetwork, save_edgelist


@pytest.fixture()
def corpus_path(tmp_path, sample_corpus_text):
    path = tmp_path / "events.jsonl"
    path.write_text(sample_corpus_text, encoding="utf-8")
    return str(path)


@pytest.fixture()
def decisions_path(tmp_path, fig_decisions):
    path = tmp_path / "decisions.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        save_decisions(fig_decisions, fh)
    return str(path)


def run(capsys, *argv) -> dict:
    assert main(list(argv)) == 0
    return json.loads(capsys.readouterr().out)


def test_load_reports_rejects(tmp_path, capsys, corpus_path):
    doc = run(capsys, "load", "--corpus", corpus_path)
    assert doc == {"events": 3, "rejected": []}
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": 1}\n', encoding="utf-8")
    rejects = tmp_path / "rejects.jsonl"
    doc = run(capsys, "load", "--corpus", str(bad), "--rejects", str(rejects))
    assert doc["events"] == 0 and len(doc["rejected"]) == 1
    assert "sentence" in rejects.read_text()


def test_load_missing_file_errors(capsys):
    assert main(["load", "--corpus", "/does/not/exist.jsonl"]) == 2
    assert "exist.jsonl" in capsys.readouterr().err


def test_detect(capsys, corpus_path):
    doc = run(capsys, "detect", "--corpus", corpus_path, "--per-event")
    assert doc["candidates"] == 3 and doc["filtered"] == 0
    assert doc["per_event"]["4622"] == [[22, "evacuation"]]


def test_iterate(capsys, corpus_path, decisions_path):
    doc = run(
        capsys, "iterate", "--corpus", corpus_path, "--decisions", decisions_path,
        "--seed", "5", "--trees", "10", "--negative-ratio", "0",
    )
    assert doc["iteration"] == 1
    # storm has two positives but no negative instances on this tiny corpus
    assert doc["per_tag"] == []
    skipped = {(row["risk"], row["tag"]): row["reason"] for row in doc["skipped"]}
    assert skipped[(10, "storm")] == "no negatives"
    assert skipped[(10, "torrential rain")] == "no positives"


def test_graph_and_network(capsys, corpus_path, decisions_path, tmp_path):
    graph_doc = run(capsys, "graph", "--corpus", corpus_path, "--decisions", decisions_path)
    assert {n["id"] for n in graph_doc["nodes"] if n["type"] == "event"} == {4359, 4571, 4622}

    edgelist = tmp_path / "net.csv"
    net_doc = run(
        capsys, "network", "--corpus", corpus_path, "--decisions", decisions_path,
        "--edgelist", str(edgelist),
    )
    assert [(e["a"], e["b"]) for e in net_doc["edges"]] == [(10, 11), (10, 22), (11, 22)]
    assert edgelist.read_text().splitlines()[1:] == ["10,11", "10,22", "11,22"]


def test_compare(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    a.write_text(save_edgelist(RiskNetwork(edges=frozenset({(1, 2), (2, 3)}))))
    b.write_text(save_edgelist(RiskNetwork(edges=frozenset({(2, 3), (4, 5)}))))
    doc = run(capsys, "compare", "--a", str(a), "--b", str(b))
    assert doc["sizes"] == {"a": 2, "b": 2, "common": 1, "a_only": 1, "b_only": 1}


def test_heatmap_csv(capsys, corpus_path, decisions_path):
    assert main(["heatmap", "--corpus", corpus_path, "--decisions", decisions_path]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "category,country,count,score"
    assert any(line.startswith("societal,Cuba,1,") for line in out.splitlines())


def test_heatmap_geojson(capsys, corpus_path, decisions_path):
    assert main(["heatmap", "--corpus", corpus_path, "--decisions", decisions_path,
                 "--format", "geojson"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["type"] == "FeatureCollection"
