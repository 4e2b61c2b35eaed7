import json

import pytest

from posetflow.cli import build_poset_from_spec, main, parse_spec


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_spec():
    specs = parse_spec("chain:2,3,1 x claw:3")
    assert [s.family for s in specs] == ["chain", "claw"]
    assert build_poset_from_spec("claw:1 x claw:2 x claw:3").level_weights() == [2, 3, 1]
    with pytest.raises(ValueError):
        parse_spec("torus:3")


def test_sperner_text(capsys):
    code, out, _ = run(capsys, "sperner", "symmetric:4")
    assert code == 0
    assert out.splitlines()[0] == "width 11 = max level 11: SPERNER"


def test_sperner_json_is_deterministic(capsys):
    code, out, _ = run(capsys, "sperner", "boolean:4", "--json")
    data = json.loads(out)
    assert code == 0 and data["width"] == "6" and data["verdict"] is True
    _, again, _ = run(capsys, "sperner", "boolean:4", "--json")
    assert again == out


def test_sperner_not_sperner_exit(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"labels": ["r", "a", "b", "c"], "covers": [[0, 1], [0, 2]],
                                "weights": ["1", "1", "1", "5"]}))
    code, out, _ = run(capsys, "sperner", f"file:{path}")
    assert code == 2 and "NOT SPERNER" in out


def test_bad_file_exit(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"labels": ["a", "b"], "covers": [[0, 1], [1, 0]], "weights": ["1", "1"]}))
    code, _, err = run(capsys, "sperner", f"file:{path}")
    assert code == 1 and "CycleDetected" in err


def test_report_dir(capsys, tmp_path):
    code, _, _ = run(capsys, "sperner", "partition:4", "--report-dir", str(tmp_path))
    assert code == 0
    table = (tmp_path / "partition_4_levels.tsv").read_text().splitlines()
    assert table[0].split("\t") == ["rank", "level_weight", "is_max_level", "nfp_to_next"]
    assert [row.split("\t")[1] for row in table[1:]] == ["1", "6", "7", "1"]
    assert (tmp_path / "partition_4_levels.png").stat().st_size > 0


def test_width_and_oracle(capsys):
    code, out, _ = run(capsys, "width", "symmetric:4", "--json")
    assert json.loads(out)["width"] == "11"
    code, out, _ = run(capsys, "width", "symmetric:4", "--oracle")
    assert out.startswith("width 11")


def test_nfp(capsys):
    code, out, _ = run(capsys, "nfp", "symmetric:5", "--json")
    data = json.loads(out)
    assert code == 0 and data["holds"] and len(data["nfp"]) == 4


def test_stirling(capsys):
    _, out, _ = run(capsys, "stirling", "first", "5")
    assert out.strip() == "0 24 50 35 10 1"
    _, out, _ = run(capsys, "stirling", "second", "4")
    assert out.strip() == "0 1 7 6 1"


def test_flow(capsys, tmp_path):
    code, out, _ = run(capsys, "flow", "min", "hasse(boolean:3)")
    assert code == 0 and out.startswith("MinFlow value 3")
    path = tmp_path / "net.json"
    path.write_text(json.dumps({"capacities": ["10", "5", "10"], "edges": [[0, 1], [1, 2]]}))
    code, out, _ = run(capsys, "flow", "max", str(path), "--json")
    data = json.loads(out)
    assert data["value"] == "5" and data["cut"] == ["1"]
    assert {"edge": [0, 1], "value": "5/1"} in data["flow"]


def test_export(capsys):
    _, out, _ = run(capsys, "export", "symmetric:3", "dot")
    assert out.count("[label=") == 6 and "(1 2 3) (0, 1)" in out
    _, out, _ = run(capsys, "export", "boolean:2", "json")
    assert json.loads(out)["covers"] == [[0, 1], [0, 2], [1, 3], [2, 3]]


def test_collapse(capsys):
    code, out, _ = run(capsys, "collapse", "symmetric:4", "--stage", "two-chain", "--verify")
    data = json.loads(out)
    assert code == 0 and all(data["axioms"].values())
    assert data["codomain"]["capacities"] == ["6", "9", "3", "2", "3", "1"]
    assert data["pulled_back_weight"] == "11" and len(data["pulled_back_antichain"]) == 11
    code, out, _ = run(capsys, "collapse", "symmetric:4", "--stage", "chain", "--verify")
    data = json.loads(out)
    assert data["codomain"]["capacities"] == ["6", "11", "6", "1"]
    assert data["codomain_max_antichain"] == ["rank 1"]
    code, _, err = run(capsys, "collapse", "boolean:3", "--stage", "two-chain")
    assert code == 1


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", "3", "--trials", "20")
    assert code == 0 and out.count("PASS") == 3
