import json

import pytest

from pia2.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_minimal_model_symbolic(tmp_path, capsys):
    out = tmp_path / "table.json"
    code, _o, err = run(["minimal-model", "--arity-max", "4", "--degree-max", "2",
                         "--output", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    keys = {tuple(e["inputs"]): e["output"]["symbol"] for e in doc["entries"]}
    assert keys[("p1", "(21)", "j2", "u1^1")] == "1_S1"
    # deterministic: a second run is byte-identical
    out2 = tmp_path / "table2.json"
    run(["minimal-model", "--arity-max", "4", "--degree-max", "2",
         "--output", str(out2)], capsys)
    assert out.read_text() == out2.read_text()


def test_minimal_model_a2_matrix(tmp_path, capsys):
    out = tmp_path / "a2.json"
    code, _o, _e = run(["minimal-model", "--algebra", "a2", "--backend", "matrix",
                        "--arity-max", "4", "--degree-max", "1",
                        "--output", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    trip = {tuple(e["inputs"]): e["output"]["symbol"] for e in doc["entries"]}
    assert trip == {("h", "g", "f"): "1_S2", ("f", "h", "g"): "1_P",
                    ("g", "f", "h"): "1_S1"}


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["minimal-model", "--algebra", "a2", "--backend", "symbolic"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["minimal-model", "--backend", "symbolic", "--field", "q"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["minimal-model", "--window", "6"])
    assert exc.value.code == 2


def test_expected_table_and_diff(tmp_path, capsys):
    a = tmp_path / "computed.json"
    b = tmp_path / "expected.json"
    run(["minimal-model", "--arity-max", "5", "--degree-max", "3",
         "--output", str(a)], capsys)
    run(["expected-table", "--arity-max", "5", "--degree-max", "3",
         "--output", str(b)], capsys)
    code, out, _e = run(["diff", str(a), str(b)], capsys)
    assert code == 0
    assert json.loads(out)["identical"]
    code, _o, _e = run(["diff", str(a), str(a)], capsys)
    assert code == 0
    # a truncated file differs, with the missing entries listed
    doc = json.loads(a.read_text())
    doc["entries"] = doc["entries"][:5]
    c = tmp_path / "truncated.json"
    c.write_text(json.dumps(doc))
    code, out, _e = run(["diff", str(a), str(c)], capsys)
    assert code == 1
    assert json.loads(out)["only_in_a"]


def test_verify_kappa_and_unital(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, _o, err = run(["verify", "--which", "kappa", "--arity-max", "4",
                         "--degree-max", "2", "--output", str(out)], capsys)
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["status"] == "pass"
    code, _o, _e = run(["verify", "--which", "unital", "--arity-max", "4",
                        "--degree-max", "2", "--output", str(out)], capsys)
    assert code == 0


def test_verify_contraction_small_window(tmp_path, capsys):
    out = tmp_path / "contraction.json"
    code, _o, _e = run(["verify", "--which", "contraction", "--window", "14",
                        "--arity-max", "2", "--degree-max", "2",
                        "--output", str(out)], capsys)
    assert code == 0
    assert json.loads(out.read_text())["status"] == "pass"


def test_export_category_and_verify_functor(tmp_path, capsys):
    out = tmp_path / "delta.json"
    code, _o, _e = run(["export-category", "delta", "--output", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert any(e["output"]["symbol"] == "1_A" for e in doc["entries"])

    fd = tmp_path / "functor.json"
    fd.write_text(json.dumps({
        "name": "iota1", "source": "delta", "target": "pi",
        "object_map": {"A": "S2", "B": "P1", "C": "S1"},
        "F1": [{"from": "alpha", "to": "j1"}, {"from": "beta", "to": "p1"},
               {"from": "gamma", "to": "b.u1^0"}],
        "higher": []}))
    code, out_text, _e = run(["verify-functor", "--file", str(fd),
                              "--arity-max", "5", "--degree-max", "3"], capsys)
    assert code == 0
    assert json.loads(out_text)["status"] == "pass"
    # a wrong assignment is caught
    fd.write_text(json.dumps({
        "name": "broken", "source": "delta", "target": "pi",
        "object_map": {"A": "S2", "B": "P1", "C": "S1"},
        "F1": [{"from": "alpha", "to": "j1"}, {"from": "beta", "to": "p1"},
               {"from": "gamma", "to": "a.u2^0"}],
        "higher": []}))
    code, out_text, _e = run(["verify-functor", "--file", str(fd),
                              "--arity-max", "5", "--degree-max", "3"], capsys)
    assert code == 1


def test_verify_stasheff_small(tmp_path, capsys):
    out = tmp_path / "stasheff.json"
    code, _o, _e = run(["verify", "--which", "stasheff", "--arity-max", "4",
                        "--degree-max", "2", "--output", str(out)], capsys)
    assert code == 0
    assert json.loads(out.read_text())["status"] == "pass"
