from __future__ import annotations

import json

import pytest

from topmatch.cli import main
from topmatch.graphcore import cycle_graph
from topmatch.latin import stein_array
from topmatch.rainbow import cyclic_stein_instance, jin_yuster, stein_colors


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    return code, json.loads(out)


def strip_timing(d):
    return {k: v for k, v in d.items() if k not in ("wall_clock", "cache_hits")}


def test_psi_from_file(tmp_path, capsys):
    path = tmp_path / "c4.json"
    path.write_text(cycle_graph(4).to_json())
    code, out, _ = run(capsys, "psi", "--graph", str(path))
    assert code == 0 and out.strip() == "psi = 1"


def test_psi_named_graphs(capsys):
    assert run_json(capsys, "psi", "--graph", "P4")[1] == {"psi": "inf"}
    assert run_json(capsys, "psi", "--graph", "K3,3", "--line")[1] == {"psi": 2}


def test_eta(capsys):
    code, data = run_json(capsys, "eta", "--graph", "K3,3", "--matching")
    assert code == 0 and data["eta"] == 2 and data["f_vector"] == [9, 18, 6]
    _, data = run_json(capsys, "eta", "--graph", "E3")
    assert data["eta"] == "inf"
    _, data = run_json(capsys, "eta", "--graph", "E9", "--cap", "3")
    assert data["eta"] == 3 and data["capped"]


def test_eta_complex_and_boundary(tmp_path, capsys):
    path = tmp_path / "sq.json"
    path.write_text(json.dumps({"ground": 4, "faces": [[0, 1], [1, 2], [2, 3], [0, 3]]}))
    assert run_json(capsys, "eta", "--complex", str(path))[1]["eta"] == 2
    code, out, _ = run(capsys, "eta", "--complex", str(path), "--boundary", "1")
    assert code == 0 and len(out.splitlines()) == 8


def test_rainbow(tmp_path, capsys):
    path = tmp_path / "inst.json"
    path.write_text(json.dumps({"n": 3, "colors": stein_colors(cyclic_stein_instance(3))}))
    code, data = run_json(capsys, "rainbow", "--instance", str(path), "--hall", "1")
    assert code == 0 and data["max_rainbow_matching"] == 3 and data["hall"]["passed"]
    jy = tmp_path / "jy.json"
    jy.write_text(json.dumps(jin_yuster()[1].to_dict()))
    _, data = run_json(capsys, "rainbow", "--instance", str(jy))
    assert data["max_partial_isr"] == 3 and data["isr"] is False


def test_latin(tmp_path, capsys):
    assert run_json(capsys, "latin", "--cyclic", "4")[1]["max_partial_transversal"] == 3
    path = tmp_path / "a.txt"
    path.write_text(stein_array(5).to_text())
    code, data = run_json(capsys, "latin", "--array", str(path))
    assert code == 0 and data["max_partial_transversal"] == 4 and data["equi_n"]
    assert run_json(capsys, "latin", "--random-latin", "5", "--seed", "2")[1]["latin"]


def test_strategy(tmp_path, capsys):
    code, data = run_json(capsys, "strategy", "--knn", "3", "--adversary", "exhaustive")
    assert code == 0 and data["playouts"] == 11 and data["t_values"] == [2] and not data["failures"]
    out = tmp_path / "t.jsonl"
    assert run(capsys, "strategy", "--knn", "3", "--transcript", str(out))[0] == 0
    assert run(capsys, "strategy", "--audit", str(out))[0] == 0


def test_strategy_input_errors(capsys):
    assert run(capsys, "strategy", "--graph", "K3")[0] == 2
    assert run(capsys, "strategy", "--graph", "K2,3")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["strategy"])
    assert exc.value.code == 2


def test_bounds(capsys):
    code, data = run_json(capsys, "bounds", "--n", "9")
    rows = {r["name"]: r for r in data["bounds"]}
    assert code == 0 and rows["Koksma"]["guaranteed"] == 6


def test_verify_blz_single(capsys):
    code, data = run_json(capsys, "verify", "blz", "--n", "4")
    checks = {c["name"]: c for c in data["checks"]}
    assert checks["blz n=4"]["outcome"] == "pass"
    # rational homology gives 3 here, not floor(8/3) = 2; reported as a remark
    assert checks["blz-equality n=4"]["outcome"] == "mismatch"
    assert code == 0


def test_verify_stein23_example(capsys):
    code, data = run_json(capsys, "verify", "stein23", "--n", "5", "--samples", "100", "--seed", "7")
    assert code == 0 and data["seed"] == 7
    assert all(c["outcome"] == "pass" for c in data["checks"])


def test_theorem_violation_exit_code(capsys):
    code, data = run_json(capsys, "verify", "nu2", "--vertices", "6")
    bad = [c for c in data["checks"] if c["outcome"] == "fail"]
    assert code == 1 and bad and bad[0]["label"] == "THEOREM VIOLATION"
    assert bad[0]["counterexamples"]


def test_determinism(capsys):
    a = run_json(capsys, "verify", "stein-average", "--n", "3", "4", "--samples", "10", "--seed", "3")
    b = run_json(capsys, "--seed", "3", "verify", "stein-average", "--n", "3", "4", "--samples", "10")
    assert a[0] == b[0] and strip_timing(a[1]) == strip_timing(b[1])


def test_cache_coherence(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("TOPMATCH_CACHE", raising=False)
    argv = ["verify", "koksma", "--n", "4", "5", "--samples", "20", "--cache-dir", str(tmp_path)]
    first = run_json(capsys, *argv)
    second = run_json(capsys, *argv)
    assert first[1]["cache_hits"] == 0 and second[1]["cache_hits"] > 0
    assert strip_timing(first[1]) == strip_timing(second[1])


def test_env_overrides_cache_dir(tmp_path, capsys, monkeypatch):
    env_dir = tmp_path / "env"
    monkeypatch.setenv("TOPMATCH_CACHE", str(env_dir))
    run_json(capsys, "verify", "equirep", "--n", "2", "--samples", "5", "--cache-dir", str(tmp_path / "flag"))
    assert any(env_dir.iterdir()) and not (tmp_path / "flag").exists()


def test_threads_match_serial(capsys):
    a = run_json(capsys, "verify", "theorem-eta", "--samples", "50")
    b = run_json(capsys, "--threads", "2", "verify", "theorem-eta", "--samples", "50")
    assert strip_timing(a[1])["checks"] == strip_timing(b[1])["checks"]


def test_bad_input_exit_2(tmp_path, capsys):
    assert run(capsys, "psi", "--graph", "nothing-here")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "psi", "--graph", str(bad))[0] == 2
    assert run(capsys, "verify", "blz", "--samples", "3")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["--frobnicate"])
    assert exc.value.code == 2


def test_play_via_stdin(capsys, monkeypatch):
    answers = iter(["explode"])
    monkeypatch.setattr("builtins.input", lambda prompt="": next(answers))
    code, out, _ = run(capsys, "play", "--graph", "K2", "--side", "NON")
    assert code == 0 and json.loads(out.splitlines()[-1])["value"] == 1
