import json

import pytest

from chebnet.cli import main


def _load(path):
    doc = json.load(open(path))
    doc["meta"].pop("timestamp")
    return doc


def test_identities_example(tmp_path, capsys):
    out = tmp_path / "out.json"
    assert main(["identities", "--surface", "pseudosphere-asym", "--samples", "100",
                 "--report", str(out)]) == 0
    doc = json.load(open(out))
    assert doc["verdict"] and doc["data"]["max_residual"] < 1e-8
    assert all(c["anchor"] for c in doc["checks"])
    assert "checks passed" in capsys.readouterr().out


def test_report_is_reproducible(tmp_path):
    out = tmp_path / "r.json"
    docs = []
    for _ in range(2):
        assert main(["symmetries", "--surface", "graph", "--samples", "10", "--report", str(out)]) == 0
        docs.append(_load(out))
    assert docs[0] == docs[1]


def test_bad_flag_is_usage_error(capsys):
    assert main(["construct", "--example", "9.2", "--k", "1.0", "--bad-flag"]) == 2
    assert "unrecognized" in capsys.readouterr().err


def test_missing_subcommand():
    assert main([]) == 2


def test_help_exits_zero():
    assert main(["catalog", "--help"]) == 0


def test_unknown_surface_is_error(capsys):
    assert main(["identities", "--surface", "torus"]) == 2
    assert "torus" in capsys.readouterr().err


def test_config_overrides_flags(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"samples": 3, "surface": "sphere"}))
    out = tmp_path / "r.json"
    assert main(["identities", "--samples", "50", "--config", str(cfg), "--report", str(out)]) == 0
    doc = json.load(open(out))
    assert doc["config"]["samples"] == 3 and doc["config"]["surface"] == "sphere"


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"sampels": 3}))
    assert main(["identities", "--config", str(cfg)]) == 2
    assert "sampels" in capsys.readouterr().err


def test_tolerance_override_fails_check(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tolerances": {"identity": 1e-20}}))
    assert main(["identities", "--samples", "5", "--config", str(cfg)]) == 1
    assert main(["identities", "--samples", "5", "--tol", "nope=1"]) == 2


def test_threads_variable(monkeypatch, tmp_path):
    monkeypatch.setenv("CHEBNET_THREADS", "zero")
    assert main(["catalog"]) == 2
    monkeypatch.setenv("CHEBNET_THREADS", "2")
    out = tmp_path / "r.json"
    assert main(["catalog", "--report", str(out)]) == 0
    assert json.load(open(out))["meta"]["threads"] == 2


def test_catalog_with_rim():
    assert main(["catalog", "--rim"]) == 0


def test_classify_expectations():
    assert main(["classify", "--surface", "pseudosphere-asym", "--expect", "chebyshev"]) == 0
    assert main(["classify", "--surface", "sphere", "--expect", "not-chebyshev"]) == 0
    assert main(["classify", "--surface", "sphere", "--expect", "chebyshev"]) == 1


def test_invariants_command(tmp_path):
    out = tmp_path / "r.json"
    assert main(["invariants", "--surface", "sphere", "--point", "0.2", "0.3",
                 "--report", str(out)]) == 0
    rec = json.load(open(out))["data"]["record"]
    assert abs(rec["K"] - 1) < 1e-12


def test_construct_and_export(tmp_path):
    obj = tmp_path / "mid.obj"
    assert main(["construct", "--example", "9.2", "--net", "B", "--obj", str(obj)]) == 0
    assert sum(1 for line in open(obj) if line.startswith("v ")) == 81
    js = tmp_path / "doc.json"
    assert main(["export", "--example", "9.2", "--object", "document", "--n", "9",
                 "--step", "0.05", "--out", str(js)]) == 0
    from chebnet.export import load_json
    assert load_json(js)["middle"].shape == (3, 9, 9)


def test_roundtrip_example(capsys):
    assert main(["roundtrip", "--example", "9.1", "--step", "0.05", "--refine", "2"]) == 0
    out = capsys.readouterr().out
    assert "0.01250" in out and "33" in out


def test_export_curves(tmp_path):
    csv = tmp_path / "c.csv"
    assert main(["export", "--example", "9.2", "--object", "curves", "--seeds", "5",
                 "--steps", "200", "--out", str(csv)]) == 0
    assert sum(1 for _ in open(csv)) == 2011
