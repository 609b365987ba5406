import json

from chebnet.report import ANCHORS, Check, ReportDocument, anchor


def test_check_verdicts():
    assert Check("a", "x", 1e-9, 1e-8).verdict
    assert not Check("a", "x", 1e-7, 1e-8).verdict
    assert Check("r", "x", 4.0, 3.5, mode="min").verdict
    assert not Check("nan", "x", float("nan"), 1.0).verdict


def test_anchor_lookup_by_prefix():
    assert anchor("gauss_plus") == ANCHORS["gauss"]
    assert anchor("sine_gordon_minus") == ANCHORS["sine_gordon"]
    assert anchor("no such thing") == "unanchored"


def test_document_json_is_deterministic():
    docs = []
    for _ in range(2):
        d = ReportDocument("identities", {"seed": 0}, meta={"timestamp": "T"})
        d.add("identity[beetle_1]", "identity", 1e-13, 1e-8)
        d.add("rate", "rate", 16.0, 3.5, mode="min")
        docs.append(d.to_json())
    assert docs[0] == docs[1]
    doc = json.loads(docs[0])
    assert doc["verdict"] is True
    for c in doc["checks"]:
        assert set(c) >= {"name", "anchor", "residual", "tolerance", "verdict"}
        assert c["anchor"] != "unanchored"


def test_summary_counts():
    d = ReportDocument("x", {})
    d.add("a", "gauss", 1.0, 0.5)
    assert not d.verdict and "0/1 checks passed" in d.summary()
