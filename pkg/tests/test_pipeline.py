import numpy as np
import pytest

from chebnet.errors import BadParams
from chebnet.pipeline import (example_pair, rim_curvature, round_trip, round_trip_distance)


def test_unknown_example():
    with pytest.raises(BadParams):
        example_pair("9.3")
    with pytest.raises(BadParams):
        example_pair("9.2", k=2.0)


@pytest.mark.parametrize("example", ["9.1", "9.2"])
@pytest.mark.parametrize("net", ["A", "B"])
def test_round_trip_reproduces_sources(built, example, net):
    c0, c1 = built(example, net, 0), built(example, net, 1)
    d0, d1 = round_trip_distance(c0), round_trip_distance(c1)
    for t in ("plus", "minus"):
        assert np.max(d0[t]) < 5e-3
        ratio = np.max(d0[t]) / np.max(d1[t][::2, ::2])
        assert np.max(d0[t]) < 1e-11 or ratio > 3.5


def test_round_trip_object():
    rt = round_trip("9.2", step=0.05, n=5, refine=1)
    rows = rt.table()
    assert [r["n"] for r in rows] == [5, 9]
    assert rows[1]["distance_plus"] < rows[0]["distance_plus"]
    assert "gauss_plus" in rt.rates


@pytest.mark.parametrize("k", [0.6, 1.0, 1.3])
def test_rim_curvature(k):
    val, raw = rim_curvature(k)
    s2 = np.sin(k) ** 2
    assert abs(val + 2 * s2 / (1 + s2)) < 1e-6
    assert np.all(np.diff(raw) < 0) or np.all(np.diff(raw) > 0)
