import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from chebnet.errors import EmptyObject, ExportIoError
from chebnet.export import (export_csv, export_geometry, export_json, export_obj, grid_mesh,
                            load_json)
from chebnet.grid import Polyline


def _grid(nx, ny):
    x, y = np.meshgrid(np.arange(nx, dtype=float), np.arange(ny, dtype=float), indexing="ij")
    return np.stack([x, y, np.sin(x + y)])


def _read_obj(path):
    v, f = [], []
    for line in open(path):
        if line.startswith("v "):
            v.append([float(t) for t in line.split()[1:]])
        elif line.startswith("f "):
            f.append([int(t) for t in line.split()[1:]])
    return np.array(v), np.array(f)


def test_obj_counts(tmp_path):
    nv, nf = export_obj(_grid(33, 33), tmp_path / "m.obj")
    assert (nv, nf) == (1089, 1024)
    v, f = _read_obj(tmp_path / "m.obj")
    assert v.shape == (1089, 3) and f.shape == (1024, 4) and f.min() == 1 and f.max() == 1089


def test_obj_values_round_trip(tmp_path):
    r = _grid(4, 3) * np.pi
    export_obj(r, tmp_path / "m.obj")
    v, _ = _read_obj(tmp_path / "m.obj")
    np.testing.assert_array_equal(v, r.reshape(3, -1).T)


@given(st.integers(3, 9), st.integers(3, 9), st.data())
@settings(max_examples=40, deadline=None)
def test_masked_mesh_is_manifold(nx, ny, data):
    mask = data.draw(arrays(bool, (nx, ny), elements=st.booleans()))
    verts, faces = grid_mesh(_grid(nx, ny), mask)
    assert len(verts) == mask.sum()
    if len(faces):
        assert faces.min() >= 1 and faces.max() <= len(verts)
    # each undirected edge is used by at most two faces, interior ones by exactly two
    edges = {}
    for f in faces:
        for a, b in zip(f, np.roll(f, -1)):
            edges[frozenset((a, b))] = edges.get(frozenset((a, b)), 0) + 1
    assert all(c in (1, 2) for c in edges.values())


def test_all_masked(tmp_path):
    with pytest.raises(EmptyObject):
        export_obj(_grid(3, 3), tmp_path / "m.obj", mask=np.zeros((3, 3), bool))


def test_csv_rows(tmp_path):
    curves = [Polyline(i, i % 2, (0.0, 0.0), np.zeros((201, 2)), np.random.default_rng(i).normal(size=(201, 3)),
                       np.arange(201) * 1e-3) for i in range(10)]
    rows = export_csv(curves, tmp_path / "c.csv")
    lines = open(tmp_path / "c.csv").read().splitlines()
    assert rows == 2010 and len(lines) == 2011 and lines[0] == "curve_id,s,x,y,z"
    last = lines[-1].split(",")
    assert int(last[0]) == 9 and float(last[2]) == curves[9].xyz[-1, 0]


def test_csv_empty(tmp_path):
    with pytest.raises(EmptyObject):
        export_csv([], tmp_path / "c.csv")


@given(arrays(np.float64, st.tuples(st.integers(1, 4), st.integers(1, 5)),
              elements=st.floats(allow_nan=False, allow_infinity=False)))
@settings(max_examples=40, deadline=None)
def test_json_round_trip_exact(tmp_path_factory, a):
    path = tmp_path_factory.mktemp("j") / "d.json"
    export_json({"a": a, "meta": {"step": 0.05, "n": 3}}, path)
    back = load_json(path)
    assert back["a"].dtype == a.dtype and back["a"].shape == a.shape
    np.testing.assert_array_equal(back["a"], a)
    assert back["meta"] == {"step": 0.05, "n": 3}


def test_json_is_plain(tmp_path):
    export_json({"x": np.arange(3)}, tmp_path / "d.json")
    doc = json.load(open(tmp_path / "d.json"))
    assert doc["x"]["shape"] == [3] and doc["x"]["dtype"] == "int64"


def test_io_error(tmp_path):
    (tmp_path / "file").write_text("")
    with pytest.raises(ExportIoError):
        export_obj(_grid(3, 3), tmp_path / "file" / "m.obj")


def test_dispatch(tmp_path):
    assert export_geometry(_grid(3, 3), "OBJ", tmp_path / "a.obj") == (9, 4)
    with pytest.raises(ValueError):
        export_geometry(_grid(3, 3), "ply", tmp_path / "a.ply")
