"""Geometry export: OBJ meshes from grids, CSV polylines, JSON documents."""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import EmptyObject, ExportIoError

FMT = "{:.17g}"


def _open(path):
    try:
        d = os.path.dirname(os.fspath(path))
        if d:
            os.makedirs(d, exist_ok=True)
        return open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ExportIoError(f"cannot write {path}: {exc}") from exc


def grid_mesh(r, mask=None):
    """Vertices and quad faces (1-based) of a (3, nx, ny) grid of points.

    Masked or non-finite nodes are dropped; a quad is kept only when all four
    corners survive, and faces are re-indexed onto the surviving vertices.
    """
    r = np.asarray(r, dtype=float)
    if r.ndim != 3 or r.shape[0] != 3:
        raise ValueError("expected an array of shape (3, nx, ny)")
    keep = np.all(np.isfinite(r), axis=0)
    if mask is not None:
        keep &= np.asarray(mask, dtype=bool)
    index = np.full(keep.shape, -1, dtype=int)
    index[keep] = np.arange(1, int(keep.sum()) + 1)
    verts = r[:, keep].T
    a, b = index[:-1, :-1], index[1:, :-1]
    c, d = index[1:, 1:], index[:-1, 1:]
    ok = (a > 0) & (b > 0) & (c > 0) & (d > 0)
    faces = np.stack([a[ok], b[ok], c[ok], d[ok]], axis=1)
    return verts, faces


def export_obj(r, path, mask=None, name="surface"):
    verts, faces = grid_mesh(r, mask)
    if len(verts) == 0:
        raise EmptyObject("nothing to export: every node is masked")
    with _open(path) as fh:
        fh.write(f"o {name}\n")
        for v in verts:
            fh.write("v " + " ".join(FMT.format(x) for x in v) + "\n")
        for f in faces:
            fh.write("f " + " ".join(str(int(i)) for i in f) + "\n")
    return len(verts), len(faces)


def export_csv(curves, path):
    """One row per polyline point: ``curve_id,s,x,y,z``."""
    curves = list(curves)
    if not curves or all(len(c.xyz) == 0 for c in curves):
        raise EmptyObject("no curve points to export")
    rows = 0
    with _open(path) as fh:
        fh.write("curve_id,s,x,y,z\n")
        for c in curves:
            for s, p in zip(c.s, c.xyz):
                fh.write(f"{c.curve_id}," + ",".join(FMT.format(x) for x in (s, *p)) + "\n")
                rows += 1
    return rows


def _encode(obj):
    if isinstance(obj, np.ndarray):
        return {"__ndarray__": obj.tolist(), "dtype": str(obj.dtype), "shape": list(obj.shape)}
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def _decode(obj):
    if isinstance(obj, dict):
        if "__ndarray__" in obj:
            return np.array(obj["__ndarray__"], dtype=obj["dtype"]).reshape(obj["shape"])
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def export_json(doc: dict, path):
    """Self-describing JSON; arrays carry dtype and shape.  Floats are written
    with the shortest repr that reads back to the identical double."""
    if not doc:
        raise EmptyObject("empty document")
    with _open(path) as fh:
        json.dump(_encode(doc), fh, indent=1, sort_keys=True, allow_nan=True)
        fh.write("\n")


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return _decode(json.load(fh))
    except OSError as exc:
        raise ExportIoError(f"cannot read {path}: {exc}") from exc


def export_geometry(obj, fmt, path, **kw):
    """Dispatch on format: ``obj`` is a (3, nx, ny) array or grid-like object
    for OBJ, a list of polylines for CSV, and a dict for JSON."""
    fmt = fmt.lower()
    if fmt == "obj":
        r = getattr(obj, "r", obj)
        return export_obj(r, path, **kw)
    if fmt == "csv":
        return export_csv(obj, path)
    if fmt == "json":
        return export_json(obj, path)
    raise ValueError(f"unknown format {fmt!r}")
