"""
Readers for the JSON/CSV documents the command-line tool consumes.

Curve specs::

    {"kind": "catalog", "name": "ellipse", "params": [1, 2], "domain": [a, b]}
    {"kind": "polynomial", "n": 2, "coeffs": [[0, 1], [0, 0, 1]], "domain": [a, b]}
    {"kind": "sampled", "n": 2, "t0": 0, "h": 0.001, "points": [[x, y], ...],
     "fd_order": 4, "domain": [a, b]}

``domain`` is optional for catalog and sampled curves. A curve argument may
also be ``catalog:<name>:<p1>:<p2>...`` or a CSV file ``t,x_1,...,x_n`` on a
uniform t grid.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import jsonschema
import numpy as np

from .affgroup import SpecialAffineMap
from .curvekit import CurveProvider, PolynomialCurve, SampledCurve, make_catalog
from .errors import BadParams, DimensionMismatch, SaffineError
from .reconstruct import CurvatureSpec


class SpecError(SaffineError):
    """Malformed input document; the message names the offending location."""


_NUM = {"type": "number"}
_DOMAIN = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}

CURVE_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": ["catalog", "polynomial", "sampled"]}},
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "catalog"}}},
            "then": {
                "required": ["name"],
                "properties": {
                    "name": {"type": "string"},
                    "params": {"type": "array", "items": _NUM},
                    "domain": _DOMAIN,
                    "n": {"type": "integer"},
                },
            },
        },
        {
            "if": {"properties": {"kind": {"const": "polynomial"}}},
            "then": {
                "required": ["n", "coeffs", "domain"],
                "properties": {
                    "n": {"type": "integer", "minimum": 2},
                    "coeffs": {"type": "array", "items": {"type": "array", "items": _NUM, "minItems": 1}},
                    "domain": _DOMAIN,
                },
            },
        },
        {
            "if": {"properties": {"kind": {"const": "sampled"}}},
            "then": {
                "required": ["n", "h", "points"],
                "properties": {
                    "n": {"type": "integer", "minimum": 2},
                    "t0": _NUM,
                    "h": {"type": "number", "exclusiveMinimum": 0},
                    "points": {"type": "array", "items": {"type": "array", "items": _NUM}},
                    "fd_order": {"enum": [2, 4, 6]},
                    "domain": _DOMAIN,
                },
            },
        },
    ],
}

MAP_SCHEMA = {
    "type": "object",
    "required": ["B"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "B": {"type": "array", "items": {"type": "array", "items": _NUM}},
        "tau": {"type": "array", "items": _NUM},
    },
}

_CHANNEL = {
    "type": "object",
    "required": ["kind"],
    "oneOf": [
        {"properties": {"kind": {"const": "const"}, "value": _NUM}, "required": ["value"]},
        {
            "properties": {"kind": {"const": "poly"}, "coeffs": {"type": "array", "items": _NUM, "minItems": 1}},
            "required": ["coeffs"],
        },
        {
            "properties": {
                "kind": {"const": "table"},
                "s": {"type": "array", "items": _NUM},
                "values": {"type": "array", "items": _NUM},
            },
            "required": ["s", "values"],
        },
    ],
}

CURVATURE_SCHEMA = {
    "type": "object",
    "required": ["n", "L", "channels"],
    "properties": {
        "n": {"type": "integer", "minimum": 2},
        "L": {"type": "number", "exclusiveMinimum": 0},
        "channels": {"type": "array", "items": _CHANNEL},
    },
}


def _json_path(err) -> str:
    out = "$"
    for p in err.absolute_path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def load_json(path, schema, label: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise SpecError(f"{path}: cannot read {label}: {e.strerror}") from e
    return parse_json(text, schema, f"{path}")


def parse_json(text: str, schema, where: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"{where}:{e.lineno}:{e.colno}: {e.msg}") from e
    err = jsonschema.exceptions.best_match(jsonschema.Draft202012Validator(schema).iter_errors(doc))
    if err is not None:
        raise SpecError(f"{where}: at {_json_path(err)}: {err.message}")
    return doc


def curve_from_doc(doc: dict, where: str = "<curve>") -> CurveProvider:
    kind = doc["kind"]
    dom = doc.get("domain")
    try:
        if kind == "catalog":
            c = make_catalog(doc["name"], doc.get("params", []), domain=dom)
        elif kind == "polynomial":
            if len(doc["coeffs"]) != doc["n"]:
                raise SpecError(f"{where}: at $.coeffs: expected {doc['n']} components, got {len(doc['coeffs'])}")
            c = PolynomialCurve(doc["coeffs"], dom)
        else:
            pts = doc["points"]
            for i, row in enumerate(pts):
                if len(row) != doc["n"]:
                    raise SpecError(f"{where}: at $.points[{i}]: expected {doc['n']} coordinates, got {len(row)}")
            c = SampledCurve(pts, doc["h"], doc.get("t0", 0.0), doc.get("fd_order", 4), domain=dom)
    except (BadParams, ValueError) as e:
        if isinstance(e, SpecError):
            raise
        raise SpecError(f"{where}: {e}") from e
    if "n" in doc and doc["n"] != c.n:
        raise SpecError(f"{where}: at $.n: declared n = {doc['n']} but curve has n = {c.n}")
    return c


def read_csv_table(path) -> tuple[list[str], np.ndarray]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as e:
        raise SpecError(f"{path}: cannot read CSV: {e.strerror}") from e
    if len(rows) < 2:
        raise SpecError(f"{path}: CSV needs a header and at least one row")
    header = rows[0]
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]])
    except ValueError as e:
        raise SpecError(f"{path}: {e}") from e
    if data.ndim != 2 or data.shape[1] != len(header):
        raise SpecError(f"{path}: ragged CSV rows")
    return header, data


def curve_from_csv(path, fd_order: int = 4) -> SampledCurve:
    """Uniformly sampled curve from ``t,x_1,...,x_n`` rows."""
    header, data = read_csv_table(path)
    t = data[:, 0]
    if t.size < 3:
        raise SpecError(f"{path}: too few samples")
    h = (t[-1] - t[0]) / (t.size - 1)
    if not h > 0 or np.max(np.abs(np.diff(t) - h)) > 1e-6 * abs(h):
        raise SpecError(f"{path}: t column is not a uniform increasing grid")
    return SampledCurve(data[:, 1:], h, t0=t[0], fd_order=fd_order)


def load_curve(arg: str) -> CurveProvider:
    if arg.startswith("catalog:"):
        parts = arg.split(":")
        try:
            params = [float(p) for p in parts[2:]]
        except ValueError as e:
            raise SpecError(f"{arg}: catalog parameters must be numbers") from e
        try:
            return make_catalog(parts[1], params)
        except BadParams as e:
            raise SpecError(f"{arg}: {e}") from e
    if arg.lower().endswith(".csv"):
        return curve_from_csv(arg)
    return curve_from_doc(load_json(arg, CURVE_SCHEMA, "curve spec"), arg)


def load_map(arg: str) -> SpecialAffineMap:
    doc = load_json(arg, MAP_SCHEMA, "map")
    B = doc["B"]
    if any(len(r) != len(B) for r in B):
        raise SpecError(f"{arg}: at $.B: matrix must be square")
    if "tau" in doc and len(doc["tau"]) != len(B):
        raise SpecError(f"{arg}: at $.tau: expected {len(B)} entries")
    return SpecialAffineMap.from_json(doc)


def load_curvature_spec(arg: str) -> CurvatureSpec:
    doc = load_json(arg, CURVATURE_SCHEMA, "curvature spec")
    try:
        return CurvatureSpec.from_json(doc)
    except (BadParams, DimensionMismatch) as e:
        raise SpecError(f"{arg}: {e}") from e


def write_rows(fh, header, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([f"{v:.17g}" for v in r])
