"""Serialization of matrices, tables and reports.

CSV floats are written with 17 significant digits and JSON floats with
Python's shortest round-trip repr, so every value reads back exactly.  JSON
uses sorted keys and a fixed layout, which keeps repeated runs byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DimensionError, ValidationError


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj) -> str:
    text = json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False)
    return text + "\n"


def write_json(path: Path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def table_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def write_table(path: Path, header: list[str], rows: list[list], fmt: str = "csv") -> Path:
    path = Path(path)
    if fmt == "csv":
        path = path.with_suffix(".csv")
        path.write_text(table_csv(header, rows), encoding="utf-8")
    elif fmt == "json":
        path = path.with_suffix(".json")
        write_json(path, {"columns": header, "rows": [dict(zip(header, r)) for r in rows]})
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    return path


@dataclass(frozen=True)
class MatrixFile:
    """``{dim, layout: "row-major", entries: [[re, im], ...]}``."""

    matrix: np.ndarray

    def to_json(self) -> dict:
        m = np.asarray(self.matrix, dtype=complex)
        return {
            "dim": int(m.shape[0]),
            "layout": "row-major",
            "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MatrixFile":
        try:
            dim = int(data["dim"])
            layout = data["layout"]
            entries = data["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed matrix file: {exc}") from exc
        if layout != "row-major":
            raise ValidationError(f"unsupported layout {layout!r}")
        if dim < 1 or len(entries) != dim * dim:
            raise DimensionError(f"expected {dim * dim} entries, got {len(entries)}")
        try:
            values = np.array([complex(float(re), float(im)) for re, im in entries])
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"malformed matrix entry: {exc}") from exc
        return cls(values.reshape(dim, dim))

    def save(self, path: Path) -> None:
        write_json(path, self.to_json())

    @classmethod
    def load(cls, path: Path) -> "MatrixFile":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path} is not valid JSON: {exc}") from exc
        return cls.from_json(data)


def load_schema(name: str) -> dict:
    text = resources.files("coltomo.schemas").joinpath(f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
