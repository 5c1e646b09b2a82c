"""Matrix JSON format: ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` row-major.

Floats are written with Python's shortest round-trip repr, so a dump/load
cycle reproduces every entry bit for bit.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core_linalg import as_matrix
from .errors import MatrixFormatError


def matrix_to_obj(m) -> dict:
    m = as_matrix(m)
    rows, cols = m.shape
    data = [[float(z.real), float(z.imag)] for z in m.ravel()]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_obj(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"expected keys rows, cols, data: {exc}") from exc
    if rows <= 0 or cols <= 0:
        raise MatrixFormatError("rows and cols must be positive")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFormatError(f"data must hold rows*cols = {rows * cols} entries")
    try:
        vals = np.array([complex(float(re), float(im)) for re, im in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"entries must be [re, im] pairs: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise MatrixFormatError("entries must be finite")
    return vals.reshape(rows, cols)


def dumps_matrix(m) -> str:
    return json.dumps(matrix_to_obj(m))


def loads_matrix(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(str(exc)) from exc
    return matrix_from_obj(obj)


def save_matrix(path, m) -> None:
    Path(path).write_text(dumps_matrix(m) + "\n")


def load_matrix(path) -> np.ndarray:
    return loads_matrix(Path(path).read_text())


def load_family(path) -> list[np.ndarray]:
    """A family file is a JSON array of matrix objects."""
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(str(exc)) from exc
    if isinstance(obj, dict):
        return [matrix_from_obj(obj)]
    if not isinstance(obj, list):
        raise MatrixFormatError("family file must be a JSON array of matrices")
    return [matrix_from_obj(o) for o in obj]


def save_family(path, members) -> None:
    Path(path).write_text(json.dumps([matrix_to_obj(m) for m in members]) + "\n")


def to_jsonable(x):
    """Convert verdict payloads (complex, arrays, dataclasses of those) to JSON types."""
    if isinstance(x, (bool, np.bool_)) or x is None or isinstance(x, str):
        return bool(x) if isinstance(x, np.bool_) else x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return matrix_to_obj(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "to_dict"):
        return to_jsonable(x.to_dict())
    raise TypeError(f"cannot serialize {type(x).__name__}")
