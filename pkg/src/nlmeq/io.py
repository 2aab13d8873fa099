"""JSON matrix files: ``{"n": 2, "real": [[...], ...], "imag": [[...], ...]}``.

Arrays are row-major; ``imag`` may be omitted for real matrices.
"""

import json
import math

import numpy as np


class MatrixFileError(ValueError):
    """Malformed or unreadable matrix file."""


def _rows(obj, field, n):
    if not isinstance(obj, list) or len(obj) != n:
        raise MatrixFileError(f"field '{field}' must be a list of {n} rows")
    out = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise MatrixFileError(f"field '{field}' row {i} must have {n} entries")
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise MatrixFileError(f"field '{field}' row {i} has a non-finite or non-numeric entry")
        out.append([float(v) for v in row])
    return np.array(out, dtype=float).reshape(n, n)


def matrix_from_dict(d):
    if not isinstance(d, dict):
        raise MatrixFileError("matrix file must hold a JSON object")
    if "n" not in d:
        raise MatrixFileError("missing field 'n'")
    n = d["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise MatrixFileError("field 'n' must be a positive integer")
    if "real" not in d:
        raise MatrixFileError("missing field 'real'")
    M = _rows(d["real"], "real", n)
    if d.get("imag") is not None:
        Im = _rows(d["imag"], "imag", n)
        if np.any(Im):
            M = M + 1j * Im
    return M


def matrix_to_dict(M):
    M = np.asarray(M)
    d = {"n": int(M.shape[0]), "real": np.real(M).tolist()}
    if np.iscomplexobj(M) and np.any(np.imag(M)):
        d["imag"] = np.imag(M).tolist()
    return d


def read_matrix(path):
    try:
        with open(path) as fh:
            d = json.load(fh)
    except OSError as exc:
        raise MatrixFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"{path} is not valid JSON: {exc}") from exc
    try:
        return matrix_from_dict(d)
    except MatrixFileError as exc:
        raise MatrixFileError(f"{path}: {exc}") from exc


def write_matrix(path, M):
    with open(path, "w") as fh:
        json.dump(matrix_to_dict(M), fh, indent=2)
        fh.write("\n")
