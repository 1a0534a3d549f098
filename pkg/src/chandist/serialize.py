"""JSON interchange for channels, states, vectors, and results.

Schema: complex scalars are ``[re, im]`` pairs; matrices are row-major
arrays of rows; channels are objects ``{"repr", "dim_in", "dim_out",
"data"}`` with ``repr`` one of ``kraus`` / ``choi`` / ``stinespring``.
Emitted documents carry ``"schema_version": 1``.  Floats rely on Python's
shortest-roundtrip repr, so serialized doubles survive a parse bit-exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .channels import SuperOp

SCHEMA_VERSION = 1

REPR_KRAUS = "kraus"
REPR_CHOI = "choi"
REPR_STINESPRING = "stinespring"


class SchemaError(ValueError):
    """Malformed document; the message names the offending field or index."""


def complex_to_json(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_json(m) -> list[list[list[float]]]:
    arr = np.asarray(m, dtype=complex)
    return [[complex_to_json(x) for x in row] for row in arr]


def vector_to_json(v) -> list[list[float]]:
    return [complex_to_json(x) for x in np.asarray(v, dtype=complex).reshape(-1)]


def complex_from_json(obj, path: str) -> complex:
    if (not isinstance(obj, (list, tuple)) or len(obj) != 2
            or not all(isinstance(x, (int, float)) for x in obj)):
        raise SchemaError(f"{path}: expected a [re, im] pair, got {obj!r}")
    return complex(obj[0], obj[1])


def matrix_from_json(obj, path: str, rows: int | None = None,
                     cols: int | None = None) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{path}: expected a non-empty array of rows")
    if rows is not None and len(obj) != rows:
        raise SchemaError(f"{path}: expected {rows} rows, got {len(obj)}")
    width = cols
    out = []
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise SchemaError(f"{path}[{i}]: expected an array of entries")
        if width is None:
            width = len(row)
        if len(row) != width:
            raise SchemaError(
                f"{path}[{i}]: expected {width} entries, got {len(row)}")
        out.append([complex_from_json(x, f"{path}[{i}][{j}]")
                    for j, x in enumerate(row)])
    return np.asarray(out, dtype=complex)


def vector_from_json(obj, path: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{path}: expected a non-empty array of entries")
    return np.asarray(
        [complex_from_json(x, f"{path}[{i}]") for i, x in enumerate(obj)],
        dtype=complex)


def _require_positive_int(obj, path: str) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool) or obj < 1:
        raise SchemaError(f"{path}: expected a positive integer, got {obj!r}")
    return obj


def channel_to_json(phi: SuperOp, repr_name: str = REPR_KRAUS) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "repr": repr_name,
        "dim_in": phi.dim_in,
        "dim_out": phi.dim_out,
    }
    if repr_name == REPR_KRAUS:
        doc["data"] = {
            "a_ops": [matrix_to_json(a) for a in phi.kraus_a],
            "b_ops": (None if phi.cp_symmetric
                      else [matrix_to_json(b) for b in phi.kraus_b]),
        }
    elif repr_name == REPR_CHOI:
        doc["data"] = matrix_to_json(phi.choi)
    elif repr_name == REPR_STINESPRING:
        doc["data"] = {
            "dim_env": phi.dim_env,
            "a": matrix_to_json(phi.stine_a),
            "b": (None if phi.cp_symmetric else matrix_to_json(phi.stine_b)),
        }
    else:
        raise ValueError(f"unknown representation {repr_name!r}")
    return doc


def channel_from_json(obj, path: str = "channel") -> SuperOp:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    repr_name = obj.get("repr")
    if repr_name not in (REPR_KRAUS, REPR_CHOI, REPR_STINESPRING):
        raise SchemaError(
            f"{path}.repr: expected one of kraus/choi/stinespring, "
            f"got {repr_name!r}")
    dim_in = _require_positive_int(obj.get("dim_in"), f"{path}.dim_in")
    dim_out = _require_positive_int(obj.get("dim_out"), f"{path}.dim_out")
    data = obj.get("data")
    if repr_name == REPR_CHOI:
        d = dim_in * dim_out
        j = matrix_from_json(data, f"{path}.data", rows=d, cols=d)
        return SuperOp.from_choi(j, dim_in, dim_out)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}.data: expected an object")
    if repr_name == REPR_KRAUS:
        a_json = data.get("a_ops")
        if not isinstance(a_json, list) or not a_json:
            raise SchemaError(f"{path}.data.a_ops: expected a non-empty array")
        a_ops = [matrix_from_json(m, f"{path}.data.a_ops[{i}]",
                                  rows=dim_out, cols=dim_in)
                 for i, m in enumerate(a_json)]
        b_json = data.get("b_ops")
        if b_json is None:
            return SuperOp.from_kraus(a_ops)
        if not isinstance(b_json, list) or len(b_json) != len(a_json):
            raise SchemaError(
                f"{path}.data.b_ops: expected {len(a_json)} matrices")
        b_ops = [matrix_from_json(m, f"{path}.data.b_ops[{i}]",
                                  rows=dim_out, cols=dim_in)
                 for i, m in enumerate(b_json)]
        return SuperOp.from_kraus(a_ops, b_ops)
    dim_env = _require_positive_int(data.get("dim_env"), f"{path}.data.dim_env")
    a = matrix_from_json(data.get("a"), f"{path}.data.a",
                         rows=dim_out * dim_env, cols=dim_in)
    b_json = data.get("b")
    b = None if b_json is None else matrix_from_json(
        b_json, f"{path}.data.b", rows=dim_out * dim_env, cols=dim_in)
    return SuperOp.from_stinespring(a, b, dim_out=dim_out)


def state_to_json(rho) -> dict:
    arr = np.asarray(rho, dtype=complex)
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": arr.shape[0],
        "matrix": matrix_to_json(arr),
    }


def state_from_json(obj, path: str = "state") -> np.ndarray:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    dim = _require_positive_int(obj.get("dim"), f"{path}.dim")
    return matrix_from_json(obj.get("matrix"), f"{path}.matrix",
                            rows=dim, cols=dim)


def dump_json(doc) -> str:
    """Deterministic pretty serialization with a trailing newline."""
    return json.dumps(doc, indent=2) + "\n"
