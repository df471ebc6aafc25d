"""JSON file formats: state files, local-unitary files and tensor dumps.

Numbers are written with 17 significant digits, which round-trips any
double exactly.  A state file holds ``n_qubits`` plus exactly one of::

    "matrix":   {"re": [[...], ...], "im": [[...], ...]}
    "pure":     {"re": [...], "im": [...]}
    "ensemble": {"weights": [...], "pures": [{"re": [...], "im": [...]}, ...]}
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .bloch import BlochTensors, all_subsets
from .errors import BadDimension, BlochLUError, IncompleteTensors
from .qstate import ATOL, DensityState, LocalUnitary, check_su2, mixture, pure_state_density, validate_density


class StateFileError(BlochLUError):
    pass


def format_number(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x}")
    if x == 0:
        return "0"
    return format(x, ".17g")


def _is_numeric_list(obj):
    return isinstance(obj, (list, tuple)) and all(
        isinstance(v, (int, float, np.floating, np.integer)) and not isinstance(v, bool)
        or _is_numeric_list(v) for v in obj) and len(obj) > 0


def _is_scalar(v):
    return isinstance(v, (str, int, float, np.floating, np.integer)) and not isinstance(v, bool)


def _compact(obj):
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_compact(v) for v in obj) + "]"
    return format_number(obj)


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with full-precision floats; numeric arrays stay on one line."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if _is_numeric_list(obj):
            return _compact(obj)
        if all(isinstance(v, str) for v in obj[:1]) and all(_is_scalar(v) for v in obj):
            # short records such as ["label", value] stay on one line
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    return format_number(obj)


def _load_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if exc.lineno - 1 < len(text.splitlines()) else ""
        raise StateFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}") from None


def _grid(obj, name, rows=None, cols=None):
    if not isinstance(obj, list):
        raise BadDimension(f"{name}: expected a list of rows")
    if rows is not None and len(obj) != rows:
        raise BadDimension(f"{name}: expected {rows} rows, got {len(obj)}")
    width = cols if cols is not None else (len(obj[0]) if obj and isinstance(obj[0], list) else None)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != width:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise BadDimension(f"{name}: row {i} has {got} entries, expected {width}")
    return np.array(obj, dtype=float)


def _complex_vector(obj, name):
    re = np.asarray(obj.get("re"), dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.ndim != 1 or re.shape != im.shape:
        raise BadDimension(f"{name}: re/im must be equal-length vectors")
    return re + 1j * im


def state_from_dict(doc: dict, atol: float = ATOL) -> DensityState:
    if not isinstance(doc, dict) or "n_qubits" not in doc:
        raise StateFileError("state document needs an 'n_qubits' field")
    n = int(doc["n_qubits"])
    dim = 1 << n
    kinds = [k for k in ("matrix", "pure", "ensemble") if k in doc]
    if len(kinds) != 1:
        raise StateFileError(f"exactly one of matrix/pure/ensemble required, got {kinds}")
    kind = kinds[0]
    if kind == "matrix":
        m = doc["matrix"]
        re = _grid(m.get("re"), "matrix.re", dim, dim)
        im = _grid(m["im"], "matrix.im", dim, dim) if "im" in m else np.zeros_like(re)
        state = validate_density(re + 1j * im, atol=atol)
    elif kind == "pure":
        psi = _complex_vector(doc["pure"], "pure")
        if psi.size != dim:
            raise BadDimension(f"pure: expected {dim} amplitudes, got {psi.size}")
        state = pure_state_density(psi)
    else:
        ens = doc["ensemble"]
        weights = np.asarray(ens["weights"], dtype=float)
        if np.any(weights <= 0) or abs(weights.sum() - 1) > atol:
            raise StateFileError("ensemble weights must be positive and sum to 1")
        pures = [_complex_vector(p, f"ensemble.pures[{i}]") for i, p in enumerate(ens["pures"])]
        if len(pures) != len(weights) or any(p.size != dim for p in pures):
            raise BadDimension(f"ensemble: need {len(weights)} vectors of length {dim}")
        state = mixture(weights, [pure_state_density(p) for p in pures])
    return state


def state_to_dict(state: DensityState) -> dict:
    m = np.asarray(state.matrix)
    return {"n_qubits": state.n_qubits, "matrix": {"re": m.real.tolist(), "im": m.imag.tolist()}}


def read_state(path, atol: float = ATOL) -> DensityState:
    return state_from_dict(_load_json(path), atol)


def write_state(path, state: DensityState) -> None:
    Path(path).write_text(dumps(state_to_dict(state)) + "\n")


def lu_to_dict(lu: LocalUnitary, **extra) -> dict:
    doc = {"n_qubits": lu.n_qubits,
           "factors": [{"re": np.real(u).tolist(), "im": np.imag(u).tolist()} for u in lu.factors]}
    doc.update(extra)
    return doc


def lu_from_dict(doc: dict, atol: float = 1e-9) -> LocalUnitary:
    factors = []
    for i, f in enumerate(doc.get("factors", [])):
        u = _grid(f["re"], f"factors[{i}].re", 2, 2) + 1j * _grid(f.get("im", [[0, 0], [0, 0]]),
                                                                 f"factors[{i}].im", 2, 2)
        factors.append(check_su2(u, atol))
    if "n_qubits" in doc and int(doc["n_qubits"]) != len(factors):
        raise StateFileError(f"n_qubits={doc['n_qubits']} but {len(factors)} factors given")
    return LocalUnitary(tuple(factors))


def read_local_unitary(path) -> LocalUnitary:
    return lu_from_dict(_load_json(path))


def write_local_unitary(path, lu: LocalUnitary, **extra) -> None:
    Path(path).write_text(dumps(lu_to_dict(lu, **extra)) + "\n")


def tensor_key(subset) -> str:
    return "T" + "".join(str(q) for q in subset)


def tensors_to_dict(t: BlochTensors) -> dict:
    return {
        "n_qubits": t.n_qubits,
        "normalization": "Tr(rho P) / 2**n_qubits",
        "pauli_order": "x,y,z",
        "tensors": {tensor_key(s): t.tensors[s].tolist() for s in all_subsets(t.n_qubits)},
    }


def tensors_from_dict(doc: dict) -> BlochTensors:
    n = int(doc["n_qubits"])
    raw = doc.get("tensors", {})
    tensors = {}
    for s in all_subsets(n):
        key = tensor_key(s)
        if key not in raw:
            raise IncompleteTensors(f"tensor dump lacks {key}")
        arr = np.asarray(raw[key], dtype=float)
        if arr.shape != (3,) * len(s):
            raise BadDimension(f"{key}: expected shape {(3,) * len(s)}, got {arr.shape}")
        tensors[s] = arr
    return BlochTensors(n, tensors)
