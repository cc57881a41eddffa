"""JSON interchange formats and the deterministic report emitter.

Complex numbers are two-element ``[re, im]`` arrays; matrices are flat
row-major lists of those pairs with the shape implied by ``dim``. Reports are
emitted with a fixed field order and every float printed with 17 significant
digits, so identical inputs produce byte-identical output and every value
round-trips exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .channel import KrausChannel
from .errors import ParseError
from .linalg import DEFAULT_TOL, Tolerances
from .measurement import Povm, ProjectiveMeasurement

SCHEMA_VERSION = "1"


# ---------------------------------------------------------------------------
# wire form of matrices
# ---------------------------------------------------------------------------


def matrix_to_wire(m: np.ndarray) -> list:
    a = np.asarray(m, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in a.reshape(-1)]  # row-major


def wire_to_matrix(data, rows: int, cols: int, path: str) -> np.ndarray:
    if not isinstance(data, list):
        raise ParseError("matrix must be a list of [re, im] pairs", path)
    if len(data) != rows * cols:
        raise ParseError(f"expected {rows * cols} entries, got {len(data)}", path)
    out = np.empty(rows * cols, dtype=complex)
    for k, pair in enumerate(data):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
        ):
            raise ParseError("entry must be a [re, im] pair of numbers", f"{path}[{k}]")
        out[k] = complex(float(pair[0]), float(pair[1]))
    return out.reshape(rows, cols)


def _loads(data, path: str = "$") -> dict:
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"invalid JSON at line {exc.lineno}, column {exc.colno}", path
            ) from exc
    else:
        obj = data
    if not isinstance(obj, dict):
        raise ParseError("document must be a JSON object", path)
    return obj


def _require(obj: dict, key: str, kind, path: str):
    if key not in obj:
        raise ParseError(f"missing field {key!r}", path)
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise ParseError(f"field {key!r} must be an integer", f"{path}.{key}")
    if not isinstance(value, kind):
        raise ParseError(f"field {key!r} has the wrong type", f"{path}.{key}")
    return value


# ---------------------------------------------------------------------------
# channel documents
# ---------------------------------------------------------------------------


def channel_to_document(ch: KrausChannel, metadata: dict | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "dim": ch.dim,
        "kraus": [matrix_to_wire(a) for a in ch.kraus],
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def parse_channel_ops(data) -> tuple[int, list[np.ndarray]]:
    """Parse the structure of a channel document without validating the map."""
    obj = _loads(data)
    _require(obj, "schema_version", str, "$")
    dim = _require(obj, "dim", int, "$")
    if dim < 1:
        raise ParseError("dim must be >= 1", "$.dim")
    kraus_raw = _require(obj, "kraus", list, "$")
    if not kraus_raw:
        raise ParseError("kraus list must be nonempty", "$.kraus")
    ops = [
        wire_to_matrix(entry, dim, dim, f"$.kraus[{k}]") for k, entry in enumerate(kraus_raw)
    ]
    return dim, ops


def parse_channel(data, tol: Tolerances = DEFAULT_TOL) -> KrausChannel:
    """Parse and validate a channel document.

    Raises ParseError with a field path on malformed input and
    ValidationError (carrying the residual report) on non-unital input.
    """
    _, ops = parse_channel_ops(data)
    return KrausChannel.from_kraus(ops, tol)


# ---------------------------------------------------------------------------
# measurement and operator documents
# ---------------------------------------------------------------------------


def measurement_to_document(m: Povm | ProjectiveMeasurement) -> dict:
    projective = isinstance(m, ProjectiveMeasurement)
    elements = m.projectors if projective else m.elements
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": m.dim,
        "type": "projective" if projective else "povm",
        "elements": [matrix_to_wire(e) for e in elements],
    }


def parse_measurement(data) -> Povm | ProjectiveMeasurement:
    obj = _loads(data)
    _require(obj, "schema_version", str, "$")
    dim = _require(obj, "dim", int, "$")
    if dim < 1:
        raise ParseError("dim must be >= 1", "$.dim")
    kind = _require(obj, "type", str, "$")
    if kind not in ("povm", "projective"):
        raise ParseError("type must be 'povm' or 'projective'", "$.type")
    elements_raw = _require(obj, "elements", list, "$")
    if not elements_raw:
        raise ParseError("elements list must be nonempty", "$.elements")
    mats = [
        wire_to_matrix(entry, dim, dim, f"$.elements[{k}]")
        for k, entry in enumerate(elements_raw)
    ]
    if kind == "projective":
        return ProjectiveMeasurement(dim=dim, projectors=tuple(mats))
    return Povm(dim=dim, elements=tuple(mats))


def operator_to_document(m: np.ndarray) -> dict:
    a = np.asarray(m, dtype=complex)
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": int(a.shape[0]),
        "matrix": matrix_to_wire(a),
    }


def parse_operator(data) -> np.ndarray:
    """Parse a single-operator document (states, POVM elements, unitaries)."""
    obj = _loads(data)
    _require(obj, "schema_version", str, "$")
    dim = _require(obj, "dim", int, "$")
    if dim < 1:
        raise ParseError("dim must be >= 1", "$.dim")
    return wire_to_matrix(_require(obj, "matrix", list, "$"), dim, dim, "$.matrix")


# ---------------------------------------------------------------------------
# deterministic report emission
# ---------------------------------------------------------------------------


def _emit(value, parts: list[str]) -> None:
    if value is None:
        parts.append("null")
    elif isinstance(value, (bool, np.bool_)):
        parts.append("true" if value else "false")
    elif isinstance(value, (int, np.integer)):
        parts.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        parts.append(format(float(value), ".17g"))
    elif isinstance(value, str):
        parts.append(json.dumps(value))
    elif isinstance(value, dict):
        parts.append("{")
        for i, (k, v) in enumerate(value.items()):
            if i:
                parts.append(",")
            parts.append(json.dumps(str(k)))
            parts.append(":")
            _emit(v, parts)
        parts.append("}")
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for i, v in enumerate(value):
            if i:
                parts.append(",")
            _emit(v, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__} into a report")


def dumps_report(obj: dict) -> str:
    """Serialize a report with fixed field order and 17-significant-digit floats."""
    parts: list[str] = []
    _emit(obj, parts)
    return "".join(parts)


def tolerances_to_document(tol: Tolerances) -> dict:
    return {
        "hermitian": tol.hermitian,
        "nullspace": tol.nullspace,
        "eigencluster": tol.eigencluster,
        "residual": tol.residual,
        "optimizer": tol.optimizer,
    }
