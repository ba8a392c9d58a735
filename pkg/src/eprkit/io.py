"""Text serialization, schema ``eprkit/1``.

Every file is one JSON object::

    {"schema": "eprkit/1", "kind": "density", "dims": [2, 2],
     "shape": [4, 4], "data": [[re, im], ...], "meta": {"seed": "7"}}

``data`` lists complex entries row-major as ``[re, im]`` pairs.  Python's
float repr is shortest-round-trip, so finite doubles survive a save/load
cycle bit for bit.  ``meta`` is a flat string-to-string map; the flags
``subnormalized`` (density) and ``unnormalized`` (pure_state) relax the
trace and norm checks on load.

Kinds: pure_state, vector, density, operator, operator_list,
antilinear_map, channel, basis, schmidt, report.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .antilinear import AntilinearMap
from .channel import ChannelMap
from .linalg import InvariantError, PureState, check_density, unit_vector
from .smap import SchmidtDecomposition

SCHEMA = "eprkit/1"
KINDS = (
    "pure_state",
    "vector",
    "density",
    "operator",
    "operator_list",
    "antilinear_map",
    "channel",
    "basis",
    "schmidt",
    "report",
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.line = line
        self.column = column


class SchemaError(ParseError):
    pass


@dataclass
class SerializedObject:
    kind: str
    dims: list[int]
    value: object
    meta: dict[str, str] = field(default_factory=dict)


def encode_array(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {
        "shape": list(a.shape),
        "data": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def decode_array(obj: dict) -> np.ndarray:
    try:
        shape = [int(n) for n in obj["shape"]]
        pairs = obj["data"]
        flat = np.array([complex(float(re), float(im)) for re, im in pairs], dtype=complex)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed array: {exc}") from None
    if flat.size != int(np.prod(shape)):
        raise ParseError(f"{flat.size} entries for shape {shape}")
    if not np.all(np.isfinite(flat)):
        raise InvariantError("matrix.finite", "non-finite entry")
    return flat.reshape(shape)


def jsonable(x):
    """Recursively turn arrays and numpy scalars into JSON values."""
    if isinstance(x, PureState):
        return encode_array(x.vector)
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            return encode_array(x)
        return x.tolist()
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def _infer(value) -> tuple[str, list[int]]:
    from .teleport import MeasurementBasis

    if isinstance(value, PureState):
        return "pure_state", list(value.dims)
    if isinstance(value, AntilinearMap):
        return "antilinear_map", [value.dst_dim, value.src_dim]
    if isinstance(value, ChannelMap):
        return "channel", [value.src_dim, value.dst_dim]
    if isinstance(value, MeasurementBasis):
        return "basis", list(value.dims)
    if isinstance(value, SchmidtDecomposition):
        return "schmidt", [value.left_vectors.shape[0], value.right_vectors.shape[0]]
    if isinstance(value, dict):
        return "report", []
    raise TypeError(f"cannot infer the kind of {type(value).__name__}; pass kind=")


def to_dict(value, kind: str | None = None, dims=None, meta: dict | None = None) -> dict:
    if kind is None:
        kind, inferred = _infer(value)
        dims = inferred if dims is None else dims
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    meta = {str(k): str(v) for k, v in (meta or {}).items()}
    out = {"schema": SCHEMA, "kind": kind, "dims": [int(d) for d in (dims or [])]}

    if kind == "pure_state":
        state = value if isinstance(value, PureState) else None
        arr = state.vector if state is not None else np.asarray(value)
        if state is not None:
            out["dims"] = list(state.dims)
            if state.unnormalized:
                meta.setdefault("unnormalized", "true")
        out.update(encode_array(arr))
    elif kind == "antilinear_map":
        out["dims"] = [value.dst_dim, value.src_dim]
        out.update(encode_array(value.kmatrix))
    elif kind == "channel":
        out["dims"] = [value.src_dim, value.dst_dim]
        stack = np.zeros((len(value.kraus), value.dst_dim, value.src_dim), dtype=complex)
        for i, s in enumerate(value.kraus):
            stack[i] = s.kmatrix
        out.update(encode_array(stack))
    elif kind == "basis":
        out["dims"] = list(value.dims)
        out.update(encode_array(np.array([s.vector for s in value])))
    elif kind == "operator_list":
        out.update(encode_array(np.array([np.asarray(u, dtype=complex) for u in value])))
    elif kind == "schmidt":
        out["dims"] = [value.left_vectors.shape[0], value.right_vectors.shape[0]]
        out["data"] = {
            "coefficients": [float(p) for p in value.coefficients],
            "left": encode_array(value.left_vectors),
            "right": encode_array(value.right_vectors),
        }
    elif kind == "report":
        out["data"] = jsonable(value)
    else:  # vector, density, operator
        arr = np.asarray(value, dtype=complex)
        if not out["dims"]:
            out["dims"] = [arr.shape[0]]
        out.update(encode_array(arr))
    out["meta"] = meta
    return out


def dumps(value, kind: str | None = None, dims=None, meta: dict | None = None) -> str:
    return json.dumps(to_dict(value, kind, dims, meta), allow_nan=False, indent=1) + "\n"


def _flag(meta: dict, name: str) -> bool:
    return str(meta.get(name, "")).lower() in ("1", "true", "yes")


def from_dict(obj) -> SerializedObject:
    from .teleport import MeasurementBasis

    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object")
    schema = obj.get("schema")
    if schema != SCHEMA:
        raise SchemaError(f"schema version {schema!r}, expected {SCHEMA!r}")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}")
    meta = obj.get("meta") or {}
    if not isinstance(meta, dict):
        raise ParseError("meta must be an object")
    meta = {str(k): str(v) for k, v in meta.items()}
    try:
        dims = [int(d) for d in obj.get("dims", [])]
    except (TypeError, ValueError):
        raise ParseError("dims must be a list of integers") from None

    if kind == "report":
        return SerializedObject(kind, dims, obj.get("data"), meta)
    if kind == "schmidt":
        d = obj.get("data") or {}
        try:
            value = SchmidtDecomposition(
                np.array([float(p) for p in d["coefficients"]]),
                decode_array(d["left"]),
                decode_array(d["right"]),
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed schmidt data: {exc}") from None
        return SerializedObject(kind, dims, value, meta)

    arr = decode_array(obj)
    if kind == "pure_state":
        value = PureState(arr, tuple(dims), unnormalized=_flag(meta, "unnormalized"))
    elif kind == "vector":
        value = arr.ravel()
        if _flag(meta, "unit"):
            unit_vector(value)
    elif kind == "density":
        value = check_density(arr, subnormalized=_flag(meta, "subnormalized"))
    elif kind == "operator":
        value = arr
    elif kind == "operator_list":
        value = [m for m in arr]
    elif kind == "antilinear_map":
        value = AntilinearMap(arr)
    elif kind == "channel":
        value = ChannelMap(arr.shape[2], arr.shape[1], tuple(AntilinearMap(k) for k in arr))
    elif kind == "basis":
        value = MeasurementBasis([PureState(v, tuple(dims)) for v in arr])
    return SerializedObject(kind, dims, value, meta)


def loads_object(text: str) -> SerializedObject:
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return from_dict(obj)


def _reject_constant(name):
    raise ParseError(f"non-finite constant {name} is not allowed")


def loads(text: str):
    return loads_object(text).value


def read(path) -> SerializedObject:
    return loads_object(Path(path).read_text())


def load(path):
    return read(path).value


def save(path, value, kind: str | None = None, dims=None, meta: dict | None = None) -> None:
    Path(path).write_text(dumps(value, kind, dims, meta))
