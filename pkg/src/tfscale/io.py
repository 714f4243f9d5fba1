"""Frame files and result documents.

A frame file is JSON::

    {"field": "R", "n": 2, "unit_norm": true, "vectors": [[1, 0], [0, 1]]}

``field`` is ``"R"`` or ``"C"``; complex entries are ``[re, im]`` pairs (plain
numbers are read as real).  ``n`` and ``unit_norm`` are optional.  Floats are
written with Python's shortest round-trip representation, so
``parse_frame(emit_frame(F))`` reproduces ``F`` bit for bit.
"""
from __future__ import annotations

import hashlib
import json
import math
from importlib import metadata

import numpy as np

from .config import DEFAULT, Config
from .errors import DimensionMismatch, NormViolation, ParseError
from .frames import Field, Frame

TOOL = "tfscale"
_KEYS = {"field", "n", "unit_norm", "vectors"}


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0.0.0"


def digest(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"expected a number, got {json.dumps(x)}", where)
    return float(x)


def _entry(x, complex_field: bool, where: str):
    if complex_field and isinstance(x, list):
        if len(x) != 2:
            raise ParseError("complex entries must be [re, im] pairs", where)
        return complex(_number(x[0], f"{where}[0]"), _number(x[1], f"{where}[1]"))
    return _number(x, where)


def parse_frame(text: str, renormalize: bool = False, config: Config = DEFAULT) -> Frame:
    """Read a frame file.

    With ``"unit_norm": true`` every vector must have norm ``1 +- tau_unit``,
    otherwise :class:`NormViolation` names the first offender.  Passing
    ``renormalize=True`` rescales such vectors instead (zero vectors still fail).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "$")
    extra = set(doc) - _KEYS
    if extra:
        raise ParseError(f"unknown keys {sorted(extra)}", "$")
    for key in ("field", "vectors"):
        if key not in doc:
            raise ParseError(f"missing key '{key}'", "$")
    if doc["field"] not in ("R", "C"):
        raise ParseError(f"field must be \"R\" or \"C\", got {json.dumps(doc['field'])}", "field")
    field = Field(doc["field"])
    unit = doc.get("unit_norm", False)
    if not isinstance(unit, bool):
        raise ParseError("unit_norm must be true or false", "unit_norm")
    rows = doc["vectors"]
    if not isinstance(rows, list) or not rows:
        raise ParseError("vectors must be a non-empty list", "vectors")
    n = doc.get("n")
    if n is not None and (isinstance(n, bool) or not isinstance(n, int)):
        raise ParseError("n must be an integer", "n")
    cplx = field is Field.COMPLEX
    data = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise ParseError("each vector must be a list", f"vectors[{i}]")
        want = len(rows[0]) if n is None else n
        if len(row) != want:
            raise DimensionMismatch(f"vectors[{i}] has {len(row)} entries, expected {want}")
        data.append([_entry(x, cplx, f"vectors[{i}][{j}]") for j, x in enumerate(row)])
    v = np.array(data, dtype=np.complex128 if cplx else np.float64)
    if unit:
        norms = np.linalg.norm(v, axis=1)
        for i, nv in enumerate(norms):
            if abs(nv - 1.0) > config.tau_unit:
                if not renormalize or nv == 0.0 or not math.isfinite(nv):
                    raise NormViolation(i, float(nv))
                v[i] /= nv
    return Frame.create(v, field, unit, config)


def frame_to_dict(frame: Frame) -> dict:
    if frame.is_complex:
        vecs = [[[z.real, z.imag] for z in row] for row in frame.vectors.tolist()]
    else:
        vecs = frame.vectors.tolist()
    return {"field": frame.field.value, "n": frame.n, "unit_norm": frame.unit_norm, "vectors": vecs}


def emit_frame(frame: Frame) -> str:
    return json.dumps(frame_to_dict(frame), indent=2) + "\n"


def jsonable(x):
    """Recursively convert numpy values to JSON-ready Python objects.

    Complex numbers become ``[re, im]`` and non-finite floats the strings
    ``"inf"``, ``"-inf"`` or ``"nan"`` so documents stay strict JSON.
    """
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [jsonable(float(x.real)), jsonable(float(x.imag))]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def result_document(command: str, input_bytes: bytes | str, config: Config, **payload) -> dict:
    """Common envelope: tool, version, command, input digest and tolerances."""
    doc = {
        "tool": TOOL,
        "version": tool_version(),
        "command": command,
        "input_digest": digest(input_bytes),
        "tolerances": config.as_dict(),
    }
    doc.update(payload)
    return jsonable(doc)


def scaling_payload(result) -> dict:
    """Verdict, coefficients, certificate, residuals and diagnostics of a scaling result."""
    cert = result.certificate
    rep = result.verification
    return {
        "verdict": result.verdict.value,
        "coefficients": result.coefficients,
        "lambda": result.lam,
        "certificate": None if cert is None else {"kind": cert.kind.value, "vector": cert.vector, "detail": cert.detail},
        "residuals": None
        if rep is None
        else {"gdg": rep.gdg_residual, "tight": rep.tight_residual, "trace": rep.trace_residual},
        "diagnostics": result.diagnostics,
    }


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
