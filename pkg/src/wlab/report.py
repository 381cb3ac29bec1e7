"""Deterministic JSON rendering of analysis results.

Every report type in the package is a frozen dataclass, so a document is
produced by walking the dataclass tree: fields keep their declaration order,
rationals become {"num", "den", "decimal"}, complex numbers {"re", "im"},
sphere points "inf" or {"re", "im"}, and non-finite floats the strings
"inf"/"-inf"/"nan" (keeping the output strict JSON).  Two runs on the same
input and flags produce byte-identical documents.
"""

from __future__ import annotations

import json
from dataclasses import fields, is_dataclass
from fractions import Fraction

import numpy as np

from .rational import RationalFunction, SpherePoint
from .exprparse import format_expression

__all__ = ["SCHEMA_VERSION", "encode", "document", "to_json"]

SCHEMA_VERSION = 1


def _encode_float(x: float):
    if x != x:
        return "nan"
    if x == float("inf"):
        return "inf"
    if x == float("-inf"):
        return "-inf"
    return float(x)


def encode(value):
    """Recursively convert a report object into JSON-ready primitives."""
    if value is None or isinstance(value, (bool, np.bool_)):
        return None if value is None else bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return {
            "num": int(value.numerator),
            "den": int(value.denominator),
            "decimal": _encode_float(float(value)),
        }
    if isinstance(value, (float, np.floating)):
        return _encode_float(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        c = complex(value)
        return {"re": _encode_float(c.real), "im": _encode_float(c.imag)}
    if isinstance(value, str):
        return value
    if isinstance(value, SpherePoint):
        if value.is_infinity:
            return "inf"
        return {"re": _encode_float(value.value.real), "im": _encode_float(value.value.imag)}
    if isinstance(value, RationalFunction):
        return format_expression(value)
    if is_dataclass(value) and not isinstance(value, type):
        return {f.name: encode(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, np.ndarray):
        return [encode(v) for v in value.tolist()]
    raise TypeError(f"cannot encode {type(value).__name__} into a report")


def document(command: str, label: str, body, seed=None, tolerance_scale: float = 1.0) -> dict:
    """Wrap an encoded body with the schema header common to all commands."""
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "label": label,
        "seed": None if seed is None else int(seed),
        "tolerance_scale": _encode_float(float(tolerance_scale)),
        "report": encode(body),
    }


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"
