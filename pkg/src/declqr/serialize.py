"""Deterministic serialization helpers: floats carry 17 significant digits
(enough to round-trip any 64-bit value), and JSON objects are emitted with
sorted keys so identical inputs give identical bytes."""

import json
import math

import numpy as np

from .errors import InputError


def format_float(x):
    """Render a finite 64-bit float with 17 significant digits."""
    x = float(x)
    if not math.isfinite(x):
        raise InputError("cannot serialize a non-finite float")
    return format(x, ".17g")


def _encode(value):
    if isinstance(value, dict):
        items = sorted(value.items())
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in value) + "]"
    if isinstance(value, np.ndarray):
        return _encode(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    raise InputError(f"cannot serialize value of type {type(value).__name__}")


def dumps_json(value):
    """JSON text with 17-significant-digit floats and sorted object keys."""
    return _encode(value)
