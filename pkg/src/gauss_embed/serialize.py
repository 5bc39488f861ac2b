"""Deterministic JSON emission.

Floats are written with Python's shortest round-trip repr, ``-0.0`` is
folded to ``0.0`` and non-finite values become ``null``, so identical runs
give identical bytes.
"""

from __future__ import annotations

import enum
import json
import math

import numpy as np


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays, enums and tuples to plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, enum.Enum):
        return to_jsonable(obj.value)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return x + 0.0
    return obj


def dumps(obj, indent: int | None = 2) -> str:
    return json.dumps(to_jsonable(obj), indent=indent, allow_nan=False)
