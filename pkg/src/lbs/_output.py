"""Deterministic text formatting for CLI output (12 significant digits)."""
from __future__ import annotations

import math


def fmt(value) -> str:
    """Render one value for CSV/JSON cells; floats use %.12g."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value on an output path: {value!r}")
        return f"{value:.12g}"
    return str(value)


def dumps(obj, indent: int = 0) -> str:
    """JSON serialization with %.12g floats and stable ordering."""
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int,)):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite value on an output path: {obj!r}")
        return f"{obj:.12g}"
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  "{k}": {dumps(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        body = ", ".join(dumps(v, indent + 1) for v in obj)
        return "[" + body + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
