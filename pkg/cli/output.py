"""
JSON on stdout, atomic files on disk. NaN and infinities become null.
"""

import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, TextIO

import numpy as np

from core.atomic import PathLike, atomic_write_text

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_BAD_INPUT = 2
EXIT_T_MAX = 3
EXIT_DIVERGED = 4
EXIT_SCHEDULE = 5

STATUS_EXIT = {"converged": EXIT_OK, "t_max": EXIT_T_MAX, "diverged": EXIT_DIVERGED}


def jsonable(value: Any) -> Any:
    """Plain JSON types for numpy scalars and arrays, Fractions and tuples"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float, Fraction)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (complex, np.complexfloating)):
        return [jsonable(value.real), jsonable(value.imag)]
    return value


def dumps(payload: Any) -> str:
    return json.dumps(jsonable(payload), indent=2, sort_keys=True, allow_nan=False)


def emit(payload: Any, stream: TextIO = None) -> None:
    stream = stream or sys.stdout
    stream.write(dumps(payload) + "\n")
    stream.flush()


def write_json(path: PathLike, payload: Any) -> Path:
    return atomic_write_text(path, dumps(payload) + "\n")


def alert_payload(alerts: Iterable[Any]) -> List[Dict[str, Any]]:
    """Alert dicts without their wall-clock timestamps"""
    out = []
    for alert in alerts:
        item = alert.to_dict()
        item.pop("timestamp", None)
        out.append(item)
    return out
