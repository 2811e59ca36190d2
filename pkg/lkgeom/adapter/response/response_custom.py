# lkgeom/adapter/response/response_custom.py

import io
import json
import os
import sys
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from lkgeom.adapter.error.error import InputOutputError, LKGeomError, ValidationError
from lkgeom.conf import OUTPUT_DIR
from lkgeom.model.grothendieck import GrothendieckClass

SIGNIFICANT = 12


def _round(x: float) -> float:
    return float(f"{x:.{SIGNIFICANT}g}")


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; floats rounded to 12 significant digits, fractions kept exact as strings."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else str(value)
    if isinstance(value, GrothendieckClass):
        return value.to_triples()
    if isinstance(value, (float, np.floating)):
        return _round(float(value))
    return value


def _resolve(out: Optional[str]) -> Optional[str]:
    if out is None or os.path.isabs(out) or OUTPUT_DIR is None:
        return out
    return os.path.join(OUTPUT_DIR, out)


def _write(text: str, out: Optional[str]) -> None:
    path = _resolve(out)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise InputOutputError(f"Cannot write {path}: {e}", error_code="WRITE_FAILED") from e


def render_csv(rows: Iterable[Sequence], columns: Sequence[str]) -> str:
    frame = pd.DataFrame(list(rows), columns=list(columns))
    buf = io.StringIO()
    frame.to_csv(buf, index=False, float_format=f"%.{SIGNIFICANT}g", lineterminator="\n")
    return buf.getvalue()


def render_json(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n"


def emit_csv(rows: Iterable[Sequence], columns: Sequence[str], out: Optional[str] = None) -> None:
    _write(render_csv(rows, columns), out)


def emit_json(payload: Any, out: Optional[str] = None) -> None:
    _write(render_json(payload), out)


def emit_plotdata(series: Sequence[Tuple[float, float]], out: Optional[str] = None) -> None:
    """Two-column (epsilon, value) CSV for plotting a tube sweep."""
    series = list(series)
    if not series:
        raise ValidationError("Plot series is empty", error_code="EMPTY_SERIES")
    emit_csv(series, ("epsilon", "value"), out)


def HandleSuccess(payload: Any, fmt: str, out: Optional[str] = None, columns: Sequence[str] = ()) -> int:
    if fmt == "csv":
        emit_csv(payload, columns, out)
    else:
        emit_json(payload, out)
    return 0


def HandleError(err: LKGeomError) -> int:
    """One JSON line on stderr; the exit status comes from the error class."""
    sys.stderr.write(json.dumps(err.to_body(), sort_keys=True) + "\n")
    sys.stderr.flush()
    return err.exit_code
