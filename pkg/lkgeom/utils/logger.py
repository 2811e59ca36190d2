"""
Logging for lkgeom.

Records go to stderr, either as JSON lines or as coloured text, so stdout stays
free for CSV and JSON artifacts. Every record carries the run context (command
and seed) and any ``extra_data`` passed through the ``*_data`` helpers.
"""

import json
import logging
import sys
import time
import traceback
from contextvars import ContextVar
from datetime import datetime, timezone
from typing import Any, Dict, Optional

_run_context: ContextVar[Dict[str, Any]] = ContextVar("run_context", default={})


def set_run_context(command: Optional[str] = None, seed: Optional[int] = None):
    ctx = dict(_run_context.get())
    if command:
        ctx["command"] = command
    if seed is not None:
        ctx["seed"] = seed
    _run_context.set(ctx)


def clear_run_context():
    _run_context.set({})


def _extras(record: logging.LogRecord) -> Dict[str, Any]:
    data = getattr(record, "extra_data", None)
    return data if isinstance(data, dict) else {}


class StructuredFormatter(logging.Formatter):
    """One JSON object per record."""

    def format(self, record: logging.LogRecord) -> str:
        out = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "location": f"{record.module}.{record.funcName}:{record.lineno}",
        }
        out.update(_run_context.get())
        if record.exc_info:
            etype, evalue, _ = record.exc_info
            out["exception"] = {
                "type": etype.__name__,
                "message": str(evalue),
                "traceback": traceback.format_exception(*record.exc_info),
            }
        out.update(_extras(record))
        return json.dumps(out, ensure_ascii=False, default=str)


class HumanReadableFormatter(logging.Formatter):
    LEVEL_COLOURS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
    }
    RESET = "\033[0m"

    def format(self, record: logging.LogRecord) -> str:
        colour = self.LEVEL_COLOURS.get(record.levelname, self.RESET)
        head = f"{colour}{datetime.now():%H:%M:%S} {record.levelname:<8}{self.RESET} {record.name}: {record.getMessage()}"
        ctx = _run_context.get()
        if ctx:
            head += " [" + " ".join(f"{k}={v}" for k, v in ctx.items()) + "]"
        shown = {k: v for k, v in _extras(record).items() if v not in (None, "", [])}
        if shown:
            head += "\n    " + "  ".join(f"{k}={v!r}" for k, v in shown.items())
        if record.exc_info:
            head += "\n" + "".join(traceback.format_exception(*record.exc_info))
        return head


def setup_logging(level: str = "WARNING", log_format: str = "human", log_file: Optional[str] = None):
    root = logging.getLogger()
    root.handlers.clear()
    root.setLevel(getattr(logging, level.upper()))
    formatter = StructuredFormatter() if log_format == "json" else HumanReadableFormatter()
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    for h in handlers:
        h.setFormatter(formatter)
        root.addHandler(h)


def get_logger(name: str) -> logging.Logger:
    """
    Logger with ``debug_data`` / ``info_data`` / ``warning_data`` / ``error_data``.

        logger.info_data("tube estimate", estimate=1.4, stderr=0.002)
    """
    logger = logging.getLogger(name)
    if hasattr(logger, "info_data"):
        return logger

    def emit(level: int, message: str, data: Dict[str, Any]):
        if not logger.isEnabledFor(level):
            return
        logger.log(level, message, extra={"extra_data": data} if data else None, stacklevel=3)

    logger.debug_data = lambda msg, **data: emit(logging.DEBUG, msg, data)
    logger.info_data = lambda msg, **data: emit(logging.INFO, msg, data)
    logger.warning_data = lambda msg, **data: emit(logging.WARNING, msg, data)
    logger.error_data = lambda msg, **data: emit(logging.ERROR, msg, data)
    return logger


class PerformanceTracker:
    """Elapsed time plus kernel-specific figures for one estimator call, logged on exit."""

    def __init__(self, logger: logging.Logger, operation: str):
        self.logger = logger
        self.operation = operation
        self.figures: Dict[str, Any] = {}
        self._start = 0.0

    def __enter__(self):
        self._start = time.perf_counter()
        self.logger.debug(f"start {self.operation}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        elapsed_ms = round((time.perf_counter() - self._start) * 1000, 2)
        if exc_type is None:
            self.logger.info_data(f"✓ {self.operation} completed", elapsed_ms=elapsed_ms, **self.figures)
        else:
            self.logger.warning_data(f"✗ {self.operation} failed", elapsed_ms=elapsed_ms, error=str(exc_val), **self.figures)

    def add_metric(self, key: str, value: Any):
        self.figures[key] = value
