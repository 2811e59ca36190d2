"""
Tests for structured logging, the run context and metrics.
"""

import json
import logging

import pytest

from lkgeom.utils.logger import (
    HumanReadableFormatter,
    PerformanceTracker,
    StructuredFormatter,
    clear_run_context,
    get_logger,
    set_run_context,
)
from lkgeom.utils.metrics import metrics, track_time


def _record(msg="hello", **data):
    record = logging.LogRecord("lkgeom.test", logging.INFO, __file__, 1, msg, (), None)
    if data:
        record.extra_data = data
    return record


@pytest.mark.unit
class TestFormatters:
    def test_json_lines_carry_context(self):
        set_run_context(command="tube", seed=7)
        try:
            line = json.loads(StructuredFormatter().format(_record(estimate=1.5)))
        finally:
            clear_run_context()
        assert line["command"] == "tube"
        assert line["seed"] == 7
        assert line["estimate"] == 1.5
        assert line["level"] == "INFO"

    def test_context_cleared(self):
        set_run_context(command="lk", seed=0)
        clear_run_context()
        line = json.loads(StructuredFormatter().format(_record()))
        assert "command" not in line and "seed" not in line

    def test_human_format(self):
        text = HumanReadableFormatter().format(_record("tube done", samples=10))
        assert "tube done" in text
        assert "samples=10" in text


@pytest.mark.unit
class TestLoggerHelpers:
    def test_data_helpers(self, caplog):
        logger = get_logger("lkgeom.test.helpers")
        with caplog.at_level(logging.INFO, logger="lkgeom.test.helpers"):
            logger.info_data("estimate ready", estimate=2.0)
        assert caplog.records[-1].extra_data == {"estimate": 2.0}

    def test_same_logger_returned(self):
        assert get_logger("lkgeom.same") is get_logger("lkgeom.same")

    def test_performance_tracker(self, caplog):
        logger = get_logger("lkgeom.test.perf")
        with caplog.at_level(logging.INFO, logger="lkgeom.test.perf"):
            with PerformanceTracker(logger, "kernel") as perf:
                perf.add_metric("samples", 100)
        record = caplog.records[-1]
        assert "kernel" in record.getMessage()
        assert record.extra_data["samples"] == 100
        assert "elapsed_ms" in record.extra_data


@pytest.mark.unit
class TestMetrics:
    def test_counters_and_timers(self):
        metrics.increment("samples_drawn", 10)
        metrics.increment("samples_drawn", 5)

        @track_time("unit_kernel")
        def kernel():
            return 3

        assert kernel() == 3
        summary = metrics.get_summary()
        assert summary["counters"]["samples_drawn"] == 15
        assert summary["timers"]["unit_kernel"]["count"] == 1

    def test_reset(self):
        metrics.increment("planes_rejected")
        metrics.reset()
        assert metrics.get_counter("planes_rejected") == 0

    def test_kernels_count_samples(self, unit_square):
        from lkgeom.service.tube_steiner import tube_volume_mc

        tube_volume_mc(unit_square, 0.1, samples=1_000, seed=0)
        assert metrics.get_counter("samples_drawn") == 1_000
        assert metrics.get_timer_stats("tube_volume_mc")["count"] == 1

    def test_rejection_rate(self):
        assert metrics.rejection_rate() == 0.0
        metrics.increment("samples_drawn", 200)
        metrics.increment("samples_resampled", 5)
        assert metrics.rejection_rate() == pytest.approx(0.025)
        assert metrics.get_timer_stats("never_ran") == {"count": 0, "avg": 0, "min": 0, "max": 0}
