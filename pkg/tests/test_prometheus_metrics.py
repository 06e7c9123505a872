"""Tests for Prometheus metrics collectors."""

from pathlib import Path

from app.prometheus_metrics import (
    avg_gs_forge_degree_time_seconds,
    gs_forge_check_failure_rate_percent,
    gs_forge_check_failures_total,
    gs_forge_checks_total,
    gs_forge_degrees_computed,
    gs_forge_run_duration_seconds,
    gs_forge_runs_total,
    increment_checks,
    increment_run,
    observe_run_duration,
    update_gauges_from_run_metrics,
    write_metrics_file,
)
from app.run_metrics import get_run_metrics


def get_counter_value(counter, labels: dict[str, str]) -> float:
    """Get counter value using public prometheus_client API.

    Args:
        counter: Prometheus Counter metric.
        labels: Dict of label name to label value.

    Returns:
        Current counter value, or 0.0 if not found.
    """
    for metric in counter.collect():
        for sample in metric.samples:
            if sample.name.endswith("_total") and sample.labels == labels:
                return sample.value
    return 0.0


def get_gauge_value(gauge) -> float:
    """Get gauge value using public prometheus_client API."""
    for metric in gauge.collect():
        for sample in metric.samples:
            return sample.value
    return 0.0


def get_histogram_count(histogram, labels: dict[str, str]) -> float:
    for metric in histogram.collect():
        for sample in metric.samples:
            if sample.name.endswith("_count") and sample.labels == labels:
                return sample.value
    return 0.0


class TestCounters:
    """Tests for Prometheus counters."""

    def test_increment_run(self):
        """Test that runs are counted per command and exit code."""
        initial_ok = get_counter_value(gs_forge_runs_total, {"command": "dims", "exit_code": "0"})
        initial_failed = get_counter_value(gs_forge_runs_total, {"command": "dims", "exit_code": "1"})

        increment_run("dims", 0)

        assert get_counter_value(gs_forge_runs_total, {"command": "dims", "exit_code": "0"}) == initial_ok + 1
        assert get_counter_value(gs_forge_runs_total, {"command": "dims", "exit_code": "1"}) == initial_failed

    def test_increment_checks(self):
        """Test that evaluated and failed checks are counted separately."""
        initial_total = get_counter_value(gs_forge_checks_total, {"command": "koszul"})
        initial_failures = get_counter_value(gs_forge_check_failures_total, {"command": "koszul"})

        increment_checks("koszul", 9, 2)

        assert get_counter_value(gs_forge_checks_total, {"command": "koszul"}) == initial_total + 9
        assert get_counter_value(gs_forge_check_failures_total, {"command": "koszul"}) == initial_failures + 2

    def test_invalid_command_sanitized_to_unknown(self):
        """Test that invalid commands are sanitized to 'unknown' to prevent label cardinality explosion."""
        initial_unknown = get_counter_value(gs_forge_checks_total, {"command": "unknown"})

        increment_checks("malicious_command_12345", 1, 0)

        assert get_counter_value(gs_forge_checks_total, {"command": "unknown"}) == initial_unknown + 1


class TestHistograms:
    """Tests for Prometheus histograms."""

    def test_observe_run_duration(self):
        """Test observing run durations per command."""
        initial = get_histogram_count(gs_forge_run_duration_seconds, {"command": "golod"})

        observe_run_duration("golod", 0.2)
        observe_run_duration("golod", 3.0)

        assert get_histogram_count(gs_forge_run_duration_seconds, {"command": "golod"}) == initial + 2


class TestGauges:
    """Tests for Prometheus gauges."""

    def test_update_gauges_from_run_metrics(self):
        """Test updating gauges from internal metrics."""
        metrics = get_run_metrics()
        metrics.record_check(holds=True)
        metrics.record_check(holds=False)
        metrics.record_degree(1000.0)
        metrics.record_degree(3000.0)

        update_gauges_from_run_metrics()

        assert get_gauge_value(gs_forge_check_failure_rate_percent) == 50.0
        assert get_gauge_value(avg_gs_forge_degree_time_seconds) == 2.0
        assert get_gauge_value(gs_forge_degrees_computed) == 2

    def test_gauges_without_activity(self):
        """Test that an idle process reports zeros."""
        update_gauges_from_run_metrics()

        assert get_gauge_value(gs_forge_check_failure_rate_percent) == 0.0
        assert get_gauge_value(avg_gs_forge_degree_time_seconds) == 0.0


class TestMetricsFile:
    """Tests for the text exposition file."""

    def test_write_metrics_file(self, tmp_path: Path):
        """Test that every collector lands in the file."""
        increment_run("serre", 0)
        target = tmp_path / "gs_forge.prom"

        write_metrics_file(str(target))

        content = target.read_text()
        assert "gs_forge_runs_total" in content
        assert "gs_forge_degrees_computed" in content
        assert 'gs_forge_info{' in content
