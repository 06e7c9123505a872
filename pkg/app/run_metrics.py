"""Internal metrics tracking for gs-forge runs.

Thread-safe counters for checks and computed degrees, shared by the worker threads
that fan out per-degree computations.
"""

import threading
import time
from dataclasses import dataclass, field


@dataclass
class RunMetrics:
    """Thread-safe metrics for one process.

    Tracks checks run and failed, degrees computed, compute time and uptime.
    All operations are thread-safe using a lock.
    """

    checks_run: int = 0
    checks_failed: int = 0
    degrees_computed: int = 0
    total_compute_time_ms: float = 0.0
    start_time: float = field(default_factory=time.monotonic)
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False)

    def record_check(self, holds: bool) -> None:
        """Record the outcome of one check.

        Args:
            holds: Whether the check passed.
        """
        with self._lock:
            self.checks_run += 1
            if not holds:
                self.checks_failed += 1

    def record_degree(self, duration_ms: float) -> None:
        """Record one computed degree (or index) and the time it took.

        Args:
            duration_ms: Wall time of the computation in milliseconds.
        """
        with self._lock:
            self.degrees_computed += 1
            self.total_compute_time_ms += duration_ms

    def get_failure_rate_percent(self) -> float:
        """Percentage of failed checks, 0 if nothing was checked."""
        with self._lock:
            if self.checks_run == 0:
                return 0.0
            return (self.checks_failed / self.checks_run) * 100

    def get_avg_degree_time_seconds(self) -> float:
        """Average compute time per degree in seconds, 0 if nothing was computed."""
        with self._lock:
            if self.degrees_computed == 0:
                return 0.0
            return (self.total_compute_time_ms / self.degrees_computed) / 1000.0

    def get_uptime_seconds(self) -> float:
        return time.monotonic() - self.start_time

    def get_snapshot(self) -> dict[str, float | int]:
        """Get a snapshot of current metrics.

        Returns:
            Dictionary containing all current metric values.
        """
        with self._lock:
            return {
                "checks_run": self.checks_run,
                "checks_failed": self.checks_failed,
                "degrees_computed": self.degrees_computed,
                "total_compute_time_ms": self.total_compute_time_ms,
                "failure_rate_percent": self.get_failure_rate_percent(),
                "avg_degree_time_seconds": self.get_avg_degree_time_seconds(),
                "uptime_seconds": self.get_uptime_seconds(),
            }


# Singleton instance
_run_metrics: RunMetrics | None = None
_metrics_lock = threading.Lock()


def get_run_metrics() -> RunMetrics:
    """Get the singleton RunMetrics instance."""
    global _run_metrics
    with _metrics_lock:
        if _run_metrics is None:
            _run_metrics = RunMetrics()
        return _run_metrics


def reset_run_metrics() -> None:
    """Reset the singleton metrics instance.

    Useful for testing to ensure a clean state.
    """
    global _run_metrics
    with _metrics_lock:
        _run_metrics = None
