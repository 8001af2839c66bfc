"""
Prometheus metrics for weak-wreath commands.

Each command is a batch job, so the registry is written to a textfile
(for node_exporter's textfile collector) once the command finishes
instead of being served over HTTP.

    Example:
        collector = MetricsCollector("metrics/weak-wreath.prom")
        collector.record_report("spinchain", report, duration_seconds)
        collector.write()

The collector owns a private CollectorRegistry, so several collectors can
coexist in one process (tests create one per case).
"""

import logging
import re
from pathlib import Path
from typing import Any, Optional, Tuple

from weak_wreath.models import Report

logger = logging.getLogger(__name__)

_INNER_INDEX = re.compile(r"\[[^\[\]]*\]")
_ADDED_INDEX = re.compile(r"\+\d+")


def check_label(name: str) -> str:
    """
    Metric label of a check name with its indices removed.

    "b[[0],[1]].section" becomes "b.section" and "edge[0]+1.unit" becomes
    "edge.unit".
    """
    while True:
        stripped = _INNER_INDEX.sub("", name)
        if stripped == name:
            break
        name = stripped
    return _ADDED_INDEX.sub("", name)


class MetricsCollector:
    """
    Collects Prometheus metrics for check outcomes and command runs.

    Metrics exposed:
    - weak_wreath_checks_total: Counter of checked identities by check and status
    - weak_wreath_command_duration_seconds: Histogram of command durations
    - weak_wreath_last_dimension: Gauge of the last reported dimension per command
    """

    DEFAULT_BUCKETS: Tuple[float, ...] = (
        0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 300.0
    )

    def __init__(
        self,
        textfile_path: str,
        histogram_buckets: Tuple[float, ...] = DEFAULT_BUCKETS,
    ) -> None:
        """
        Initialize the metrics collector.

        Args:
            textfile_path: File the registry is written to
            histogram_buckets: Buckets of the duration histogram, seconds
        """
        self.textfile_path = textfile_path
        self.histogram_buckets = histogram_buckets
        self._registry: Optional[Any] = None

        try:
            from prometheus_client import (
                CollectorRegistry,
                Counter,
                Gauge,
                Histogram,
                write_to_textfile,
            )

            self._write_to_textfile = write_to_textfile
            self._prometheus_available = True
            self._registry = CollectorRegistry()

            self._checks_total = Counter(
                "weak_wreath_checks_total",
                "Total number of checked identities",
                ["check", "status"],
                registry=self._registry,
            )

            self._command_duration = Histogram(
                "weak_wreath_command_duration_seconds",
                "Duration of commands in seconds",
                ["command"],
                buckets=histogram_buckets,
                registry=self._registry,
            )

            self._last_dimension = Gauge(
                "weak_wreath_last_dimension",
                "Last dimension reported by a command",
                ["command"],
                registry=self._registry,
            )

        except ImportError:
            self._prometheus_available = False
            logger.warning(
                "prometheus-client not installed. Metrics collection disabled. "
                "Install with: pip install prometheus-client"
            )

    @property
    def available(self) -> bool:
        return self._prometheus_available

    def record_check(self, check: str, passed: bool) -> None:
        if not self._prometheus_available:
            return
        status = "pass" if passed else "fail"
        self._checks_total.labels(check=check, status=status).inc()

    def record_report(
        self, command: str, report: Report, duration_seconds: float
    ) -> None:
        """
        Record every check of a report, its duration and its dimension.

        The dimension is the report value named "dimension", when present.

        Args:
            command: Subcommand name
            report: The finished report
            duration_seconds: Wall-clock duration of the command
        """
        if not self._prometheus_available:
            return

        for section in report.sections.values():
            failed = {f.check for f in section.failures}
            for name in section.checks:
                self.record_check(check_label(name), name not in failed)

        self._command_duration.labels(command=command).observe(duration_seconds)

        dimension = report.values.get("dimension")
        if isinstance(dimension, int):
            self._last_dimension.labels(command=command).set(dimension)

    def write(self) -> Optional[Path]:
        """
        Write the registry to the textfile.

        Returns:
            The written path, or None if prometheus-client is missing
        """
        if not self._prometheus_available:
            return None
        path = Path(self.textfile_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self._write_to_textfile(str(path), self._registry)
        logger.debug(f"Metrics written to {path}")
        return path
