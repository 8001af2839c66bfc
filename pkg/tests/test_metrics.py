"""Tests for Prometheus metrics collection."""

from pathlib import Path
from typing import Iterator
from unittest.mock import patch

import pytest

from weak_wreath.metrics import MetricsCollector, check_label
from weak_wreath.models import CheckReport, MetricsConfig, Report


@pytest.fixture
def report() -> Report:
    section = CheckReport("law")
    section.record_result("mult_t", True)
    section.record_result("yang_baxter[0,1,2]", True)
    section.record_result("yang_baxter[1,2,3]", False, "faces differ")
    section.record_result("b[[0],[1]].section", True)
    result = Report("spinchain", values={"dimension": 16})
    result.add("law", section)
    return result


class TestCheckLabel:
    """Tests for check_label function."""

    @pytest.mark.parametrize(
        "name, label",
        [
            ("mult_t", "mult_t"),
            ("yang_baxter[0,1,2]", "yang_baxter"),
            ("b[[0],[1]].section", "b.section"),
            ("vertex[0, 1, 2].associativity", "vertex.associativity"),
            ("edge[0]+1.unit", "edge.unit"),
            ("face[]+0+1", "face"),
        ],
    )
    def test_indices_removed(self, name: str, label: str) -> None:
        """Test that labels keep the identity name and drop the indices."""
        assert check_label(name) == label


class TestMetricsConfig:
    """Tests for MetricsConfig validation."""

    def test_default_values(self) -> None:
        """Test default configuration values."""
        config = MetricsConfig()

        assert config.enabled is False
        assert config.textfile_path == "metrics/weak-wreath.prom"
        assert config.histogram_buckets[0] == 0.01

    def test_invalid_empty_path(self) -> None:
        """Test that the textfile path is required."""
        with pytest.raises(ValueError) as exc:
            MetricsConfig(textfile_path="")
        assert "textfile_path cannot be empty" in str(exc.value)

    def test_invalid_histogram_buckets(self) -> None:
        """Test that buckets must be non-empty and positive."""
        with pytest.raises(ValueError):
            MetricsConfig(histogram_buckets=())
        with pytest.raises(ValueError) as exc:
            MetricsConfig(histogram_buckets=(1.0, -1.0))
        assert "must be positive" in str(exc.value)


class TestMetricsCollectorWithPrometheus:
    """Tests for MetricsCollector with a real registry."""

    @pytest.fixture(autouse=True)
    def _require_prometheus(self) -> None:
        pytest.importorskip("prometheus_client")

    def test_record_report_and_write(self, tmp_path: Path, report: Report) -> None:
        """Test that checks, durations and dimensions reach the textfile."""
        path = tmp_path / "out" / "wreath.prom"
        collector = MetricsCollector(str(path))
        collector.record_report("spinchain", report, 0.25)

        assert collector.available
        assert collector.write() == path
        text = path.read_text()
        assert 'weak_wreath_checks_total{check="mult_t",status="pass"} 1.0' in text
        assert (
            'weak_wreath_checks_total{check="yang_baxter",status="pass"} 1.0' in text
        )
        assert (
            'weak_wreath_checks_total{check="yang_baxter",status="fail"} 1.0' in text
        )
        assert 'weak_wreath_checks_total{check="b.section",status="pass"} 1.0' in text
        assert 'weak_wreath_last_dimension{command="spinchain"} 16.0' in text
        assert "weak_wreath_command_duration_seconds_count" in text

    def test_collectors_are_independent(self, tmp_path: Path) -> None:
        """Test that each collector owns its registry."""
        first = MetricsCollector(str(tmp_path / "a.prom"))
        second = MetricsCollector(str(tmp_path / "b.prom"))
        first.record_check("mult_t", True)
        first.write()
        second.write()

        assert "mult_t" in (tmp_path / "a.prom").read_text()
        assert "mult_t" not in (tmp_path / "b.prom").read_text()

    def test_custom_buckets(self, tmp_path: Path, report: Report) -> None:
        """Test that configured buckets are used by the histogram."""
        path = tmp_path / "wreath.prom"
        collector = MetricsCollector(str(path), histogram_buckets=(1.0, 2.0))
        collector.record_report("check", report, 1.5)
        collector.write()

        assert 'le="2.0"' in path.read_text()
        assert 'le="300.0"' not in path.read_text()


class TestMetricsCollectorWithoutPrometheus:
    """Tests for MetricsCollector when prometheus-client is not available."""

    @pytest.fixture
    def no_prometheus(self) -> Iterator[None]:
        """Make the prometheus_client import fail."""
        with patch.dict("sys.modules", {"prometheus_client": None}):
            yield

    def test_initialization_without_prometheus(
        self, no_prometheus: None, tmp_path: Path
    ) -> None:
        """Test that the collector degrades to a no-op."""
        collector = MetricsCollector(str(tmp_path / "wreath.prom"))

        assert collector.available is False

    def test_record_and_write_are_no_ops(
        self, no_prometheus: None, tmp_path: Path, report: Report
    ) -> None:
        """Test that recording and writing do nothing."""
        path = tmp_path / "wreath.prom"
        collector = MetricsCollector(str(path))
        collector.record_report("spinchain", report, 0.1)
        collector.record_check("mult_t", False)

        assert collector.write() is None
        assert not path.exists()
