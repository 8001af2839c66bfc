"""Tests for logging module."""

import json
import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Iterator

import pytest

from weak_wreath.logger import (
    LOGGER_NAME,
    ColoredFormatter,
    JSONFormatter,
    get_logger,
    setup_logging,
)
from weak_wreath.models import CheckReport, LoggingConfig


@pytest.fixture(autouse=True)
def reset_package_logger() -> Iterator[None]:
    yield
    logger = logging.getLogger(LOGGER_NAME)
    for handler in logger.handlers:
        handler.close()
    logger.handlers.clear()


def make_record(msg: str, level: int = logging.INFO) -> logging.LogRecord:
    return logging.LogRecord(
        name="weak_wreath.wdl",
        level=level,
        pathname="",
        lineno=0,
        msg=msg,
        args=(),
        exc_info=None,
    )


class TestJSONFormatter:
    """Tests for JSONFormatter."""

    def test_format_basic_record(self) -> None:
        """Test formatting basic log record as JSON."""
        data = json.loads(JSONFormatter().format(make_record("test message")))

        assert data["level"] == "INFO"
        assert data["message"] == "test message"
        assert data["application"] == "weak-wreath"
        assert data["logger"] == "weak_wreath.wdl"
        assert "timestamp" in data

    def test_format_with_extra_fields(self) -> None:
        """Test that check failures keep their name and witness."""
        record = make_record("mult_t failed")
        record.check = "mult_t"
        record.witness = [0, 1]
        record.status = "fail"
        record.unrelated = "dropped"

        data = json.loads(JSONFormatter().format(record))

        assert data["check"] == "mult_t"
        assert data["witness"] == [0, 1]
        assert data["status"] == "fail"
        assert "unrelated" not in data

    def test_format_with_exception(self) -> None:
        """Test formatting record with exception info."""
        try:
            raise ValueError("test error")
        except ValueError:
            exc_info = sys.exc_info()

        record = make_record("error occurred", logging.ERROR)
        record.exc_info = exc_info
        data = json.loads(JSONFormatter().format(record))

        assert "ValueError" in data["exception"]


class TestColoredFormatter:
    """Tests for ColoredFormatter."""

    def test_format_adds_colors(self) -> None:
        """Test that formatter adds color codes."""
        formatter = ColoredFormatter("%(levelname)s: %(message)s")
        result = formatter.format(make_record("test message"))

        assert "\033[" in result
        assert "test message" in result

    def test_format_preserves_levelname(self) -> None:
        """Test that original levelname is restored for other handlers."""
        record = make_record("test")
        ColoredFormatter("%(levelname)s").format(record)

        assert record.levelname == "INFO"


class TestSetupLogging:
    """Tests for setup_logging function."""

    def test_setup_console_logging_uses_stderr(self) -> None:
        """Test that console logging never writes to stdout."""
        logger = setup_logging(LoggingConfig(level="INFO", output="console"))

        assert logger.name == LOGGER_NAME
        assert logger.level == logging.INFO
        assert len(logger.handlers) == 1
        handler = logger.handlers[0]
        assert isinstance(handler, logging.StreamHandler)
        assert handler.stream is sys.stderr

    def test_setup_file_logging(self, tmp_path: Path) -> None:
        """Test setting up rotating file logging."""
        log_file = tmp_path / "logs" / "wreath.log"
        config = LoggingConfig(
            level="DEBUG",
            output="file",
            file_path=str(log_file),
            max_file_size=2048,
            backup_count=3,
        )

        logger = setup_logging(config)

        assert log_file.parent.exists()
        handler = logger.handlers[0]
        assert isinstance(handler, logging.handlers.RotatingFileHandler)
        assert handler.maxBytes == 2048
        assert handler.backupCount == 3

    def test_setup_both_outputs(self, tmp_path: Path) -> None:
        """Test setting up both console and file logging."""
        config = LoggingConfig(
            output="both", file_path=str(tmp_path / "wreath.log"), format="json"
        )

        logger = setup_logging(config)

        assert len(logger.handlers) == 2
        assert all(isinstance(h.formatter, JSONFormatter) for h in logger.handlers)

    def test_setup_clears_existing_handlers(self) -> None:
        """Test that calling setup twice does not duplicate handlers."""
        config = LoggingConfig(level="INFO", output="console")
        setup_logging(config)

        assert len(setup_logging(config).handlers) == 1

    def test_log_level_filtering(self, tmp_path: Path) -> None:
        """Test that records below the level are dropped."""
        log_file = tmp_path / "wreath.log"
        logger = setup_logging(
            LoggingConfig(level="WARNING", output="file", file_path=str(log_file))
        )

        logger.info("info message")
        logger.warning("warning message")

        content = log_file.read_text()
        assert "info message" not in content
        assert "warning message" in content
        assert "\033[" not in content

    def test_get_logger_returns_package_logger(self) -> None:
        """Test that get_logger returns the configured logger."""
        setup_logging(LoggingConfig())

        assert get_logger() is get_logger()
        assert get_logger().name == "weak_wreath"


class TestIntegration:
    """Integration tests for logging."""

    def test_check_failure_logged_as_json(self, tmp_path: Path) -> None:
        """Test that a failed identity reaches the log with its witness."""
        log_file = tmp_path / "wreath.log"
        setup_logging(
            LoggingConfig(output="file", file_path=str(log_file), format="json")
        )

        report = CheckReport("law")
        report.record_result("yang_baxter", False, "faces differ")

        data = json.loads(log_file.read_text().strip().splitlines()[-1])
        assert data["level"] == "WARNING"
        assert data["check"] == "yang_baxter"
        assert data["status"] == "fail"
        assert data["logger"] == "weak_wreath.models"
