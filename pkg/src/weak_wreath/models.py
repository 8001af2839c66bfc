"""
Data models for weak-wreath.

This module contains the check and report objects returned by every
verifier, and the configuration sections of the application.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

from sympy import isprime

if TYPE_CHECKING:
    from weak_wreath.finvect import LinMap

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    """Convert report values to JSON-compatible data."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    if isinstance(value, list):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


@dataclass
class Failure:
    """
    A failed identity, with the first entry where its two sides differ.

    Attributes:
        check: Name of the identity
        witness: Domain basis multi-index of the first differing column
        row: Codomain basis multi-index of the first differing entry
        detail: Optional free text (used by non-matrix checks)
    """

    check: str
    witness: Tuple[int, ...] = ()
    row: Tuple[int, ...] = ()
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "check": self.check,
            "witness": list(self.witness),
            "row": list(self.row),
        }
        if self.detail:
            data["detail"] = self.detail
        return data

    def __str__(self) -> str:
        if self.detail:
            return f"{self.check}: {self.detail}"
        return f"{self.check}: differs on input {self.witness} at output {self.row}"


@dataclass
class CheckReport:
    """
    Outcome of a verifier: the identities checked and those that failed.

    An empty failure list means every check passed. Flags carry boolean
    diagnostics that are not pass/fail conditions (strictness, for
    example); values carry numbers such as ranks and dimensions.
    """

    subject: str
    checks: List[str] = field(default_factory=list)
    failures: List[Failure] = field(default_factory=list)
    flags: Dict[str, bool] = field(default_factory=dict)
    values: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, name: str, lhs: "LinMap", rhs: "LinMap") -> bool:
        """
        Compare the two sides of an identity and record the outcome.

        Returns:
            True if both sides are equal
        """
        self.checks.append(name)
        difference = lhs.first_difference(rhs)
        if difference is None:
            return True
        witness, row = difference
        self._fail(Failure(check=name, witness=witness, row=row))
        return False

    def record_result(self, name: str, ok: bool, detail: str = "") -> bool:
        """Record a check whose outcome was computed elsewhere."""
        self.checks.append(name)
        if not ok:
            self._fail(Failure(check=name, detail=detail or "failed"))
        return ok

    def _fail(self, failure: Failure) -> None:
        self.failures.append(failure)
        logger.warning(
            f"{self.subject}: {failure}",
            extra={
                "check": failure.check,
                "witness": list(failure.witness),
                "status": "fail",
            },
        )

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        """Merge another report, prefixing its check names."""
        tag = f"{prefix}." if prefix else ""
        self.checks.extend(f"{tag}{name}" for name in other.checks)
        for failure in other.failures:
            self.failures.append(
                Failure(
                    check=f"{tag}{failure.check}",
                    witness=failure.witness,
                    row=failure.row,
                    detail=failure.detail,
                )
            )
        self.flags.update({f"{tag}{k}": v for k, v in other.flags.items()})
        self.values.update({f"{tag}{k}": v for k, v in other.values.items()})

    def failed(self, name: str) -> bool:
        """True if the named check (or any check under name.) failed."""
        return any(
            f.check == name or f.check.startswith(f"{name}.") for f in self.failures
        )

    def failure(self, name: str) -> Optional[Failure]:
        for f in self.failures:
            if f.check == name:
                return f
        return None

    def to_dict(self) -> Dict[str, Any]:
        failed = {f.check for f in self.failures}
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": {
                name: ("fail" if name in failed else "pass") for name in self.checks
            },
            "failures": [f.to_dict() for f in self.failures],
            "flags": dict(self.flags),
            "values": _plain(self.values),
        }

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        total = len(set(self.checks))
        bad = len({f.check for f in self.failures})
        return f"{self.subject}: {status} ({total - bad}/{total} checks)"


@dataclass
class Report:
    """
    Result of one CLI command.

    Reports are deterministic: keys are emitted sorted and timing is only
    included when it was requested.
    """

    command: str
    sections: Dict[str, CheckReport] = field(default_factory=dict)
    values: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    timing: Optional[Dict[str, float]] = None

    @property
    def passed(self) -> bool:
        return all(section.passed for section in self.sections.values())

    def add(self, name: str, section: CheckReport) -> CheckReport:
        self.sections[name] = section
        return section

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "command": self.command,
            "passed": self.passed,
            "sections": {k: v.to_dict() for k, v in self.sections.items()},
            "values": _plain(self.values),
            "notes": list(self.notes),
        }
        if self.timing is not None:
            data["timing"] = dict(self.timing)
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        """Render the report as stable, human-readable text."""
        lines = [f"command: {self.command}"]
        lines.append(f"status: {'PASS' if self.passed else 'FAIL'}")
        for name in sorted(self.sections):
            section = self.sections[name]
            lines.append(f"[{name}] {section}")
            for failure in section.failures:
                lines.append(f"  - {failure}")
            for flag in sorted(section.flags):
                lines.append(f"  {flag}: {str(section.flags[flag]).lower()}")
            for key in sorted(section.values):
                lines.append(f"  {key}: {_plain(section.values[key])}")
        for key in sorted(self.values):
            value = _plain(self.values[key])
            if isinstance(value, bool):
                value = str(value).lower()
            lines.append(f"{key}: {value}")
        for note in self.notes:
            lines.append(f"note: {note}")
        if self.timing is not None:
            for key in sorted(self.timing):
                lines.append(f"timing.{key}: {self.timing[key]:.3f}s")
        return "\n".join(lines) + "\n"


@dataclass
class EngineConfig:
    """
    Computation settings.

    Attributes:
        field: Field descriptor, "rational" or "prime:p" (default: rational)
        workers: Threads used for independent composites (default: 1)
        max_full_enumeration: Largest n for which every C-composite is
            enumerated; larger objects are sampled (default: 4)
        sample_orders: Number of sampled composites beyond that (default: 24)
        sample_seed: Seed of the composite sampler (default: 0)
        site_convention: Spin-chain parity, H-even or dual-even
        max_cube_vertex_dim: Largest cube vertex given the full demimonad
            check; larger vertices are counted as skipped (default: 64)
        golden_file: Golden table path; None uses the packaged table
    """

    field: str = "rational"
    workers: int = 1
    max_full_enumeration: int = 4
    sample_orders: int = 24
    sample_seed: int = 0
    site_convention: str = "H-even"
    max_cube_vertex_dim: int = 64
    golden_file: Optional[str] = None

    def __post_init__(self) -> None:
        """Validate engine configuration."""
        value = self.field.strip()
        if value.lower() not in ("rational", "qq"):
            if not value.lower().startswith("prime:"):
                raise ValueError(
                    f"Invalid field '{self.field}'. Valid options: rational, prime:<p>"
                )
            try:
                p = int(value.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"Invalid field '{self.field}'. Expected prime:<p>")
            if not isprime(p):
                raise ValueError(f"Invalid field '{self.field}'. {p} is not prime")

        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.max_full_enumeration < 1:
            raise ValueError("max_full_enumeration must be at least 1")
        if self.sample_orders < 1:
            raise ValueError("sample_orders must be at least 1")
        if self.max_cube_vertex_dim < 1:
            raise ValueError("max_cube_vertex_dim must be at least 1")

        valid_conventions = ["H-even", "dual-even"]
        if self.site_convention not in valid_conventions:
            raise ValueError(
                f"Invalid site_convention '{self.site_convention}'. "
                f"Valid options: {', '.join(valid_conventions)}"
            )


@dataclass
class LoggingConfig:
    """
    Logging configuration.

    Attributes:
        level: Log level (DEBUG, INFO, WARNING, ERROR) (default: INFO)
        output: Output destination: console, file, both (default: console)
        file_path: Path to log file (default: logs/weak-wreath.log)
        max_file_size: Max log file size in bytes (default: 10MB)
        backup_count: Number of rotated logs to keep (default: 5)
        format: Log format: text or json (default: text)
    """

    level: str = "INFO"
    output: str = "console"
    file_path: str = "logs/weak-wreath.log"
    max_file_size: int = 10485760  # 10MB
    backup_count: int = 5
    format: str = "text"

    def __post_init__(self) -> None:
        """Validate logging configuration."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR"]
        if self.level.upper() not in valid_levels:
            raise ValueError(
                f"Invalid log level '{self.level}'. "
                f"Valid options: {', '.join(valid_levels)}"
            )
        self.level = self.level.upper()

        valid_outputs = ["console", "file", "both"]
        if self.output not in valid_outputs:
            raise ValueError(
                f"Invalid output '{self.output}'. "
                f"Valid options: {', '.join(valid_outputs)}"
            )

        valid_formats = ["text", "json"]
        if self.format not in valid_formats:
            raise ValueError(
                f"Invalid format '{self.format}'. "
                f"Valid options: {', '.join(valid_formats)}"
            )

        if self.max_file_size < 1024:  # Minimum 1KB
            raise ValueError("max_file_size must be at least 1024 bytes")

        if self.backup_count < 0:
            raise ValueError("backup_count must be non-negative")


@dataclass
class MetricsConfig:
    """
    Prometheus metrics configuration.

    Attributes:
        enabled: Whether metrics collection is enabled (default: False)
        textfile_path: File the registry is written to after a command
        histogram_buckets: Buckets of the command duration histogram, seconds
    """

    enabled: bool = False
    textfile_path: str = "metrics/weak-wreath.prom"
    histogram_buckets: Tuple[float, ...] = (
        0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 300.0
    )

    def __post_init__(self) -> None:
        """Validate metrics configuration."""
        if not self.textfile_path:
            raise ValueError("textfile_path cannot be empty")
        if not self.histogram_buckets:
            raise ValueError("histogram_buckets cannot be empty")
        if not all(b > 0 for b in self.histogram_buckets):
            raise ValueError("histogram_buckets values must be positive")


@dataclass
class Config:
    """
    Complete application configuration.

    This is the top-level configuration object that combines all
    configuration sections.
    """

    engine: EngineConfig = field(default_factory=EngineConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)
