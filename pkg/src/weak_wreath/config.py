"""
Configuration loading and management for weak-wreath.

This module handles loading configuration from multiple sources:
1. Environment variables (highest priority)
2. YAML configuration file
3. Default values (lowest priority)

Command-line flags are applied on top by the caller.
"""

import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from dotenv import load_dotenv

from weak_wreath.models import Config, EngineConfig, LoggingConfig, MetricsConfig


def load_config(config_file: Optional[str] = None) -> Config:
    """
    Load configuration from environment variables and optional config file.

    Priority order:
    1. Environment variables (highest)
    2. Config file
    3. Defaults (lowest)

    Args:
        config_file: Optional path to YAML config file

    Returns:
        Complete Config object

    Raises:
        FileNotFoundError: If the config file does not exist
        ValueError: If configuration is invalid
    """
    # Load .env file if it exists
    load_dotenv()

    file_config: Dict[str, Any] = {}
    if config_file:
        file_config = _load_yaml_config(config_file)

    engine_config = _load_engine_config(file_config.get("engine", {}))
    logging_config = _load_logging_config(file_config.get("logging", {}))
    metrics_config = _load_metrics_config(file_config.get("metrics", {}))

    return Config(
        engine=engine_config,
        logging=logging_config,
        metrics=metrics_config,
    )


def _load_yaml_config(config_file: str) -> Dict[str, Any]:
    """
    Load configuration from YAML file.

    Args:
        config_file: Path to YAML config file

    Returns:
        Configuration dictionary

    Raises:
        FileNotFoundError: If config file doesn't exist
        ValueError: If config file is invalid YAML or not a mapping
    """
    config_path = Path(config_file)

    if not config_path.exists():
        raise FileNotFoundError(
            f"Configuration file not found: {config_file}\n"
            f"Create a config file or use environment variables."
        )

    with open(config_path, "r", encoding="utf-8") as f:
        try:
            config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML in config file {config_file}: {e}")

    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ValueError(f"Config file {config_file} must contain a mapping")
    return config


def _load_engine_config(file_config: Dict[str, Any]) -> EngineConfig:
    """
    Load engine configuration with environment variable priority.

    Args:
        file_config: Engine section from config file

    Returns:
        EngineConfig object
    """
    field = os.getenv("WREATH_FIELD") or str(file_config.get("field", "rational"))
    workers = int(os.getenv("WREATH_WORKERS", file_config.get("workers", 1)))
    max_full_enumeration = int(
        os.getenv(
            "WREATH_MAX_FULL_ENUMERATION", file_config.get("max_full_enumeration", 4)
        )
    )
    sample_orders = int(
        os.getenv("WREATH_SAMPLE_ORDERS", file_config.get("sample_orders", 24))
    )
    sample_seed = int(
        os.getenv("WREATH_SAMPLE_SEED", file_config.get("sample_seed", 0))
    )
    site_convention = os.getenv("WREATH_SITE_CONVENTION") or file_config.get(
        "site_convention", "H-even"
    )
    max_cube_vertex_dim = int(
        os.getenv(
            "WREATH_MAX_CUBE_VERTEX_DIM", file_config.get("max_cube_vertex_dim", 64)
        )
    )
    golden_file = os.getenv("WREATH_GOLDEN_FILE") or file_config.get("golden_file")

    return EngineConfig(
        field=field,
        workers=workers,
        max_full_enumeration=max_full_enumeration,
        sample_orders=sample_orders,
        sample_seed=sample_seed,
        site_convention=site_convention,
        max_cube_vertex_dim=max_cube_vertex_dim,
        golden_file=golden_file,
    )


def _load_logging_config(file_config: Dict[str, Any]) -> LoggingConfig:
    """
    Load logging configuration with environment variable priority.

    Args:
        file_config: Logging section from config file

    Returns:
        LoggingConfig object
    """
    level = os.getenv("WREATH_LOG_LEVEL") or file_config.get("level", "INFO")
    output = os.getenv("WREATH_LOG_OUTPUT") or file_config.get("output", "console")
    file_path = os.getenv("WREATH_LOG_FILE") or file_config.get(
        "file_path", "logs/weak-wreath.log"
    )
    max_file_size = int(
        os.getenv("WREATH_LOG_MAX_SIZE", file_config.get("max_file_size", 10485760))
    )
    backup_count = int(
        os.getenv("WREATH_LOG_BACKUP_COUNT", file_config.get("backup_count", 5))
    )
    format_type = os.getenv("WREATH_LOG_FORMAT") or file_config.get("format", "text")

    return LoggingConfig(
        level=level,
        output=output,
        file_path=file_path,
        max_file_size=max_file_size,
        backup_count=backup_count,
        format=format_type,
    )


def _load_metrics_config(file_config: Dict[str, Any]) -> MetricsConfig:
    """
    Load metrics configuration with environment variable priority.

    Args:
        file_config: Metrics section from config file

    Returns:
        MetricsConfig object
    """
    enabled = _parse_bool(
        os.getenv("WREATH_METRICS_ENABLED"), file_config.get("enabled", False)
    )
    textfile_path = os.getenv("WREATH_METRICS_FILE") or file_config.get(
        "textfile_path", "metrics/weak-wreath.prom"
    )
    histogram_buckets = _parse_histogram_buckets(file_config.get("histogram_buckets"))

    return MetricsConfig(
        enabled=enabled,
        textfile_path=textfile_path,
        histogram_buckets=histogram_buckets,
    )


def _parse_histogram_buckets(
    value: Optional[List[float]],
) -> Tuple[float, ...]:
    """
    Parse histogram buckets from config.

    Args:
        value: List of bucket values from config file, or None

    Returns:
        Tuple of bucket values, or default buckets if None
    """
    # Commands range from milliseconds (small checks) to minutes (n = 3 chains)
    default_buckets = (0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 300.0)
    if value is None:
        return default_buckets
    return tuple(float(v) for v in value)


def _parse_bool(env_value: Optional[str], default: bool) -> bool:
    """
    Parse boolean value from environment variable or use default.

    Args:
        env_value: Environment variable value (string or None)
        default: Default value if env_value is None

    Returns:
        Boolean value
    """
    if env_value is None:
        return default

    return env_value.lower() in ("true", "1", "yes", "on")
