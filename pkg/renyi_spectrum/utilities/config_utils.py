"""This module reads YAML run configuration into the package config objects"""
import dataclasses
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import yaml

from renyi_spectrum.errors import ConfigurationError, RenyiSpectrumError
from renyi_spectrum.special import DEFAULT_KERNEL_CONFIG, KernelConfig

logger = logging.getLogger(__name__)

# OracleConfig fields that make sense in a file; N, q and the target come from flags
ORACLE_FILE_KEYS = ("max_iterations", "step_tolerance")
SECTIONS = ("kernel", "oracle")


def _check_keys(section: str, values: Dict[str, Any], allowed: Tuple[str, ...]):
    unknown = sorted(set(values) - set(allowed))
    if unknown:
        raise ConfigurationError(
            f"unknown keys in the '{section}' section",
            {"section": section, "unknown": unknown, "allowed": list(allowed)},
        )


def read_config_file(path: Optional[str]) -> Dict[str, Dict[str, Any]]:
    """
    This method loads and validates the raw sections of a YAML config file.

    Args:
        path (Optional[str]): File to read; None yields empty sections

    Returns:
        Dict[str, Dict[str, Any]]: The `kernel` and `oracle` sections
    """
    if path is None:
        return {section: {} for section in SECTIONS}
    try:
        payload = yaml.safe_load(Path(path).read_text()) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigurationError(
            "the configuration file could not be read", {"path": str(path), "reason": str(exc)}
        ) from exc
    if not isinstance(payload, dict):
        raise ConfigurationError("the configuration must be a mapping", {"path": str(path)})
    _check_keys("<root>", payload, SECTIONS)
    sections = {}
    for section in SECTIONS:
        values = payload.get(section) or {}
        if not isinstance(values, dict):
            raise ConfigurationError(
                f"the '{section}' section must be a mapping", {"path": str(path)}
            )
        sections[section] = values
    kernel_keys = tuple(f.name for f in dataclasses.fields(KernelConfig))
    _check_keys("kernel", sections["kernel"], kernel_keys)
    _check_keys("oracle", sections["oracle"], ORACLE_FILE_KEYS)
    logger.debug("loaded configuration from %s: %s", path, sections)
    return sections


def kernel_config(overrides: Dict[str, Any]) -> KernelConfig:
    """Defaults with the file overrides applied and validated"""
    try:
        return dataclasses.replace(DEFAULT_KERNEL_CONFIG, **overrides)
    except RenyiSpectrumError as exc:
        raise ConfigurationError(exc.message, exc.details) from exc
    except TypeError as exc:
        raise ConfigurationError(
            "kernel settings have the wrong type", {"reason": str(exc)}
        ) from exc
