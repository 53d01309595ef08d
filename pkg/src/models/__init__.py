"""
Configuration Models and Schema
"""
from ..utils.settings import RuntimeSettings, configure_logging
from .config_schema import (
    ConfigError,
    DEFAULT_DOCUMENT,
    normalize_document,
    load_document,
    apply_overrides,
    dump_document,
    build_config,
    load_config,
    sweep_axes,
    probe_distances
)

__all__ = [
    'RuntimeSettings',
    'configure_logging',
    'ConfigError',
    'DEFAULT_DOCUMENT',
    'normalize_document',
    'load_document',
    'apply_overrides',
    'dump_document',
    'build_config',
    'load_config',
    'sweep_axes',
    'probe_distances'
]
