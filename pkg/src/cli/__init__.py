"""
Command-line interface
"""
from .commands import (
    build_parser,
    main,
    cmd_blockage_prob,
    cmd_simulate,
    cmd_sweep,
    cmd_tradeoff,
    EXIT_OK,
    EXIT_CONFIG,
    EXIT_NUMERICAL
)

__all__ = [
    'build_parser',
    'main',
    'cmd_blockage_prob',
    'cmd_simulate',
    'cmd_sweep',
    'cmd_tradeoff',
    'EXIT_OK',
    'EXIT_CONFIG',
    'EXIT_NUMERICAL'
]
