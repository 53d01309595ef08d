"""
Utility Functions
"""
from .units import db_to_linear, linear_to_db, dbm_to_mw, mw_to_dbm
from .random_streams import trial_stream, StreamPurpose
from .settings import RuntimeSettings, configure_logging, LOG_FORMAT

__all__ = [
    'db_to_linear',
    'linear_to_db',
    'dbm_to_mw',
    'mw_to_dbm',
    'trial_stream',
    'StreamPurpose',
    'RuntimeSettings',
    'configure_logging',
    'LOG_FORMAT'
]
