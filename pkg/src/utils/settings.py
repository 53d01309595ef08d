"""
Runtime settings from environment variables
"""
import logging
import os
from dataclasses import dataclass, field

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _env_int(name: str, default: str) -> int:
    raw = os.getenv(name, default)
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


@dataclass
class RuntimeSettings:
    """Execution settings; none of them changes simulation results"""
    threads: int = field(default_factory=lambda: _env_int("MMWAVE_SIM_THREADS", "0"))  # 0 = auto
    chunk_trials: int = field(default_factory=lambda: _env_int("MMWAVE_SIM_CHUNK_TRIALS", "256"))
    log_level: str = field(default_factory=lambda: os.getenv("MMWAVE_SIM_LOG_LEVEL", "WARNING").upper())
    table_nodes: int = field(default_factory=lambda: _env_int("MMWAVE_SIM_TABLE_NODES", "4096"))

    def __post_init__(self):
        if self.threads < 0:
            raise ValueError(f"MMWAVE_SIM_THREADS must be >= 0, got {self.threads}")
        if self.chunk_trials < 1:
            raise ValueError(f"MMWAVE_SIM_CHUNK_TRIALS must be >= 1, got {self.chunk_trials}")
        if self.table_nodes < 2:
            raise ValueError(f"MMWAVE_SIM_TABLE_NODES must be >= 2, got {self.table_nodes}")
        if not isinstance(logging.getLevelName(self.log_level), int):
            raise ValueError(f"MMWAVE_SIM_LOG_LEVEL is not a logging level: {self.log_level!r}")

    @property
    def worker_count(self) -> int:
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)


def configure_logging(settings: RuntimeSettings):
    """Root logger on stderr at the configured level"""
    logging.basicConfig(level=settings.log_level, format=LOG_FORMAT, force=True)
