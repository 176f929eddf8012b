from .config import Settings, get_config, set_config
from .logger import setup_logging
from .performance_logger import PerformanceContext, format_duration, track_performance

__all__ = [
    "Settings",
    "get_config",
    "set_config",
    "setup_logging",
    "PerformanceContext",
    "track_performance",
    "format_duration",
]
