"""
HetNet power planner

Robust power minimization for OFDMA heterogeneous networks with
log-normal shadowing, solved as mixed-integer geometric programs.
"""

__version__ = "1.0.0"

from .planner import PowerPlanner

__all__ = ["PowerPlanner", "__version__"]
