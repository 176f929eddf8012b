from .audit import check_feasible, check_shapes
from .channel import (
    C_DB,
    db_to_linear,
    serving_sinr,
    sinr,
    throughput_vector,
    user_throughput,
)
from .generator import gen_synthetic, pathloss_db

__all__ = [
    "C_DB",
    "db_to_linear",
    "sinr",
    "user_throughput",
    "serving_sinr",
    "throughput_vector",
    "check_feasible",
    "check_shapes",
    "gen_synthetic",
    "pathloss_db",
]
