from .bnb import BnbNode, BnbOutcome, BnbStats, branch_and_bound
from .heuristics import enumerate_assoc, greedy_assoc

__all__ = [
    "greedy_assoc",
    "enumerate_assoc",
    "branch_and_bound",
    "BnbOutcome",
    "BnbStats",
    "BnbNode",
]
