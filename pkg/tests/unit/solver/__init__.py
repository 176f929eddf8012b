"""
Unit tests for the log-convex program representation and the barrier solver.
"""
