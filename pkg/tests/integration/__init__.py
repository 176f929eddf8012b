"""
Integration tests package.

These tests drive the planner end to end: generation, solving,
Monte Carlo validation, sweeps and the command line interface.
"""
