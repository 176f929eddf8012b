"""Unit tests for Monte Carlo sampling and validation."""
