"""Unit tests for channel formulas, audits and the scenario generator."""
