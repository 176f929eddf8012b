"""Unit tests for association heuristics and branch & bound."""
