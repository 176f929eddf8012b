"""Unit tests for the piecewise rate approximation."""
