"""Unit tests for probability helpers, uncertainty boxes and formulations."""
