"""Unit tests for configuration, logging, persistence and timing helpers."""
