"""
Test suite for the HetNet power planner.

This package contains unit tests, integration tests (acceptance suite
and CLI) and shared fixtures.
"""
