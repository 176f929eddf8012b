"""
Unit tests package.

Unit tests exercise individual modules on small hand-built scenarios.
"""
