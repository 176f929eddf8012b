"""
Unit tests for data models package.

This package contains tests for the Pydantic models describing scenarios,
associations, uncertainty boxes, approximations and solve results.
"""
