"""Fixtures that are included in the package."""
