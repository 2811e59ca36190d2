"""
Unit and integration tests for lkgeom.
"""
