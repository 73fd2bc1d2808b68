"""
Tests for ``retirement_thiele.model``.
"""
