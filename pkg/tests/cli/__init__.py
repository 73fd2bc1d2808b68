"""
Tests for ``retirement_thiele.cli``.
"""
