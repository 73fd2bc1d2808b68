"""
Tests for ``retirement_thiele.thiele``.
"""
