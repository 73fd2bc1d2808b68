"""
Tests for ``retirement_thiele.distributions``.
"""
