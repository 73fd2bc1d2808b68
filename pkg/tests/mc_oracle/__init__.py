"""
Tests for ``retirement_thiele.mc_oracle``.
"""
