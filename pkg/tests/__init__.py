"""
Tests for the retirement reserving engine.
"""
