"""
Backward Thiele systems for reserves under each information regime.
"""
