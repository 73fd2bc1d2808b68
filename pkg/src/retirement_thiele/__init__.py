"""
Reserves for multi-state life insurance contracts under partial information
about the health state held at retirement.
"""
