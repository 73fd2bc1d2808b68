"""
A command line runner for reserve scenarios.
"""
