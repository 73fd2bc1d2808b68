"""
A Monte Carlo oracle for the reserves and rates of the analytic solvers.
"""
