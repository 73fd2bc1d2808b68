"""
The stochastic retirement model: states, rates, payments and discounting.
"""
