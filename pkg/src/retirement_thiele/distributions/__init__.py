"""
Occupation probabilities, the law of retirement and death, and intensities.
"""
