"""
valgen
Exact valuations on polynomial rings, key polynomials and generating sequences
"""

__version__ = "1.0.0"
