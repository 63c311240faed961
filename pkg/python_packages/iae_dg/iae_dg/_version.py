""" single source of truth for iae_dg version
"""

__version__ = "0.1.0"
