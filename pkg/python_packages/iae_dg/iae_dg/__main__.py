""" run the experiment runner as ``python -m iae_dg``
"""
from .cli import main

if __name__ == "__main__":
    main()
