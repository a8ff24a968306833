"""Correlated equilibria in finite mean field games and their N-player approximations."""
from .numeric import FLOAT, RATIONAL, InputError

__version__ = "0.1.0"

__all__ = ["RATIONAL", "FLOAT", "InputError", "__version__"]
