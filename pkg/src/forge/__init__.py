"""Exact two-base digit arithmetic, pattern realisation, grid codecs and a
Turing-machine-to-sentence compiler for (N, +, k^N, l^N)."""

from .errors import ForgeError
from .radix import BasePair

__version__ = "0.1.0"
__all__ = ["BasePair", "ForgeError", "__version__"]
