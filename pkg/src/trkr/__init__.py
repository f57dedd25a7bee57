"""Transverse Khovanov-Rozansky homology of closed braids."""

__version__ = "0.1.0"
