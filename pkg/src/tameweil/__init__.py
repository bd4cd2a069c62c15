"""Exact classification of tame filtered Frobenius-Galois descriptors.

The public surface is re-exported here; submodules stay importable for
the adventurous.
"""

__version__ = "0.1.0"
