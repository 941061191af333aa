"""Exact computations for invariant connections and Yang-Mills fields on homogeneous spaces."""

__version__ = "0.1.0"
