"""Exact twisted-complex calculus and weight homology over Z and Z/n."""

__version__ = "0.1.0"
