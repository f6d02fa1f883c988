"""Numerical n-inner product spaces and direct-method stability certification."""

__version__ = "0.1.0"
