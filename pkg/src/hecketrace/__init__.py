"""Exact truncated traces of Kottwitz functions on GL_n."""

__version__ = "0.1.0"
