"""Exact verification toolkit for contact metric frame data."""

from .report import VERSION as __version__

__all__ = ["__version__"]
