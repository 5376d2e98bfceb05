"""Monoidal string diagrams with layered theories, ZX, MBQC graphs, finite
channels and a CCS fragment."""

from .errors import LmtError, ParseError

__version__ = "0.1.0"

__all__ = ["LmtError", "ParseError", "__version__"]
