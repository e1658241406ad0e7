"""Render simulator run directories (CSV/JSON artifacts) into figures."""

from .figures import FigureRequest, render
from .schema import SchemaError, load_spectrum, load_trajectory

__version__ = "0.1.0"

__all__ = [
    "FigureRequest",
    "render",
    "SchemaError",
    "load_spectrum",
    "load_trajectory",
    "__version__",
]
