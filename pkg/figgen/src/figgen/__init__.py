"""Figure renderer for the cellular simulator's CSV outputs."""

__version__ = "0.1.0"

from .render import FigureSpec, SchemaError, render
