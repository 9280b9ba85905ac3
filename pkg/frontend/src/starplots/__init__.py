"""Figure regeneration for starnoma curve CSVs."""

from .data import MissingSeriesError, SchemaError, Series, load_curves
from .recipes import FigureRecipe, SeriesStyle, known_figures, load_recipe
from .render import RenderResult, render

__version__ = "0.1.0"

__all__ = [
    "FigureRecipe", "MissingSeriesError", "RenderResult", "SchemaError",
    "Series", "SeriesStyle", "known_figures", "load_curves", "load_recipe",
    "render",
]
