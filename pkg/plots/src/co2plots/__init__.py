"""Figures from co2fronts run directories; consumes only the CSV schemas."""

__version__ = "0.1.0"

from .figures import FIGURE_KINDS, render
from .io import RunDataError, RunDir
