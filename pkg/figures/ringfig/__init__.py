"""Offline figure rendering from duffing-ring CSV artifacts.

Every renderer reads delimited artifacts produced by the simulation CLI
and draws one publication-style figure; no numerical analysis happens
here. CSV schemas are the only contract with the simulation package.
"""

from .jobs import FigureJob, RenderError, render

__all__ = ["FigureJob", "RenderError", "render"]
