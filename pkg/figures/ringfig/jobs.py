"""Figure job dispatch: id -> renderer, saving, error handling."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import fig1, fig2, fig3, fig4, fig5, fig6
from .loaders import SchemaError

RENDERERS = {
    "F1": fig1.draw,
    "F2": fig2.draw,
    "F3": fig3.draw,
    "F4": fig4.draw,
    "F5": fig5.draw,
    "F6": fig6.draw,
}


class RenderError(ValueError):
    pass


@dataclass
class FigureJob:
    figure: str
    input_dirs: list[Path]
    output: Path
    style_options: dict = field(default_factory=dict)


def render(job: FigureJob):
    """Draw the requested figure and write it to the output path.

    Returns the matplotlib Figure so callers (tests) can inspect panel
    structure. Fails before writing anything if an input is missing or a
    column is absent.
    """
    if job.figure not in RENDERERS:
        raise RenderError(
            f"unknown figure {job.figure!r}; known: {sorted(RENDERERS)}")
    try:
        fig = RENDERERS[job.figure]([Path(d) for d in job.input_dirs])
    except SchemaError as exc:
        raise RenderError(str(exc)) from exc
    out = Path(job.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out)
    return fig
