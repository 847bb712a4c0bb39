"""Shared plotting style: colors, rc settings, reference-line helpers."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

BLUE = "#2060a8"
LIGHT_BLUE = "#7fb2e5"
ORANGE = "#e08020"
GREY = "#808080"
MODE_CMAP = "Blues"

RC = {
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "lines.linewidth": 1.4,
}


def new_figure(width: float, height: float):
    plt.rcParams.update(RC)
    return plt.figure(figsize=(width, height))


def reference_line(ax, y: float, color: str, label: str | None = None):
    """Horizontal dashed landmark; y in data units."""
    ax.axhline(y, color=color, linestyle="--", linewidth=1.0, label=label)


def chance_line(ax, level: float):
    reference_line(ax, level, GREY, label=f"chance ({level:.0%})")
