"""Characterisation battery: drive, mode-envelope heatmap, spectrogram rows."""

import numpy as np

from . import style
from .loaders import find_input, load_columns

DRIVES = ("tone", "chirp", "burst", "fm")


def _heatmap(ax, t, k, v, ylabel):
    tu = np.unique(t)
    ku = np.unique(k)
    grid = np.full((ku.size, tu.size), np.nan)
    ti = np.searchsorted(tu, t)
    ki = np.searchsorted(ku, k)
    grid[ki, ti] = v
    mesh = ax.pcolormesh(tu, ku, grid, shading="nearest", cmap="magma")
    ax.set_ylabel(ylabel)
    return mesh


def draw(dirs):
    fig = style.new_figure(9.0, 10.0)
    axes = fig.subplots(len(DRIVES), 3)
    for row, name in enumerate(DRIVES):
        drive = load_columns(find_input(dirs, f"battery_{name}_drive.csv"),
                             ["t", "s"])
        env = load_columns(find_input(dirs, f"battery_{name}_envelope.csv"),
                           ["t", "n", "value"])
        spec = load_columns(find_input(dirs, f"battery_{name}_spectrogram.csv"),
                            ["t", "f", "value"])

        ax_drive, ax_env, ax_spec = axes[row]
        ax_drive.plot(drive["t"], drive["s"], color=style.BLUE, linewidth=0.7)
        ax_drive.set_ylabel(name)
        _heatmap(ax_env, env["t"], env["n"], env["value"], "mode n")
        # spectrogram in dB for display, floored well below the peaks
        v = spec["value"]
        db = 20 * np.log10(np.maximum(v, v.max() * 1e-6) / v.max())
        _heatmap(ax_spec, spec["t"], spec["f"], db, "f")
        if row == 0:
            ax_drive.set_title("drive s(t)")
            ax_env.set_title("mode envelope")
            ax_spec.set_title("windowed FFT (dB)")
        if row == len(DRIVES) - 1:
            for ax in axes[row]:
                ax.set_xlabel("t (s)")
    fig.tight_layout()
    return fig
