"""Shape contrast: two drives, linear ring energies, Duffing ring energies."""

import numpy as np

from . import style
from .loaders import SchemaError, find_input, load_columns


def draw(dirs):
    comp = load_columns(find_input(dirs, "shape_compare.csv"),
                        ["regime", "delta_phi2", "k", "e_k"])
    phases = sorted(set(comp["delta_phi2"].astype(float)))
    if len(phases) < 2:
        raise SchemaError("shape_compare.csv carries fewer than two phases")

    fig = style.new_figure(9.0, 3.2)
    ax_drive, ax_lin, ax_duf = fig.subplots(1, 3)

    colors = [style.BLUE, style.LIGHT_BLUE]
    for phase, color in zip(phases[:2], colors):
        name = f"drive_dphi2_{phase:.6f}.csv".replace("-", "m")
        drive = load_columns(find_input(dirs, name), ["t", "s"])
        ax_drive.plot(drive["t"], drive["s"], color=color,
                      label=f"$\\Delta\\phi_2$ = {phase:.2f}")
    ax_drive.set_xlabel("t")
    ax_drive.set_ylabel("s(t)")
    ax_drive.set_title("two-tone shape probe")
    ax_drive.legend(loc="upper right")

    width = 0.38
    for ax, regime, title in ((ax_lin, "linear", "linear ring"),
                              (ax_duf, "duffing", "Duffing ring")):
        for offset, (phase, color) in enumerate(zip(phases[:2], colors)):
            mask = (comp["regime"] == regime) & (comp["delta_phi2"] == phase)
            k = comp["k"][mask].astype(float)
            e = comp["e_k"][mask].astype(float)
            floor = max(e.max() * 1e-16, 1e-300)
            ax.bar(k + (offset - 0.5) * width, np.maximum(e, floor), width=width,
                   color=color, label=f"$\\Delta\\phi_2$ = {phase:.2f}")
        ax.set_yscale("log")
        ax.set_xlabel("harmonic k")
        ax.set_ylabel("$E_k$")
        ax.set_title(title)
        ax.legend(loc="upper right")
    fig.tight_layout()
    return fig
