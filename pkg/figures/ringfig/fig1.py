"""Substrate overview: ring topology, eigenmode shapes, dispersion."""

import numpy as np

from . import style
from .loaders import find_input, load_columns


def draw(dirs):
    modes_path = find_input(dirs, "modes.csv")
    disp = load_columns(find_input(dirs, "dispersion.csv"),
                        ["n", "lambda_n", "omega_n_linear", "omega_n_duffing"])

    header = modes_path.read_text().splitlines()[0].split(",")
    shape_cols = [c for c in header if c.startswith("mode_")]
    modes = load_columns(modes_path, ["j"] + shape_cols)

    fig = style.new_figure(9.0, 3.0)
    ax_top, ax_shapes, ax_disp = fig.subplots(1, 3)

    n_nodes = modes["j"].size
    theta = 2 * np.pi * modes["j"] / n_nodes
    ax_top.plot(np.cos(theta), np.sin(theta), "o", color=style.BLUE, markersize=3)
    ax_top.plot([np.cos(0)], [np.sin(0)], "o", color=style.ORANGE, markersize=6)
    ax_top.annotate("drive", (1.0, 0.0), textcoords="offset points",
                    xytext=(8, 4), color=style.ORANGE)
    ax_top.set_aspect("equal")
    ax_top.set_title(f"ring of N = {n_nodes} nodes")
    ax_top.set_xticks([])
    ax_top.set_yticks([])

    import matplotlib

    cmap = matplotlib.colormaps[style.MODE_CMAP]
    for i, col in enumerate(shape_cols):
        n = int(col.split("_")[1])
        color = style.ORANGE if n == 0 else cmap(0.35 + 0.6 * i / max(1, len(shape_cols) - 1))
        ax_shapes.plot(modes["j"], modes[col], label=f"n={n}", color=color)
    ax_shapes.set_xlabel("node j")
    ax_shapes.set_ylabel("mode amplitude")
    ax_shapes.set_title("eigenmode shapes")
    ax_shapes.legend(loc="upper right", ncols=2)

    ax_disp.plot(disp["n"], np.sqrt(disp["lambda_n"]), "o-", color=style.BLUE,
                 label="linear, $\\omega_n/\\omega_0 = \\sqrt{\\lambda_n}$")
    ax_disp.plot(disp["n"], disp["omega_n_duffing"], "s-", color=style.LIGHT_BLUE,
                 label="Duffing, $\\omega_n$")
    style.reference_line(ax_disp, 2.0, style.GREY)
    ax_disp.set_xlabel("wavenumber n")
    ax_disp.set_ylabel("frequency")
    ax_disp.set_title("dispersion")
    ax_disp.legend(loc="lower right")

    fig.tight_layout()
    return fig
