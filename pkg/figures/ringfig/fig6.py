"""Noise robustness: phi0 mean +- std over SNR with per-seed scatter."""

import numpy as np

from . import style
from .loaders import find_input, load_columns

REFERENCE_PHI0_OVER_PI = 0.628


def draw(dirs):
    cells = load_columns(find_input(dirs, "noise_phi0.csv"),
                         ["snr_db", "phi0_over_pi"])
    agg = load_columns(find_input(dirs, "noise_aggregate.csv"),
                       ["snr_db", "mean_phi0", "std_phi0"])

    fig = style.new_figure(4.8, 3.4)
    ax = fig.subplots()
    ok = ~np.isnan(cells["phi0_over_pi"].astype(float))
    ax.plot(cells["snr_db"][ok], cells["phi0_over_pi"][ok], "o",
            color=style.BLUE, alpha=0.25, markersize=4, label="seeds")
    order = np.argsort(agg["snr_db"])
    ax.errorbar(agg["snr_db"][order], agg["mean_phi0"][order] / np.pi,
                yerr=agg["std_phi0"][order] / np.pi, color=style.BLUE,
                marker="o", capsize=3, label="mean $\\pm$ std")
    style.reference_line(ax, REFERENCE_PHI0_OVER_PI, style.ORANGE,
                         label="noise-free $\\phi_0$")
    style.reference_line(ax, 0.5, style.GREY, label="conservative attractor")
    ax.set_xlabel("input SNR (dB)")
    ax.set_ylabel("$\\phi_0/\\pi$")
    ax.invert_xaxis()  # high fidelity on the left, noise grows rightwards
    ax.legend(loc="lower left")
    fig.tight_layout()
    return fig
