"""Shape-phase sweep: E5 curve, Fourier coefficients, alpha trajectory."""

import numpy as np

from . import style
from .loaders import find_input, load_columns


def draw(dirs):
    sweep = load_columns(find_input(dirs, "phi0_sweep.csv"), ["delta_phi2", "e5"])
    recon = load_columns(find_input(dirs, "reconstruction.csv"),
                         ["delta_phi2", "e5"])
    coeffs = load_columns(find_input(dirs, "fourier_coeffs.csv"),
                          ["n", "a_n", "b_n"])
    alpha = load_columns(find_input(dirs, "alpha_phi0.csv"),
                         ["alpha", "phi0_over_pi"])

    fig = style.new_figure(9.0, 3.2)
    ax_sweep, ax_coef, ax_alpha = fig.subplots(1, 3)

    ax_sweep.plot(recon["delta_phi2"] / np.pi, recon["e5"],
                  color=style.LIGHT_BLUE, label="reconstruction")
    ax_sweep.plot(sweep["delta_phi2"] / np.pi, sweep["e5"], "o",
                  color=style.BLUE, markersize=3, label="samples")
    peak = recon["delta_phi2"][np.argmax(recon["e5"])] / np.pi
    ax_sweep.axvline(peak, color=style.ORANGE, linestyle="--", linewidth=1.0)
    ax_sweep.set_xlabel("$\\Delta\\phi_2/\\pi$")
    ax_sweep.set_ylabel("$E_5$")
    ax_sweep.set_title("shape-phase sweep")
    ax_sweep.legend(loc="upper right")

    n = coeffs["n"].astype(float)
    show = n <= 10
    width = 0.4
    floor = max(np.abs(coeffs["a_n"]).max(), np.abs(coeffs["b_n"]).max()) * 1e-12
    ax_coef.bar(n[show] - width / 2, np.maximum(np.abs(coeffs["a_n"][show]), floor),
                width=width, color=style.BLUE, label="$|a_n|$")
    ax_coef.bar(n[show] + width / 2, np.maximum(np.abs(coeffs["b_n"][show]), floor),
                width=width, color=style.ORANGE, label="$|b_n|$")
    ax_coef.set_yscale("log")
    ax_coef.set_xlabel("n")
    ax_coef.set_ylabel("coefficient magnitude")
    ax_coef.set_title("Fourier coefficients of $E_5$")
    ax_coef.legend(loc="upper right")

    ax_alpha.plot(alpha["alpha"], alpha["phi0_over_pi"], "o-", color=style.BLUE)
    style.reference_line(ax_alpha, 0.5, style.GREY)
    ax_alpha.set_xlabel("cubic coefficient")
    ax_alpha.set_ylabel("$\\phi_0/\\pi$")
    ax_alpha.set_title("peak-position trajectory")
    fig.tight_layout()
    return fig
