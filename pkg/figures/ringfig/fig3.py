"""Psychometric curves: reservoir vs windowed-FFT accuracy over SNR."""

import numpy as np

from . import style
from .loaders import find_input, load_columns

SERIES = (("reservoir", style.BLUE, "o"), ("fft", style.ORANGE, "s"))


def draw(dirs):
    data = load_columns(find_input(dirs, "psychometric.csv"),
                        ["snr_db", "method", "mean_acc", "std_acc"])
    fig = style.new_figure(4.8, 3.4)
    ax = fig.subplots()
    for method, color, marker in SERIES:
        mask = data["method"] == method
        snr = data["snr_db"][mask].astype(float)
        mean = data["mean_acc"][mask].astype(float)
        std = data["std_acc"][mask].astype(float)
        order = np.argsort(snr)
        snr, mean, std = snr[order], mean[order], std[order]
        ax.plot(snr, mean, marker=marker, color=color, label=method)
        ax.fill_between(snr, mean - std, mean + std, color=color, alpha=0.2)
    style.chance_line(ax, 0.25)
    ax.set_xlabel("input SNR (dB)")
    ax.set_ylabel("test accuracy")
    ax.set_ylim(0.0, 1.05)
    ax.legend(loc="lower right")
    fig.tight_layout()
    return fig
