"""Post-integration analysis: mode projection, envelopes, harmonic energies.

Everything here is pure over immutable trajectories. The steady-state
window retains the largest integer number of drive periods that fits in
the second half of a run; that puts every harmonic of the drive on a
single DFT bin, so harmonic energies are direct bin look-ups with no
leakage correction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import hilbert, spectrogram

from .substrate import RingSubstrate, mode_frequencies
from .integrators import Trajectory

__all__ = [
    "ModeTrajectory",
    "SteadyStateWindow",
    "HarmonicEnergies",
    "project_modes",
    "hilbert_envelope",
    "reservoir_features",
    "steady_window",
    "harmonic_energies",
    "fft_baseline_features",
]


@dataclass
class ModeTrajectory:
    """Per-column mode amplitude time series on the source grid."""

    times: np.ndarray
    amplitudes: np.ndarray  # (n_samples, N)


def project_modes(sub: RingSubstrate, traj: Trajectory) -> ModeTrajectory:
    """Project node positions onto the eigenbasis, one series per column.

    Accepts trajectories whose state is either positions alone (N) or
    positions stacked with velocities (2N).
    """
    n = sub.n_nodes
    dim = traj.states.shape[1]
    if dim == n:
        x = traj.states
    elif dim == 2 * n:
        x = traj.states[:, :n]
    else:
        raise ValueError(f"state dimension {dim} matches neither N nor 2N (N={n})")
    return ModeTrajectory(times=traj.times, amplitudes=x @ sub.eigenbasis)


def hilbert_envelope(series: np.ndarray, axis: int = -1) -> np.ndarray:
    """Modulus of the analytic signal along ``axis``.

    The analytic signal is built by the FFT method: negative frequencies
    zeroed, positive doubled, DC and Nyquist kept.
    """
    series = np.asarray(series, dtype=float)
    if series.shape[axis] < 16:
        raise ValueError("series too short for a meaningful envelope (< 16 samples)")
    return np.abs(hilbert(series, axis=axis))


def reservoir_features(
    sub: RingSubstrate, mt: ModeTrajectory, t_half: float
) -> np.ndarray:
    """Mode-wise mean envelope over t > t_half, one entry per wavenumber 1..N/2.

    Degenerate cosine/sine pairs are combined in quadrature per sample,
    sqrt(env_cos^2 + env_sin^2), which is invariant under rotations of the
    pair and hence under which node carries the drive.
    """
    t = mt.times
    if not t[0] <= t_half < t[-1]:
        raise ValueError("t_half outside the trajectory")
    keep = t > t_half
    env = hilbert_envelope(mt.amplitudes.T)[:, keep]  # (N, n_kept)
    half = sub.n_nodes // 2
    features = np.empty(half)
    for k in range(1, half + 1):
        cols = sub.columns_for(k)
        pair = np.sqrt(np.sum(env[cols] ** 2, axis=0))
        features[k - 1] = pair.mean()
    return features


@dataclass(frozen=True)
class SteadyStateWindow:
    """Right-anchored analysis window of n_ss whole drive periods."""

    n_ss: int
    start_index: int
    length: int


def steady_window(t_tot: float, f_drive: float, dt: float) -> SteadyStateWindow:
    """Largest whole number of drive periods inside the second half of a run.

    The window ends at the final sample. Raises if less than one period
    fits or if a period is not representable as a whole number of samples.
    """
    if f_drive <= 0 or dt <= 0 or t_tot <= 0:
        raise ValueError("t_tot, f_drive and dt must be positive")
    t_period = 1.0 / f_drive
    n_ss = int(np.floor((t_tot / 2.0) / t_period + 1e-12))
    if n_ss < 1:
        raise ValueError(
            f"no whole drive period fits in the second half (T={t_tot:g}, "
            f"period={t_period:g})"
        )
    raw_len = n_ss * t_period / dt
    length = int(round(raw_len))
    if abs(raw_len - length) > 1e-6:
        raise ValueError(
            f"window of {n_ss} periods is not a whole number of samples "
            f"({raw_len:.9g} at dt={dt:g})"
        )
    n_samples = int(round(t_tot / dt)) + 1
    return SteadyStateWindow(n_ss=n_ss, start_index=n_samples - length, length=length)


@dataclass
class HarmonicEnergies:
    """Node-summed spectral power at each harmonic of the drive."""

    e_k: np.ndarray  # index k-1 holds E_k, k = 1..k_max
    window: SteadyStateWindow
    meta: dict = field(default_factory=dict)

    def __getitem__(self, k: int) -> float:
        return float(self.e_k[k - 1])


def harmonic_energies(
    traj: Trajectory,
    window: SteadyStateWindow,
    n_nodes: int,
    k_max: int = 6,
) -> HarmonicEnergies:
    """E_k = sum over nodes of |DFT bin at k * f_drive|^2, k = 1..k_max.

    The window construction puts harmonic k exactly on bin k*n_ss of the
    windowed DFT.
    """
    x = traj.states[:, :n_nodes]
    if window.start_index < 0 or window.start_index + window.length > x.shape[0]:
        raise ValueError("window does not fit inside the trajectory")
    bins = window.n_ss * np.arange(1, k_max + 1)
    if bins[-1] > window.length // 2:
        raise ValueError(
            f"harmonic {k_max} (bin {bins[-1]}) exceeds the window Nyquist bin "
            f"{window.length // 2}"
        )
    seg = x[window.start_index : window.start_index + window.length]
    spec = np.fft.rfft(seg, axis=0)
    e_k = np.sum(np.abs(spec[bins, :]) ** 2, axis=1)
    return HarmonicEnergies(e_k=e_k, window=window, meta={"k_max": k_max})


def fft_baseline_features(
    signal: np.ndarray,
    sub: RingSubstrate,
    params,
    fs: float,
    window_s: float = 4.0,
    overlap: float = 0.75,
) -> np.ndarray:
    """Windowed-FFT descriptor of a raw input, sampled at the mode frequencies.

    Hann-windowed short-time FFT magnitudes are time-averaged across all
    window positions and linearly interpolated at omega_n / 2 pi for
    n = 1..N/2, giving a feature vector of the same dimension as the
    reservoir descriptor.
    """
    signal = np.asarray(signal, dtype=float)
    nperseg = int(round(window_s * fs))
    if signal.size < nperseg:
        raise ValueError("signal shorter than one spectrogram window")
    if not 0 <= overlap < 1:
        raise ValueError("overlap must be in [0, 1)")
    noverlap = int(round(overlap * nperseg))
    freqs, _, sxx = spectrogram(
        signal,
        fs=fs,
        window="hann",
        nperseg=nperseg,
        noverlap=noverlap,
        mode="magnitude",
    )
    mean_mag = sxx.mean(axis=1)
    omega = mode_frequencies(sub, params)
    half = sub.n_nodes // 2
    targets = np.empty(half)
    for k in range(1, half + 1):
        col = sub.columns_for(k)[0]
        targets[k - 1] = omega[col] / (2.0 * np.pi)
    return np.interp(targets, freqs, mean_mag)
