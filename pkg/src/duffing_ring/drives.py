"""Drive waveforms and the band-limited Gaussian noise process.

The linear-regime battery (tone, chirp, Gaussian burst, FM tone), the
two-tone shape probe, and additive noise built by low-pass filtering white
Gaussian samples through a causal 4th-order Butterworth filter, rescaling
to a target standard deviation, and fitting a natural cubic spline so the
adaptive integrators can query it between grid points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.signal import butter, lfilter

__all__ = [
    "PureTone",
    "Chirp",
    "GaussianBurst",
    "FMTone",
    "TwoTone",
    "NoiseOnly",
    "DriveSpec",
    "NoiseSpec",
    "SampledNoise",
    "eval_drive",
    "make_noise",
    "eval_noise",
    "two_tone_rms_nominal",
    "noise_sigma",
]

RNG_ALGORITHM = "PCG64"


@dataclass(frozen=True)
class PureTone:
    """cos(omega * t + phase)."""

    omega: float
    phase: float = 0.0

    def evaluate(self, t):
        return np.cos(self.omega * np.asarray(t, dtype=float) + self.phase)


@dataclass(frozen=True)
class Chirp:
    """Linear sweep of the instantaneous frequency from omega_start to omega_end.

    Phase is omega_start*t + (omega_end - omega_start)*t^2/(2*duration), so
    the instantaneous frequency reaches omega_end at t = duration.
    """

    omega_start: float
    omega_end: float
    duration: float

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError("chirp duration must be positive")

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        rate = (self.omega_end - self.omega_start) / self.duration
        return np.cos(self.omega_start * t + 0.5 * rate * t * t)


@dataclass(frozen=True)
class GaussianBurst:
    """Carrier tone under a unit-peak Gaussian envelope centred at t_center."""

    omega_carrier: float
    t_center: float
    sigma_env: float

    def __post_init__(self):
        if self.sigma_env <= 0:
            raise ValueError("sigma_env must be positive")

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        env = np.exp(-((t - self.t_center) ** 2) / (2.0 * self.sigma_env**2))
        return env * np.cos(self.omega_carrier * t)


@dataclass(frozen=True)
class FMTone:
    """Carrier with sinusoidal frequency modulation of the given depth."""

    omega_carrier: float
    omega_mod: float
    depth: float

    def __post_init__(self):
        if self.omega_mod <= 0:
            raise ValueError("omega_mod must be positive")

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        return np.cos(
            self.omega_carrier * t
            + (self.depth / self.omega_mod) * np.sin(self.omega_mod * t)
        )


@dataclass(frozen=True)
class TwoTone:
    """Fundamental plus second harmonic with relative phase dphi2.

    s(t) = a1*cos(2 pi f_drive t) + a2*cos(4 pi f_drive t + dphi2). The
    magnitude spectrum is independent of dphi2; only the waveform shape
    changes.
    """

    a1: float
    a2: float
    f_drive: float
    dphi2: float = 0.0

    def __post_init__(self):
        if self.f_drive <= 0:
            raise ValueError("f_drive must be positive")

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        w = 2.0 * np.pi * self.f_drive
        return self.a1 * np.cos(w * t) + self.a2 * np.cos(2.0 * w * t + self.dphi2)


@dataclass(frozen=True)
class NoiseOnly:
    """Zero clean drive; the trial carries noise alone."""

    def evaluate(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))


DriveSpec = PureTone | Chirp | GaussianBurst | FMTone | TwoTone | NoiseOnly


def eval_drive(spec: DriveSpec, t):
    """Pointwise closed-form evaluation; accepts scalars or arrays."""
    return spec.evaluate(t)


def two_tone_rms_nominal(a1: float, a2: float) -> float:
    """Clean two-tone scale sqrt(a1^2 + a2^2)/2 used as the SNR reference.

    The true RMS of the waveform is sqrt((a1^2 + a2^2)/2); this nominal
    value sits a factor sqrt(2) lower, which shifts all quoted power SNRs
    by about 3 dB. Runs record which reference they used.
    """
    return float(np.sqrt(a1**2 + a2**2) / 2.0)


def noise_sigma(snr_db: float, convention: str, signal_rms: float) -> float:
    """Target noise standard deviation for the given SNR convention."""
    if convention == "power":
        return float(signal_rms / np.sqrt(10.0 ** (snr_db / 10.0)))
    if convention == "amplitude":
        return float(10.0 ** (-snr_db / 20.0))
    raise ValueError(f"unknown SNR convention {convention!r}")


@dataclass(frozen=True)
class NoiseSpec:
    """Band-limited Gaussian noise: white samples -> Butterworth -> rescale.

    ``cutoff`` is the low-pass corner in the same frequency units as
    1/grid_dt; it must sit below the storage-grid Nyquist. ``convention``
    selects how ``snr_db`` maps to the target standard deviation.
    """

    snr_db: float
    convention: str
    cutoff: float
    seed: int
    grid_dt: float
    total_time: float
    filter_order: int = 4

    def __post_init__(self):
        if self.convention not in ("power", "amplitude"):
            raise ValueError(f"unknown SNR convention {self.convention!r}")
        if self.grid_dt <= 0 or self.total_time <= 0:
            raise ValueError("grid_dt and total_time must be positive")
        if self.cutoff >= 0.5 / self.grid_dt:
            raise ValueError(
                f"cutoff {self.cutoff:g} must lie below the grid Nyquist "
                f"{0.5 / self.grid_dt:g}"
            )
        if self.cutoff <= 0:
            raise ValueError("cutoff must be positive")
        if self.filter_order < 1:
            raise ValueError("filter_order must be >= 1")


@dataclass
class SampledNoise:
    """One noise realisation on its storage grid with spline interpolation."""

    times: np.ndarray
    values: np.ndarray
    spline: CubicSpline
    sigma: float
    meta: dict

    @property
    def total_time(self) -> float:
        return float(self.times[-1])


def make_noise(spec: NoiseSpec, signal_rms: float) -> SampledNoise:
    """Generate one deterministic noise realisation for (spec, seed).

    White Gaussian samples on the storage grid are passed through a causal
    digital Butterworth low-pass (bilinear design at the grid rate), the
    filter start-up transient is discarded via 10/cutoff of warm-up
    samples, and the result is rescaled so its sample standard deviation
    (ddof=0) equals the target exactly. A natural cubic spline provides
    C2-continuous off-grid evaluation.
    """
    sigma = noise_sigma(spec.snr_db, spec.convention, signal_rms)
    n_grid = int(round(spec.total_time / spec.grid_dt)) + 1
    n_warm = int(np.ceil(10.0 / spec.cutoff / spec.grid_dt))
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    white = rng.standard_normal(n_grid + n_warm)
    b, a = butter(spec.filter_order, spec.cutoff, btype="low", fs=1.0 / spec.grid_dt)
    filtered = lfilter(b, a, white)[n_warm:]
    std = filtered.std()
    if std == 0.0:
        raise ValueError("degenerate noise realisation (zero variance)")
    values = filtered * (sigma / std)
    times = spec.grid_dt * np.arange(n_grid)
    spline = CubicSpline(times, values, bc_type="natural")
    return SampledNoise(
        times=times,
        values=values,
        spline=spline,
        sigma=sigma,
        meta={
            "rng": RNG_ALGORITHM,
            "seed": spec.seed,
            "snr_db": spec.snr_db,
            "convention": spec.convention,
            "signal_rms": signal_rms,
            "snr_reference": "sqrt(a1^2+a2^2)/2 (nominal, ~3 dB below true RMS)",
            "filter": f"butterworth order {spec.filter_order}, causal, "
            f"cutoff {spec.cutoff:g}",
            "spline": "natural cubic",
        },
    )


def eval_noise(noise: SampledNoise, t):
    """Spline evaluation; exact at knots, rejects queries off the grid span."""
    t = np.asarray(t, dtype=float)
    lo, hi = noise.times[0], noise.times[-1]
    if np.any(t < lo - 1e-9) or np.any(t > hi + 1e-9):
        raise ValueError(f"noise queried outside [{lo:g}, {hi:g}]")
    return noise.spline(np.clip(t, lo, hi))
