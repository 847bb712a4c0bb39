"""The folded peak-position shape observable and its symmetry diagnostics.

A two-tone drive with second-harmonic phase dphi2 is swept over a uniform
grid in [0, 2pi); each point is one full ring simulation reduced to its
steady-state harmonic energies. The fifth-harmonic curve E5(dphi2) is
reconstructed as the band-limited trigonometric interpolant of the
samples, its peak located on a fine grid, and the position folded into
[0, pi) using the exact pi-periodicity of the response. The Fourier
coefficients of the curve quantify both symmetries: odd-index
coefficients vanish when the pi-periodicity holds, and the sine/cosine
balance at index 2 measures how strongly damping breaks the reflection
symmetry.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .drives import NoiseSpec, TwoTone, eval_noise, make_noise, two_tone_rms_nominal
from .dynamics import RegimeParams, node_rhs
from .integrators import IntegratorConfig, integrate
from .readout import harmonic_energies, steady_window
from .seeds import derive_seed
from .substrate import build_substrate

__all__ = [
    "DuffingRunSettings",
    "ShapeSweep",
    "PhiEstimate",
    "NoiseCell",
    "NoiseRobustness",
    "simulate_harmonics",
    "sweep_shape",
    "trig_reconstruct",
    "fold_phase",
    "reconstruct_and_peak",
    "alpha_trajectory",
    "noise_robustness",
    "detection_threshold",
]

FLAT_CURVE_TOL = 1e-12


@dataclass(frozen=True)
class DuffingRunSettings:
    """Everything one shape-probe simulation needs besides dphi2."""

    params: RegimeParams
    n_nodes: int = 64
    a1: float = 0.6
    a2: float = 0.30
    f_drive: float = 0.18
    method: str = "dp853"
    rtol: float = 1e-10
    atol: float = 1e-12
    t_total: float = 300.0
    output_dt: float = 0.05
    drive_node: int = 0
    k_max: int = 6

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(method=self.method, t_span=(0.0, self.t_total),
                                output_dt=self.output_dt, rtol=self.rtol,
                                atol=self.atol)

    def signal_rms(self) -> float:
        return two_tone_rms_nominal(self.a1, self.a2)


def simulate_harmonics(settings: DuffingRunSettings, dphi2: float,
                       noise=None) -> np.ndarray:
    """One ring simulation reduced to E_1..E_kmax at the given shape phase."""
    sub = build_substrate(settings.n_nodes)
    drive = TwoTone(settings.a1, settings.a2, settings.f_drive, dphi2)
    if noise is not None:
        s = lambda t: drive.evaluate(t) + eval_noise(noise, t)
    else:
        s = drive.evaluate
    f = node_rhs(sub, settings.params, s, settings.drive_node)
    traj = integrate(f, np.zeros(2 * settings.n_nodes), settings.integrator())
    w = steady_window(settings.t_total, settings.f_drive, settings.output_dt)
    return harmonic_energies(traj, w, settings.n_nodes, settings.k_max).e_k


def _sweep_task(args) -> tuple[int, np.ndarray]:
    index, settings, dphi2, noise_spec, signal_rms = args
    noise = make_noise(noise_spec, signal_rms) if noise_spec is not None else None
    try:
        e_k = simulate_harmonics(settings, dphi2, noise)
    except Exception as exc:  # propagate with the offending grid point
        raise RuntimeError(f"simulation failed at dphi2={dphi2:.6f}") from exc
    return index, e_k


@dataclass
class ShapeSweep:
    """Harmonic energies over the uniform dphi2 grid."""

    delta_phi2: np.ndarray
    energies: np.ndarray  # (n_phi, k_max)
    meta: dict = field(default_factory=dict)

    @property
    def e5(self) -> np.ndarray:
        return self.energies[:, 4]

    def harmonic(self, k: int) -> np.ndarray:
        return self.energies[:, k - 1]


def sweep_shape(
    settings: DuffingRunSettings,
    n_phi: int,
    noise_spec: NoiseSpec | None = None,
    workers: int = 1,
) -> ShapeSweep:
    """Sweep dphi2 over 2pi*m/n_phi with identical solver settings per point.

    With a noise spec, a single realisation is generated from the spec's
    seed and shared across every grid point of the sweep.
    """
    if n_phi < 2 or n_phi % 2 != 0:
        raise ValueError("n_phi must be an even integer >= 2")
    grid = 2.0 * np.pi * np.arange(n_phi) / n_phi
    rms = settings.signal_rms()
    tasks = [(i, settings, float(p), noise_spec, rms) for i, p in enumerate(grid)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_task, tasks, chunksize=1))
    else:
        results = [_sweep_task(t) for t in tasks]
    energies = np.empty((n_phi, settings.k_max))
    for i, e_k in results:
        energies[i] = e_k
    meta = {"n_phi": n_phi, "settings": settings}
    if noise_spec is not None:
        meta["noise"] = {"snr_db": noise_spec.snr_db, "seed": noise_spec.seed,
                         "convention": noise_spec.convention}
    return ShapeSweep(delta_phi2=grid, energies=energies, meta=meta)


def trig_reconstruct(samples: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Band-limited trigonometric interpolant of uniform 2pi-periodic samples.

    Exact at the sample grid; the top (Nyquist) coefficient contributes a
    pure cosine so real inputs stay real.
    """
    n = samples.size
    coeffs = np.fft.rfft(samples) / n
    out = np.full_like(points, coeffs[0].real, dtype=float)
    for k in range(1, n // 2):
        out += 2.0 * (coeffs[k].real * np.cos(k * points)
                      - coeffs[k].imag * np.sin(k * points))
    out += coeffs[n // 2].real * np.cos((n // 2) * points)
    return out


def fold_phase(phi: float) -> float:
    """Fold an angle into [0, pi); idempotent."""
    return float(phi % np.pi)


@dataclass
class PhiEstimate:
    """Peak position of the E5 curve with symmetry diagnostics.

    ``sym2_residual`` is the largest |E5(phi+pi) - E5(phi)| over the sample
    grid, normalised by the grid maximum of E5. ``sym1_ratio`` is |b2|/|a2|
    of the curve's Fourier series (infinite when a2 vanishes).
    ``odd_even_ratio`` compares the largest odd-index coefficient magnitude
    against the largest even-index one (index >= 2).
    """

    phi0: float | None
    raw_argmax: float | None
    a_n: np.ndarray
    b_n: np.ndarray
    sym2_residual: float
    sym1_ratio: float
    odd_even_ratio: float
    flat: bool


def reconstruct_and_peak(sweep: ShapeSweep, fine_grid: int = 2048) -> PhiEstimate:
    """Locate the E5 peak on a fine grid and fold it into [0, pi).

    A flat curve (peak-to-trough below 1e-12 of the mean) has no defined
    peak; the estimate is flagged instead of reporting a number.
    """
    samples = sweep.e5
    n_phi = samples.size
    if n_phi % 2 != 0:
        raise ValueError("reconstruction requires an even sample count")
    points = 2.0 * np.pi * np.arange(fine_grid) / fine_grid
    curve = trig_reconstruct(samples, points)

    coeffs = np.fft.rfft(samples) / n_phi
    a_n = 2.0 * coeffs.real
    b_n = -2.0 * coeffs.imag
    a_n[0] = coeffs[0].real
    if n_phi % 2 == 0:
        a_n[-1] = coeffs[-1].real

    half = n_phi // 2
    shifted = np.roll(samples, -half)
    scale = float(np.max(samples))
    sym2 = float(np.max(np.abs(shifted - samples)) / scale) if scale > 0 else 0.0
    if len(a_n) > 2 and abs(a_n[2]) > 1e-12 * max(abs(b_n[2]), 1e-300):
        sym1 = float(abs(b_n[2]) / abs(a_n[2]))
    else:
        sym1 = float("inf")  # a_2 numerically zero: pure odd component
    odd = [abs(coeffs[k]) for k in range(1, half + 1, 2)]
    even = [abs(coeffs[k]) for k in range(2, half + 1, 2)]
    odd_even = float(max(odd) / max(even)) if odd and even and max(even) > 0 else float("inf")

    mean = float(np.mean(curve))
    flat = np.ptp(curve) < FLAT_CURVE_TOL * max(abs(mean), 1e-300)
    if flat:
        return PhiEstimate(phi0=None, raw_argmax=None, a_n=a_n, b_n=b_n,
                           sym2_residual=sym2, sym1_ratio=sym1,
                           odd_even_ratio=odd_even, flat=True)
    raw = float(points[int(np.argmax(curve))])  # ties break to the smallest angle
    return PhiEstimate(phi0=fold_phase(raw), raw_argmax=raw, a_n=a_n, b_n=b_n,
                       sym2_residual=sym2, sym1_ratio=sym1,
                       odd_even_ratio=odd_even, flat=False)


def alpha_trajectory(
    alphas: np.ndarray,
    settings: DuffingRunSettings,
    n_phi: int = 32,
    workers: int = 1,
    fine_grid: int = 2048,
) -> list[tuple[float, PhiEstimate]]:
    """Full sweep plus peak extraction for every cubic coefficient in turn."""
    out = []
    for alpha in alphas:
        if alpha <= 0:
            raise ValueError("alpha values must be positive")
        p = settings.params
        patched = RegimeParams(gamma=p.gamma, omega0_sq=p.omega0_sq,
                               alpha=float(alpha), k_c=p.k_c)
        cur = DuffingRunSettings(params=patched, n_nodes=settings.n_nodes,
                                 a1=settings.a1, a2=settings.a2,
                                 f_drive=settings.f_drive, method=settings.method,
                                 rtol=settings.rtol, atol=settings.atol,
                                 t_total=settings.t_total,
                                 output_dt=settings.output_dt,
                                 drive_node=settings.drive_node,
                                 k_max=settings.k_max)
        sweep = sweep_shape(cur, n_phi, workers=workers)
        out.append((float(alpha), reconstruct_and_peak(sweep, fine_grid)))
    return out


@dataclass
class NoiseCell:
    snr_db: float
    seed_index: int
    seed: int
    phi0: float | None
    failed: bool = False
    error: str = ""


@dataclass
class NoiseRobustness:
    cells: list
    aggregates: dict  # snr_db -> (mean, std, n_ok)
    threshold_db: float

    def phi0_values(self, snr_db: float) -> list[float]:
        return [c.phi0 for c in self.cells
                if c.snr_db == snr_db and not c.failed and c.phi0 is not None]


def _noise_cell_task(args):
    settings, n_phi, snr_db, seed_index, seed, convention, cutoff, fine_grid = args
    spec = NoiseSpec(snr_db=snr_db, convention=convention, cutoff=cutoff,
                     seed=seed, grid_dt=settings.output_dt,
                     total_time=settings.t_total)
    try:
        sweep = sweep_shape(settings, n_phi, noise_spec=spec, workers=1)
        est = reconstruct_and_peak(sweep, fine_grid)
        return NoiseCell(snr_db=snr_db, seed_index=seed_index, seed=seed,
                         phi0=est.phi0, failed=est.flat,
                         error="flat curve" if est.flat else "")
    except Exception as exc:
        return NoiseCell(snr_db=snr_db, seed_index=seed_index, seed=seed,
                         phi0=None, failed=True, error=str(exc))


def noise_robustness(
    settings: DuffingRunSettings,
    snr_grid=(30.0, 20.0, 10.0, 0.0),
    n_seeds: int = 8,
    n_phi: int = 32,
    master_seed: int = 0,
    convention: str = "power",
    cutoff: float = 5.0,
    workers: int = 1,
    fine_grid: int = 2048,
) -> NoiseRobustness:
    """Estimate phi0 per (snr, seed) cell and aggregate mean and std per SNR.

    Each cell owns an independent noise realisation whose seed derives
    from (master_seed, snr index, seed index); the 2-sigma single-shot
    detection threshold is interpolated from the per-SNR aggregates.
    """
    tasks = []
    for i, snr in enumerate(snr_grid):
        for j in range(n_seeds):
            seed = derive_seed(master_seed, "noise-robustness", i, j)
            tasks.append((settings, n_phi, float(snr), j, seed, convention,
                          cutoff, fine_grid))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_noise_cell_task, tasks, chunksize=1))
    else:
        cells = [_noise_cell_task(t) for t in tasks]

    aggregates = {}
    for snr in snr_grid:
        vals = [c.phi0 for c in cells
                if c.snr_db == float(snr) and not c.failed and c.phi0 is not None]
        if vals:
            aggregates[float(snr)] = (float(np.mean(vals)), float(np.std(vals, ddof=1)),
                                      len(vals))
        else:
            aggregates[float(snr)] = (float("nan"), float("nan"), 0)
    threshold = detection_threshold(
        np.array(sorted(aggregates)),
        np.array([aggregates[s][0] for s in sorted(aggregates)]),
        np.array([aggregates[s][1] for s in sorted(aggregates)]),
    )
    return NoiseRobustness(cells=cells, aggregates=aggregates, threshold_db=threshold)


def detection_threshold(snr_db: np.ndarray, means: np.ndarray,
                        stds: np.ndarray) -> float:
    """SNR where mean - 2*std rises through pi/2 (linear interpolation).

    Returns -inf if the margin is positive over the whole grid and +inf if
    it never becomes positive.
    """
    margin = means - 2.0 * stds - np.pi / 2.0
    order = np.argsort(snr_db)
    snr, g = np.asarray(snr_db)[order], margin[order]
    if np.all(g > 0):
        return float("-inf")
    if np.all(g <= 0):
        return float("inf")
    above = np.flatnonzero(g > 0)
    i = above[0]  # lowest SNR with positive margin
    if i == 0:
        return float(snr[0])
    f = (0.0 - g[i - 1]) / (g[i] - g[i - 1])
    return float(snr[i - 1] + f * (snr[i] - snr[i - 1]))
