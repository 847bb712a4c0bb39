"""Experiment runner: one config in, CSV/JSON artifacts plus a manifest out.

The manifest echoes the config, names the RNG algorithm, lists every
derived per-task seed, and inventories every written file with its SHA-256
checksum. CSV floats carry 17 significant digits so a rerun with the same
build reproduces byte-identical artifacts regardless of worker count.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .classify import crossing_snr, run_snr_sweep
from .config import ConfigError, ExperimentConfig, validate
from .drives import (
    RNG_ALGORITHM,
    Chirp,
    FMTone,
    GaussianBurst,
    NoiseOnly,
    PureTone,
    TwoTone,
)
from .dynamics import RegimeParams, mode_rhs_linear, reachable_wavenumbers
from .integrators import IntegratorConfig, integrate
from .readout import fft_baseline_features, hilbert_envelope
from .seeds import derive_seed
from .shape import (
    DuffingRunSettings,
    alpha_trajectory,
    noise_robustness,
    reconstruct_and_peak,
    simulate_harmonics,
    sweep_shape,
    trig_reconstruct,
)
from .substrate import build_substrate, mode_frequencies

__all__ = ["RunManifest", "run"]


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    if isinstance(x, float) and not np.isfinite(x):
        return repr(x)
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


@dataclass
class RunManifest:
    """Reproducibility record for one experiment run."""

    experiment: str
    version: str
    rng_algorithm: str
    master_seed: int
    workers: int
    config: dict
    task_seeds: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    files: list = field(default_factory=list)
    wall_time_s: float = 0.0
    n_failed: int = 0
    summary: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "tool": "duffing-ring",
            "version": self.version,
            "experiment": self.experiment,
            "rng_algorithm": self.rng_algorithm,
            "master_seed": self.master_seed,
            "workers": self.workers,
            "wall_time_s": self.wall_time_s,
            "n_failed": self.n_failed,
            "notes": self.notes,
            "task_seeds": self.task_seeds,
            "config": self.config,
            "summary": self.summary,
            "files": self.files,
        }


class _Emitter:
    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.written: list[Path] = []

    def csv(self, name: str, header: list[str], rows) -> Path:
        path = self.out_dir / name
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        path.write_text("\n".join(lines) + "\n")
        self.written.append(path)
        return path

    def json(self, name: str, payload: dict) -> Path:
        path = self.out_dir / name
        path.write_text(json.dumps(payload, indent=2, sort_keys=True,
                                   default=_json_default) + "\n")
        self.written.append(path)
        return path


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj)}")


def _build_drive(section: dict, sub, params):
    """Drive spec from its config mapping; tones may name a wavenumber."""
    kind = section.get("kind", "two_tone")
    omega = mode_frequencies(sub, params)

    def omega_of(key_omega, key_wavenumber, default_n):
        if key_omega in section:
            return float(section[key_omega])
        n = int(section.get(key_wavenumber, default_n))
        return float(omega[sub.columns_for(n)[0]])

    if kind == "two_tone":
        return TwoTone(a1=float(section.get("a1", 0.6)),
                       a2=float(section.get("a2", 0.30)),
                       f_drive=float(section.get("f_drive", 0.18)),
                       dphi2=float(section.get("dphi2", 0.0)))
    if kind == "pure_tone":
        return PureTone(omega=omega_of("omega", "wavenumber", 5),
                        phase=float(section.get("phase", 0.0)))
    if kind == "chirp":
        return Chirp(omega_start=omega_of("omega_start", "wavenumber_start", 1),
                     omega_end=omega_of("omega_end", "wavenumber_end", 12),
                     duration=float(section.get("duration", 16.0)))
    if kind == "gaussian_burst":
        return GaussianBurst(omega_carrier=omega_of("omega", "wavenumber", 8),
                             t_center=float(section.get("t_center", 8.0)),
                             sigma_env=float(section.get("sigma_env", 1.2)))
    if kind == "fm_tone":
        return FMTone(omega_carrier=omega_of("omega", "wavenumber", 8),
                      omega_mod=float(section.get("omega_mod", 0.4)),
                      depth=float(section.get("depth", 0.25)))
    if kind == "noise_only":
        return NoiseOnly()
    raise ConfigError(f"unknown drive kind {kind!r}")


def _run_dispersion(cfg: ExperimentConfig, em: _Emitter, manifest: RunManifest):
    sub = build_substrate(cfg.n_nodes)
    lin = cfg.regime()
    disp = cfg.raw.get("dispersion", {})
    duf = RegimeParams(gamma=lin.gamma if lin.gamma > 0 else 0.15,
                       omega0_sq=float(disp.get("duffing_omega0_sq", 1.0)),
                       alpha=0.0,
                       k_c=float(disp.get("duffing_k_c", 0.35)))
    w_lin = mode_frequencies(sub, lin)
    w_duf = mode_frequencies(sub, duf)
    rows = []
    for n in range(cfg.n_nodes // 2 + 1):
        col = sub.columns_for(n)[0]
        rows.append((n, sub.eigenvalues[col], w_lin[col], w_duf[col]))
    em.csv("dispersion.csv", ["n", "lambda_n", "omega_n_linear", "omega_n_duffing"],
           rows)

    shapes = [int(n) for n in disp.get("mode_shapes", [0, 1, 2, 4, 8])]
    header = ["j"] + [f"mode_{n}" for n in shapes]
    cols = [sub.columns_for(n)[0] for n in shapes]
    rows = [(j, *[sub.eigenbasis[j, c] for c in cols]) for j in range(cfg.n_nodes)]
    em.csv("modes.csv", header, rows)
    manifest.summary = {"n_nodes": cfg.n_nodes,
                        "omega_nyquist_linear": float(w_lin[sub.columns_for(cfg.n_nodes // 2)[0]])}


def _run_emit_drive(cfg: ExperimentConfig, em: _Emitter, manifest: RunManifest):
    sub = build_substrate(cfg.n_nodes)
    drive = _build_drive(cfg.drive_section(), sub, cfg.regime())
    integ = cfg.integrator_section()
    t_total = float(integ.get("t_total", 16.0))
    dt = float(integ.get("output_dt", 0.01))
    t = dt * np.arange(int(round(t_total / dt)) + 1)
    s = drive.evaluate(t)
    em.csv("drive.csv", ["t", "s"], zip(t, s))
    manifest.summary = {"kind": cfg.drive_section().get("kind", "two_tone"),
                        "n_samples": int(t.size)}


BATTERY_DRIVES = ("tone", "chirp", "burst", "fm")


def _battery_drive(name: str, sub, params, t_total: float):
    omega = mode_frequencies(sub, params)

    def w(n):
        return float(omega[sub.columns_for(n)[0]])

    if name == "tone":
        return PureTone(omega=w(5))
    if name == "chirp":
        return Chirp(omega_start=w(1), omega_end=w(12), duration=t_total)
    if name == "burst":
        return GaussianBurst(omega_carrier=w(8), t_center=8.0, sigma_env=1.2)
    if name == "fm":
        return FMTone(omega_carrier=w(8), omega_mod=0.4, depth=0.25)
    raise ConfigError(f"unknown battery drive {name!r}")


def _run_battery(cfg: ExperimentConfig, em: _Emitter, manifest: RunManifest):
    from scipy.signal import spectrogram

    sub = build_substrate(cfg.n_nodes)
    params = cfg.regime()
    integ = cfg.integrator_section()
    t_total = float(integ.get("t_total", 16.0))
    dt = float(integ.get("dt_fixed", 0.01))
    out_dt = float(integ.get("output_dt", dt))
    bat = cfg.raw.get("battery", {})
    window_s = float(bat.get("window_s", 4.0))
    chirp_window_s = float(bat.get("chirp_window_s", 1.0))
    hop_s = float(bat.get("hop_s", 0.05))
    half = cfg.n_nodes // 2

    for name in BATTERY_DRIVES:
        drive = _battery_drive(name, sub, params, t_total)
        icfg = IntegratorConfig(method="rk4", t_span=(0.0, t_total),
                                output_dt=out_dt, dt_fixed=dt)
        traj = integrate(mode_rhs_linear(sub, params, drive.evaluate, 0),
                         np.zeros(2 * cfg.n_nodes), icfg)
        amplitudes = traj.states[:, :cfg.n_nodes]
        env = hilbert_envelope(amplitudes.T)  # (N, T)
        rows = []
        for n in range(half + 1):
            cols = sub.columns_for(n)
            combined = np.sqrt(np.sum(env[cols] ** 2, axis=0))
            rows.extend((t, n, v) for t, v in zip(traj.times, combined))
        em.csv(f"battery_{name}_envelope.csv", ["t", "n", "value"], rows)

        s = drive.evaluate(traj.times)
        em.csv(f"battery_{name}_drive.csv", ["t", "s"], zip(traj.times, s))

        fs = 1.0 / out_dt
        nperseg = int(round((chirp_window_s if name == "chirp" else window_s) * fs))
        noverlap = nperseg - int(round(hop_s * fs))
        freqs, seg_t, sxx = spectrogram(s, fs=fs, window="hann", nperseg=nperseg,
                                        noverlap=noverlap, mode="magnitude")
        keep = freqs <= 3.0  # the ring's band ends at 2 Hz; keep headroom
        rows = [(tt, ff, sxx[i, j])
                for j, tt in enumerate(seg_t)
                for i, ff in enumerate(freqs[keep])]
        em.csv(f"battery_{name}_spectrogram.csv", ["t", "f", "value"], rows)
    manifest.summary = {"drives": list(BATTERY_DRIVES)}


def _run_classify(cfg: ExperimentConfig, em: _Emitter, manifest: RunManifest,
                  workers: int, master_seed: int):
    sub = build_substrate(cfg.n_nodes)
    params = cfg.regime()
    cls = cfg.classify_section()
    snr_grid = np.linspace(float(cls.get("snr_min_db", -24.0)),
                           float(cls.get("snr_max_db", 0.0)),
                           int(cls.get("n_snr", 11)))
    n_reps = int(cls.get("n_reps", 5))
    rows = run_snr_sweep(
        sub, params, snr_grid,
        n_train=int(cls.get("n_train", 200)),
        n_test=int(cls.get("n_test", 200)),
        n_reps=n_reps,
        master_seed=master_seed,
        lam=float(cls.get("lam", 1e-3)),
        t_half=float(cls.get("t_half", 8.0)),
        workers=workers,
    )
    em.csv("psychometric.csv", ["snr_db", "method", "mean_acc", "std_acc", "n_reps"],
           [(r.snr_db, r.method, r.mean_acc, r.std_acc, r.n_reps) for r in rows])
    for i in range(len(snr_grid)):
        for rep in range(n_reps):
            for split in ("train", "test"):
                manifest.task_seeds[f"snr{i}/rep{rep}/{split}"] = derive_seed(
                    master_seed, "classify", i, rep, split)
    acc = {(r.method, r.snr_db): r for r in rows}
    crossings = {}
    for method in ("reservoir", "fft"):
        accs = np.array([acc[(method, s)].mean_acc for s in snr_grid])
        crossings[method] = crossing_snr(snr_grid, accs)
    manifest.summary = {
        "crossing_90_db": crossings,
        "accuracies": {m: {f"{s:g}": acc[(m, s)].accuracies for s in snr_grid}
                       for m in ("reservoir", "fft")},
    }
    em.json("summary.json", manifest.summary)


def _run_shape_compare(cfg: ExperimentConfig, em: _Emitter, manifest: RunManifest):
    comp = cfg.raw.get("compare", {})
    dphi2_list = [float(p) for p in comp.get("dphi2", [0.0, np.pi / 2])]
    duff = cfg.duffing_settings()
    lin = DuffingRunSettings(
        params=RegimeParams(gamma=duff.params.gamma,
                            omega0_sq=duff.params.omega0_sq,
                            alpha=0.0, k_c=duff.params.k_c),
        n_nodes=duff.n_nodes, a1=duff.a1, a2=duff.a2, f_drive=duff.f_drive,
        method=str(comp.get("linear_method", "dp853")),
        rtol=float(comp.get("linear_rtol", 1e-11)),
        atol=float(comp.get("linear_atol", 1e-13)),
        t_total=duff.t_total, output_dt=duff.output_dt,
        drive_node=duff.drive_node, k_max=duff.k_max)

    rows = []
    energies = {}
    for regime, settings in (("linear", lin), ("duffing", duff)):
        for dphi2 in dphi2_list:
            e_k = simulate_harmonics(settings, dphi2)
            energies[(regime, dphi2)] = e_k
            rows.extend((regime, dphi2, k, e_k[k - 1])
                        for k in range(1, settings.k_max + 1))
    em.csv("shape_compare.csv", ["regime", "delta_phi2", "k", "e_k"], rows)

    two_periods = 2.0 / duff.f_drive
    t = duff.output_dt * np.arange(int(round(two_periods / duff.output_dt)) + 1)
    for dphi2 in dphi2_list:
        drive = TwoTone(duff.a1, duff.a2, duff.f_drive, dphi2)
        em.csv(f"drive_dphi2_{dphi2:.6f}.csv".replace("-", "m"),
               ["t", "s"], zip(t, drive.evaluate(t)))

    e5_ratio = None
    if len(dphi2_list) >= 2:
        a = energies[("duffing", dphi2_list[0])][4]
        b = energies[("duffing", dphi2_list[1])][4]
        e5_ratio = float(b / a)
    lin_e = np.array([energies[("linear", p)] for p in dphi2_list])
    manifest.summary = {
        "dphi2": dphi2_list,
        "e5_ratio": e5_ratio,
        "linear_e1_rel_spread": float(np.ptp(lin_e[:, 0]) / np.max(lin_e[:, 0])),
        "linear_e2_rel_spread": float(np.ptp(lin_e[:, 1]) / np.max(lin_e[:, 1])),
        "linear_high_harmonic_floor": float(np.max(lin_e[:, 2:]) / np.max(lin_e[:, 0])),
    }
    em.json("summary.json", manifest.summary)


def _phi_summary(est) -> dict:
    return {
        "phi0": est.phi0,
        "phi0_over_pi": None if est.phi0 is None else est.phi0 / np.pi,
        "raw_argmax": est.raw_argmax,
        "sym2_residual": est.sym2_residual,
        "sym1_ratio_b2_a2": est.sym1_ratio,
        "odd_even_ratio": est.odd_even_ratio,
        "flat": est.flat,
    }


def _run_phi0_sweep(cfg: ExperimentConfig, em: _Emitter, manifest: RunManifest,
                    workers: int):
    settings = cfg.duffing_settings()
    shape = cfg.shape_section()
    n_phi = int(shape.get("n_phi", 64))
    fine = int(shape.get("fine_grid", 2048))
    sweep = sweep_shape(settings, n_phi, workers=workers)
    est = reconstruct_and_peak(sweep, fine)

    header = ["delta_phi2"] + [f"e{k}" for k in range(1, settings.k_max + 1)]
    em.csv("phi0_sweep.csv", header,
           [(p, *sweep.energies[i]) for i, p in enumerate(sweep.delta_phi2)])
    em.csv("fourier_coeffs.csv", ["n", "a_n", "b_n"],
           [(n, est.a_n[n], est.b_n[n]) for n in range(len(est.a_n))])
    points = 2.0 * np.pi * np.arange(fine) / fine
    em.csv("reconstruction.csv", ["delta_phi2", "e5"],
           zip(points, trig_reconstruct(sweep.e5, points)))
    manifest.summary = _phi_summary(est) | {"n_phi": n_phi}
    em.json("summary.json", manifest.summary)


def _run_alpha_trajectory(cfg: ExperimentConfig, em: _Emitter,
                          manifest: RunManifest, workers: int):
    grid = cfg.raw.get("alpha_grid", {})
    alphas = np.linspace(float(grid.get("start", 0.1)),
                         float(grid.get("stop", 3.0)),
                         int(grid.get("count", 10)))
    shape = cfg.shape_section()
    results = alpha_trajectory(alphas, cfg.duffing_settings(),
                               n_phi=int(shape.get("n_phi", 32)),
                               workers=workers,
                               fine_grid=int(shape.get("fine_grid", 2048)))
    em.csv("alpha_phi0.csv", ["alpha", "phi0", "phi0_over_pi", "sym1_ratio_b2_a2"],
           [(a, e.phi0, None if e.phi0 is None else e.phi0 / np.pi, e.sym1_ratio)
            for a, e in results])
    phis = [e.phi0 for _, e in results if e.phi0 is not None]
    manifest.summary = {
        "alpha_start": float(alphas[0]),
        "alpha_stop": float(alphas[-1]),
        "phi0_first_over_pi": phis[0] / np.pi if phis else None,
        "phi0_last_over_pi": phis[-1] / np.pi if phis else None,
        "monotone_non_decreasing": bool(np.all(np.diff(phis) >= 0)) if phis else None,
    }
    em.json("summary.json", manifest.summary)


def _run_noise_robustness(cfg: ExperimentConfig, em: _Emitter,
                          manifest: RunManifest, workers: int, master_seed: int):
    settings = cfg.duffing_settings()
    shape = cfg.shape_section()
    noise = cfg.noise_section()
    snr_grid = tuple(float(s) for s in noise.get("snr_db", [30.0, 20.0, 10.0, 0.0]))
    n_seeds = int(noise.get("n_seeds", 8))
    result = noise_robustness(
        settings, snr_grid=snr_grid, n_seeds=n_seeds,
        n_phi=int(shape.get("n_phi", 32)),
        master_seed=master_seed,
        convention=str(noise.get("convention", "power")),
        cutoff=float(noise.get("cutoff", 5.0)),
        workers=workers,
        fine_grid=int(shape.get("fine_grid", 2048)),
    )
    em.csv("noise_phi0.csv",
           ["snr_db", "seed_index", "seed", "phi0", "phi0_over_pi", "failed"],
           [(c.snr_db, c.seed_index, c.seed, c.phi0,
             None if c.phi0 is None else c.phi0 / np.pi, c.failed)
            for c in result.cells])
    em.csv("noise_aggregate.csv", ["snr_db", "mean_phi0", "std_phi0", "n_ok"],
           [(s, *result.aggregates[s]) for s in sorted(result.aggregates, reverse=True)])
    for i in range(len(snr_grid)):
        for j in range(n_seeds):
            manifest.task_seeds[f"snr{i}/seed{j}"] = derive_seed(
                master_seed, "noise-robustness", i, j)
    manifest.n_failed = sum(1 for c in result.cells if c.failed)
    manifest.notes.append(
        "power-SNR reference sigma_s = sqrt(a1^2+a2^2)/2 (nominal two-tone "
        "scale, ~3 dB below the true waveform RMS)")
    manifest.summary = {
        "threshold_2sigma_db": result.threshold_db,
        "aggregates": {f"{s:g}": list(result.aggregates[s])
                       for s in sorted(result.aggregates, reverse=True)},
    }
    em.json("summary.json", manifest.summary)


def _run_selection_rule(cfg: ExperimentConfig, em: _Emitter, manifest: RunManifest):
    modes = [int(m) for m in cfg.raw.get("selection", {}).get("modes", [1, 2])]
    reachable = reachable_wavenumbers(cfg.n_nodes, modes)
    em.csv("reachable.csv", ["wavenumber"], [(n,) for n in reachable])
    manifest.summary = {"n_nodes": cfg.n_nodes, "drive_modes": modes,
                        "reachable": reachable}
    em.json("summary.json", manifest.summary)


def run(cfg: ExperimentConfig, out_dir: str | None = None,
        workers: int | None = None, master_seed: int | None = None) -> RunManifest:
    """Validate, execute, and inventory one experiment.

    Raises ConfigError (before writing anything) if validation finds
    errors; warnings are carried into the manifest notes.
    """
    diagnostics = validate(cfg)
    errors = [d for d in diagnostics if d.startswith("error:")]
    if errors:
        raise ConfigError("; ".join(errors))

    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    n_workers = int(workers if workers is not None else cfg.workers)
    seed = int(master_seed if master_seed is not None else cfg.master_seed)

    out.mkdir(parents=True, exist_ok=True)
    em = _Emitter(out)
    manifest = RunManifest(
        experiment=cfg.experiment, version=__version__,
        rng_algorithm=RNG_ALGORITHM, master_seed=seed, workers=n_workers,
        config=cfg.raw,
        notes=[d for d in diagnostics if d.startswith("warning:")],
    )

    t0 = time.time()
    if cfg.experiment == "dispersion":
        _run_dispersion(cfg, em, manifest)
    elif cfg.experiment == "emit-drive":
        _run_emit_drive(cfg, em, manifest)
    elif cfg.experiment == "battery":
        _run_battery(cfg, em, manifest)
    elif cfg.experiment == "classify":
        _run_classify(cfg, em, manifest, n_workers, seed)
    elif cfg.experiment == "shape-compare":
        _run_shape_compare(cfg, em, manifest)
    elif cfg.experiment == "phi0-sweep":
        _run_phi0_sweep(cfg, em, manifest, n_workers)
    elif cfg.experiment == "alpha-trajectory":
        _run_alpha_trajectory(cfg, em, manifest, n_workers)
    elif cfg.experiment == "noise-robustness":
        _run_noise_robustness(cfg, em, manifest, n_workers, seed)
    elif cfg.experiment == "selection-rule":
        _run_selection_rule(cfg, em, manifest)
    else:  # unreachable after validation
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    manifest.wall_time_s = time.time() - t0

    for path in em.written:
        data = path.read_bytes()
        manifest.files.append({
            "path": path.name,
            "sha256": hashlib.sha256(data).hexdigest(),
            "bytes": len(data),
        })
    (out / "manifest.json").write_text(
        json.dumps(manifest.to_dict(), indent=2, sort_keys=True,
                   default=_json_default) + "\n")
    return manifest
