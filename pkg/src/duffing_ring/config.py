"""Experiment configuration: YAML schema, presets, and validation.

One config file drives one experiment. Presets matching the production
protocols ship inside the package (F1 dispersion, F2 battery, F3
classification, F4 shape comparison, F5 shape-phase sweep, F5C cubic
coefficient trajectory, F6 noise robustness); a config file with the same
keys can override any of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .dynamics import RegimeParams
from .readout import steady_window
from .shape import DuffingRunSettings

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "load_config",
    "load_preset",
    "available_presets",
    "validate",
]

EXPERIMENTS = (
    "dispersion",
    "battery",
    "emit-drive",
    "classify",
    "shape-compare",
    "phi0-sweep",
    "alpha-trajectory",
    "noise-robustness",
    "selection-rule",
)

LINEAR_EXPERIMENTS = ("battery", "classify")
DUFFING_EXPERIMENTS = ("shape-compare", "phi0-sweep", "alpha-trajectory",
                       "noise-robustness")


class ConfigError(ValueError):
    """Configuration rejected; the message lists every diagnostic."""


@dataclass
class ExperimentConfig:
    """Parsed experiment description plus raw dict echo for the manifest."""

    experiment: str
    raw: dict = field(default_factory=dict)

    @property
    def out_dir(self) -> str:
        return self.raw.get("out_dir", "runs/out")

    @property
    def master_seed(self) -> int:
        return int(self.raw.get("master_seed", 0))

    @property
    def workers(self) -> int:
        return int(self.raw.get("workers", 1))

    @property
    def n_nodes(self) -> int:
        return int(self.raw.get("substrate", {}).get("n_nodes", 64))

    def regime(self) -> RegimeParams:
        r = self.raw.get("regime", {})
        return RegimeParams(
            gamma=float(r.get("gamma", 0.15)),
            omega0_sq=float(r.get("omega0_sq", 1.0)),
            alpha=float(r.get("alpha", 1.5)),
            k_c=float(r.get("k_c", 0.35)),
        )

    def integrator_section(self) -> dict:
        return dict(self.raw.get("integrator", {}))

    def drive_section(self) -> dict:
        return dict(self.raw.get("drive", {}))

    def shape_section(self) -> dict:
        return dict(self.raw.get("shape", {}))

    def noise_section(self) -> dict:
        return dict(self.raw.get("noise", {}))

    def classify_section(self) -> dict:
        return dict(self.raw.get("classify", {}))

    def duffing_settings(self, alpha: float | None = None) -> DuffingRunSettings:
        """Assemble the per-simulation settings for the Duffing experiments."""
        integ = self.integrator_section()
        drive = self.drive_section()
        params = self.regime()
        if alpha is not None:
            params = RegimeParams(gamma=params.gamma, omega0_sq=params.omega0_sq,
                                  alpha=alpha, k_c=params.k_c)
        return DuffingRunSettings(
            params=params,
            n_nodes=self.n_nodes,
            a1=float(drive.get("a1", 0.6)),
            a2=float(drive.get("a2", 0.30)),
            f_drive=float(drive.get("f_drive", 0.18)),
            method=str(integ.get("method", "dp853")),
            rtol=float(integ.get("rtol", 1e-10)),
            atol=float(integ.get("atol", 1e-12)),
            t_total=float(integ.get("t_total", 300.0)),
            output_dt=float(integ.get("output_dt", 0.05)),
            drive_node=int(self.raw.get("drive_node", 0)),
            k_max=int(self.shape_section().get("k_max", 6)),
        )


def load_config(path: str | Path) -> ExperimentConfig:
    """Read a YAML config file, failing on empty or malformed content."""
    text = Path(path).read_text()
    data = yaml.safe_load(text)
    if not isinstance(data, dict) or not data:
        raise ConfigError(f"{path}: config must be a non-empty mapping")
    experiment = data.get("experiment")
    if not isinstance(experiment, str):
        raise ConfigError(f"{path}: missing 'experiment' key")
    return ExperimentConfig(experiment=experiment, raw=data)


def available_presets() -> list[str]:
    root = resources.files("duffing_ring").joinpath("presets")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml"))


def load_preset(name: str) -> ExperimentConfig:
    root = resources.files("duffing_ring").joinpath("presets")
    path = root.joinpath(f"{name}.yaml")
    if not path.is_file():
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(available_presets())}"
        )
    data = yaml.safe_load(path.read_text())
    return ExperimentConfig(experiment=data["experiment"], raw=data)


def validate(cfg: ExperimentConfig) -> list[str]:
    """Cross-field checks; returns diagnostics prefixed error:/warning:."""
    out: list[str] = []
    if cfg.experiment not in EXPERIMENTS:
        out.append(f"error: unknown experiment {cfg.experiment!r}")
        return out

    n = cfg.n_nodes
    if n < 4 or n % 2 != 0:
        out.append(f"error: N must be even and >= 4, got {n}")

    try:
        params = cfg.regime()
    except ValueError as exc:
        out.append(f"error: regime: {exc}")
        params = None

    integ = cfg.integrator_section()
    method = integ.get("method", "dp853")
    if method not in ("rk4", "dp54", "dp853"):
        out.append(f"error: unknown integrator method {method!r}")

    if params is not None:
        if cfg.experiment in LINEAR_EXPERIMENTS:
            if params.alpha != 0.0:
                out.append("error: linear experiments require alpha = 0")
            if method != "rk4":
                out.append("error: linear experiments integrate decoupled modes "
                           "with fixed-step rk4")
        if cfg.experiment in DUFFING_EXPERIMENTS:
            if method == "rk4":
                out.append("error: Duffing experiments require an adaptive method "
                           "in node coordinates (dp54 or dp853)")
            if params.gamma <= 0:
                out.append("error: steady-state analyses require gamma > 0")

    if cfg.experiment in DUFFING_EXPERIMENTS:
        drive = cfg.drive_section()
        f_drive = float(drive.get("f_drive", 0.18))
        t_total = float(integ.get("t_total", 300.0))
        output_dt = float(integ.get("output_dt", 0.05))
        try:
            w = steady_window(t_total, f_drive, output_dt)
            if w.n_ss < 1:
                out.append("error: steady-state window shorter than one period")
        except ValueError as exc:
            out.append(f"error: steady-state window: {exc}")
        if cfg.experiment == "phi0-sweep":
            rtol = float(integ.get("rtol", 1e-10))
            if method != "dp853" or rtol > 1e-9:
                out.append("warning: the symmetry-residual acceptance bars "
                           "(max |E5(phi+pi)-E5(phi)| < 1e-4) need dp853 at "
                           "rtol <= 1e-10")

    noise = cfg.noise_section()
    if noise:
        cutoff = float(noise.get("cutoff", 5.0))
        grid_dt = float(integ.get("output_dt", 0.05))
        if cutoff >= 0.5 / grid_dt:
            out.append(f"error: noise cutoff {cutoff:g} must sit below the "
                       f"storage-grid Nyquist {0.5 / grid_dt:g}")
        conv = noise.get("convention", "power")
        if conv not in ("power", "amplitude"):
            out.append(f"error: unknown SNR convention {conv!r}")

    cls = cfg.classify_section()
    if cfg.experiment == "classify" and cls:
        for key in ("n_train", "n_test"):
            if int(cls.get(key, 200)) % 4 != 0:
                out.append(f"error: classify.{key} must be a multiple of 4 "
                           "(balanced classes)")

    if cfg.experiment == "alpha-trajectory":
        grid = cfg.raw.get("alpha_grid", {})
        if float(grid.get("start", 0.1)) <= 0:
            out.append("error: alpha grid must be positive")

    if cfg.experiment == "selection-rule":
        modes = cfg.raw.get("selection", {}).get("modes", [1, 2])
        if not modes or any(int(m) < 0 or int(m) >= n for m in modes):
            out.append(f"error: selection.modes must lie in [0, {n})")

    return out
