"""ODE integration: fixed-step RK4 and the two adaptive Dormand-Prince pairs.

``rk4`` is the classical 4-stage scheme, stepped on an exact uniform grid.
``dp54`` and ``dp853`` are the Dormand-Prince 5(4) and Hairer-Norsett-Wanner
8(5,3) embedded pairs as shipped by ``scipy.integrate.solve_ivp`` (methods
"RK45" and "DOP853"), including their dense-output interpolants, hybrid
atol + rtol*|y| error norm with RMS aggregation, and automatic initial step
selection. Output is always resampled onto a uniform grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "IntegratorConfig",
    "Trajectory",
    "IntegrationError",
    "integrate",
    "rk4_step",
]

METHODS = ("rk4", "dp54", "dp853")
_SCIPY_NAME = {"dp54": "RK45", "dp853": "DOP853"}

# new-RHS-evaluation count per attempted step (FSAL included) and per init
_EVALS_PER_STEP = {"RK45": 6, "DOP853": 12}


class IntegrationError(RuntimeError):
    """Integration aborted: step underflow or non-finite state."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Scheme selection plus the uniform output grid.

    ``dt_fixed`` applies to rk4 only; ``rtol``/``atol`` to the adaptive
    methods only. ``output_dt`` must tile ``t_span`` to within one sample.
    """

    method: str
    t_span: tuple[float, float]
    output_dt: float
    dt_fixed: float | None = None
    rtol: float | None = None
    atol: float | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        t0, t1 = self.t_span
        if not t1 > t0:
            raise ValueError("t_span must have t1 > t0")
        if self.output_dt <= 0:
            raise ValueError("output_dt must be positive")
        n = (t1 - t0) / self.output_dt
        if abs(n - round(n)) > 1e-9:
            raise ValueError("output_dt must divide the span length")
        if self.method == "rk4":
            if self.dt_fixed is None or self.dt_fixed <= 0:
                raise ValueError("rk4 requires dt_fixed > 0")
            sub = self.output_dt / self.dt_fixed
            if abs(sub - round(sub)) > 1e-9 or round(sub) < 1:
                raise ValueError("dt_fixed must divide output_dt")
        else:
            if self.rtol is None or self.atol is None:
                raise ValueError(f"{self.method} requires rtol and atol")
            if self.rtol <= 0 or self.atol <= 0:
                raise ValueError("rtol and atol must be positive")

    @property
    def n_outputs(self) -> int:
        t0, t1 = self.t_span
        return int(round((t1 - t0) / self.output_dt)) + 1

    def output_times(self) -> np.ndarray:
        t0, _ = self.t_span
        return t0 + self.output_dt * np.arange(self.n_outputs)


@dataclass
class Trajectory:
    """Sampled solution on a uniform time grid.

    ``states`` has one row per time, one column per state component.
    ``meta`` carries integrator statistics and provenance.
    """

    times: np.ndarray
    states: np.ndarray
    meta: dict = field(default_factory=dict)

    def positions(self, n: int) -> np.ndarray:
        """First ``n`` state components per sample (node/mode coordinates)."""
        return self.states[:, :n]


def rk4_step(f: Callable, t: float, y: np.ndarray, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step. ``y`` may have any array shape."""
    k1 = f(t, y)
    k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _integrate_rk4(f, y0, cfg: IntegratorConfig) -> Trajectory:
    t0, _ = cfg.t_span
    sub = int(round(cfg.output_dt / cfg.dt_fixed))
    n_out = cfg.n_outputs
    times = cfg.output_times()
    y = np.array(y0, dtype=float)
    states = np.empty((n_out, y.size))
    states[0] = y
    n_steps = 0
    for i in range(1, n_out):
        # step from the exact grid time to kill drift from repeated addition
        t_base = t0 + (i - 1) * cfg.output_dt
        for k in range(sub):
            y = rk4_step(f, t_base + k * cfg.dt_fixed, y, cfg.dt_fixed)
            n_steps += 1
        if not np.all(np.isfinite(y)):
            raise IntegrationError(f"non-finite state at t={times[i]:g}")
        states[i] = y
    return Trajectory(
        times=times,
        states=states,
        meta={"method": "rk4", "dt_fixed": cfg.dt_fixed, "n_steps": n_steps,
              "n_rejected": 0, "dense_output": "grid-aligned steps"},
    )


def _integrate_adaptive(f, y0, cfg: IntegratorConfig) -> Trajectory:
    name = _SCIPY_NAME[cfg.method]
    times = cfg.output_times()
    span = cfg.t_span[1] - cfg.t_span[0]
    sol = solve_ivp(
        f,
        cfg.t_span,
        np.asarray(y0, dtype=float),
        method=name,
        rtol=cfg.rtol,
        atol=cfg.atol,
        t_eval=times,
        dense_output=True,
    )
    if not sol.success:
        raise IntegrationError(f"{name} failed: {sol.message}")
    if not np.all(np.isfinite(sol.y)):
        raise IntegrationError(f"{name} produced non-finite state")
    n_accepted = len(sol.sol.ts) - 1
    steps = np.diff(sol.sol.ts)
    if steps.size and steps.min() < 1e-14 * span:
        raise IntegrationError(
            f"{name} step underflow: min step {steps.min():.3e} on span {span:g}"
        )
    n_rejected = max(0, round((sol.nfev - 2) / _EVALS_PER_STEP[name]) - n_accepted)
    return Trajectory(
        times=times,
        states=sol.y.T.copy(),
        meta={"method": cfg.method, "rtol": cfg.rtol, "atol": cfg.atol,
              "n_steps": n_accepted, "n_rejected": n_rejected, "n_fev": sol.nfev,
              "dense_output": "embedded interpolant"},
    )


def integrate(f: Callable, y0: np.ndarray, cfg: IntegratorConfig) -> Trajectory:
    """Integrate ``dy/dt = f(t, y)`` and sample on the uniform output grid.

    Deterministic: identical inputs give bit-identical trajectories.
    """
    if not np.all(np.isfinite(y0)):
        raise IntegrationError("initial state is not finite")
    if cfg.method == "rk4":
        return _integrate_rk4(f, y0, cfg)
    return _integrate_adaptive(f, y0, cfg)
