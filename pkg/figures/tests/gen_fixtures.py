#!/usr/bin/env python3
"""Regenerate the reduced-size fixture CSVs under tests/data/.

Each fixture is a real run of the simulation CLI with shrunk protocol
sizes (short horizons, few sweep points), so schemas match production
artifacts exactly. Run from this directory:

    python gen_fixtures.py
"""

import subprocess
import sys
import tempfile
from pathlib import Path

import yaml

DATA = Path(__file__).resolve().parent / "data"

CONFIGS = {
    "F1": {
        "experiment": "dispersion",
        "substrate": {"n_nodes": 32},
        "regime": {"gamma": 0.5, "omega0_sq": 0.0, "alpha": 0.0,
                   "k_c": 39.47841760435743},
        "dispersion": {"duffing_omega0_sq": 1.0, "duffing_k_c": 0.35,
                       "mode_shapes": [0, 1, 2, 4, 8]},
    },
    "F2": {
        "experiment": "battery",
        "substrate": {"n_nodes": 32},
        "regime": {"gamma": 0.5, "omega0_sq": 0.0, "alpha": 0.0,
                   "k_c": 39.47841760435743},
        "integrator": {"method": "rk4", "dt_fixed": 0.01, "output_dt": 0.02,
                       "t_total": 16.0},
        "battery": {"window_s": 2.0, "chirp_window_s": 1.0, "hop_s": 0.2},
    },
    "F3": {
        "experiment": "classify",
        "master_seed": 11,
        "substrate": {"n_nodes": 32},
        "regime": {"gamma": 0.5, "omega0_sq": 0.0, "alpha": 0.0,
                   "k_c": 39.47841760435743},
        "integrator": {"method": "rk4", "dt_fixed": 0.01, "output_dt": 0.01,
                       "t_total": 16.0},
        "classify": {"snr_min_db": -12.0, "snr_max_db": 0.0, "n_snr": 3,
                     "n_train": 16, "n_test": 16, "n_reps": 2},
    },
    "F4": {
        "experiment": "shape-compare",
        "substrate": {"n_nodes": 64},
        "regime": {"gamma": 0.15, "omega0_sq": 1.0, "alpha": 1.5, "k_c": 0.35},
        "drive": {"kind": "two_tone", "a1": 0.6, "a2": 0.30, "f_drive": 0.18},
        "integrator": {"method": "dp54", "rtol": 1.0e-6, "atol": 1.0e-8,
                       "t_total": 100.0, "output_dt": 0.05},
        "compare": {"dphi2": [0.0, 1.5707963267948966],
                    "linear_method": "dp54", "linear_rtol": 1.0e-8,
                    "linear_atol": 1.0e-10},
    },
    "F5": {
        "experiment": "phi0-sweep",
        "substrate": {"n_nodes": 64},
        "regime": {"gamma": 0.15, "omega0_sq": 1.0, "alpha": 1.5, "k_c": 0.35},
        "drive": {"kind": "two_tone", "a1": 0.6, "a2": 0.30, "f_drive": 0.18},
        "integrator": {"method": "dp54", "rtol": 1.0e-6, "atol": 1.0e-8,
                       "t_total": 100.0, "output_dt": 0.05},
        "shape": {"n_phi": 8, "fine_grid": 512},
    },
    "F5C": {
        "experiment": "alpha-trajectory",
        "substrate": {"n_nodes": 64},
        "regime": {"gamma": 0.15, "omega0_sq": 1.0, "alpha": 1.5, "k_c": 0.35},
        "drive": {"kind": "two_tone", "a1": 0.6, "a2": 0.30, "f_drive": 0.18},
        "integrator": {"method": "dp54", "rtol": 1.0e-6, "atol": 1.0e-8,
                       "t_total": 100.0, "output_dt": 0.05},
        "shape": {"n_phi": 4, "fine_grid": 512},
        "alpha_grid": {"start": 0.5, "stop": 2.5, "count": 3},
    },
    "F6": {
        "experiment": "noise-robustness",
        "master_seed": 11,
        "substrate": {"n_nodes": 64},
        "regime": {"gamma": 0.15, "omega0_sq": 1.0, "alpha": 1.5, "k_c": 0.35},
        "drive": {"kind": "two_tone", "a1": 0.6, "a2": 0.30, "f_drive": 0.18},
        "integrator": {"method": "dp54", "rtol": 1.0e-6, "atol": 1.0e-8,
                       "t_total": 100.0, "output_dt": 0.05},
        "shape": {"n_phi": 4, "fine_grid": 512},
        "noise": {"snr_db": [30.0, 10.0], "n_seeds": 2, "convention": "power",
                  "cutoff": 5.0},
    },
}


def main() -> int:
    for name, cfg in CONFIGS.items():
        out = DATA / name
        out.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile("w", suffix=".yaml", delete=False) as f:
            yaml.safe_dump(cfg, f)
            path = f.name
        cmd = ["duffing-ring", cfg["experiment"], "--config", path,
               "--out", str(out), "--workers", "2"]
        print(" ".join(cmd))
        subprocess.run(cmd, check=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
