import hashlib
import json
from pathlib import Path

import numpy as np
import pytest
import yaml

from duffing_ring.cli import main
from duffing_ring.config import (
    ConfigError,
    load_config,
    load_preset,
    available_presets,
    validate,
)
from duffing_ring.runner import run


def write_yaml(path: Path, payload: dict) -> Path:
    path.write_text(yaml.safe_dump(payload))
    return path


TINY_CLASSIFY = {
    "experiment": "classify",
    "master_seed": 11,
    "substrate": {"n_nodes": 32},
    "regime": {"gamma": 0.5, "omega0_sq": 0.0, "alpha": 0.0,
               "k_c": 39.47841760435743},
    "integrator": {"method": "rk4", "dt_fixed": 0.01, "output_dt": 0.01,
                   "t_total": 16.0},
    "classify": {"snr_min_db": -6.0, "snr_max_db": 0.0, "n_snr": 2,
                 "n_train": 16, "n_test": 16, "n_reps": 1},
}

TINY_SWEEP = {
    "experiment": "phi0-sweep",
    "master_seed": 3,
    "substrate": {"n_nodes": 64},
    "regime": {"gamma": 0.15, "omega0_sq": 1.0, "alpha": 1.5, "k_c": 0.35},
    "drive": {"kind": "two_tone", "a1": 0.6, "a2": 0.30, "f_drive": 0.18},
    "integrator": {"method": "dp54", "rtol": 1.0e-6, "atol": 1.0e-8,
                   "t_total": 100.0, "output_dt": 0.05},
    "shape": {"n_phi": 4, "fine_grid": 256},
}


class TestPresets:
    def test_all_presets_parse_and_validate(self):
        assert available_presets() == ["F1", "F2", "F3", "F4", "F5", "F5C", "F6"]
        for name in available_presets():
            cfg = load_preset(name)
            diags = validate(cfg)
            assert not [d for d in diags if d.startswith("error:")], (name, diags)

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            load_preset("F9")


class TestValidate:
    def test_odd_n_rejected(self, tmp_path):
        cfg = load_config(write_yaml(tmp_path / "c.yaml", {
            "experiment": "dispersion", "substrate": {"n_nodes": 33}}))
        diags = validate(cfg)
        assert any("must be even" in d for d in diags)

    def test_loose_phi0_sweep_warns(self, tmp_path):
        raw = dict(TINY_SWEEP)
        cfg = load_config(write_yaml(tmp_path / "c.yaml", raw))
        diags = validate(cfg)
        assert any(d.startswith("warning:") and "dp853" in d for d in diags)
        assert not any(d.startswith("error:") for d in diags)

    def test_window_arithmetic_valid(self, tmp_path):
        raw = dict(TINY_SWEEP)
        raw["integrator"] = dict(raw["integrator"], method="dp853",
                                 rtol=1.0e-10, atol=1.0e-12)
        cfg = load_config(write_yaml(tmp_path / "c.yaml", raw))
        assert validate(cfg) == []

    def test_linear_experiment_forces_alpha_zero(self, tmp_path):
        raw = json_round_trip(TINY_CLASSIFY)
        raw["regime"]["alpha"] = 1.0
        cfg = load_config(write_yaml(tmp_path / "c.yaml", raw))
        assert any("alpha = 0" in d for d in validate(cfg))

    def test_duffing_experiment_rejects_rk4(self, tmp_path):
        raw = json_round_trip(TINY_SWEEP)
        raw["integrator"] = {"method": "rk4", "dt_fixed": 0.01,
                             "output_dt": 0.05, "t_total": 100.0}
        cfg = load_config(write_yaml(tmp_path / "c.yaml", raw))
        assert any("adaptive" in d for d in validate(cfg))

    def test_noise_cutoff_above_nyquist(self, tmp_path):
        raw = json_round_trip(TINY_SWEEP)
        raw["experiment"] = "noise-robustness"
        raw["noise"] = {"snr_db": [30.0], "n_seeds": 1, "cutoff": 11.0}
        cfg = load_config(write_yaml(tmp_path / "c.yaml", raw))
        assert any("Nyquist" in d for d in validate(cfg))


def json_round_trip(d):
    return json.loads(json.dumps(d))


class TestCliBasics:
    def test_empty_config_exits_nonzero(self, tmp_path, capsys):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        out = tmp_path / "out"
        rc = main(["dispersion", "--config", str(path), "--out", str(out)])
        assert rc == 2
        assert not out.exists()  # no partial artifacts

    def test_malformed_config_exits_nonzero(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("no_experiment_key: 1\n")
        assert main(["dispersion", "--config", str(path)]) == 2

    def test_validate_subcommand(self, tmp_path, capsys):
        path = write_yaml(tmp_path / "c.yaml", {
            "experiment": "dispersion", "substrate": {"n_nodes": 33}})
        rc = main(["validate", "--config", str(path)])
        assert rc == 2
        assert "must be even" in capsys.readouterr().out

    def test_selection_rule_worked_example(self, tmp_path, capsys):
        path = write_yaml(tmp_path / "c.yaml", {
            "experiment": "selection-rule",
            "substrate": {"n_nodes": 64},
            "selection": {"modes": [1, 2]},
        })
        rc = main(["selection-rule", "--config", str(path),
                   "--out", str(tmp_path / "out")])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "0 1 2 3 4 5 6"

    def test_dispersion_csv_schema(self, tmp_path):
        rc = main(["dispersion", "--preset", "F1", "--out", str(tmp_path / "f1")])
        assert rc == 0
        lines = (tmp_path / "f1" / "dispersion.csv").read_text().splitlines()
        assert lines[0] == "n,lambda_n,omega_n_linear,omega_n_duffing"
        last = lines[-1].split(",")
        assert int(last[0]) == 16
        assert float(last[1]) == pytest.approx(4.0)
        assert float(last[2]) == pytest.approx(4 * np.pi, rel=1e-12)

    def test_emit_drive(self, tmp_path):
        path = write_yaml(tmp_path / "c.yaml", {
            "experiment": "emit-drive",
            "substrate": {"n_nodes": 64},
            "drive": {"kind": "two_tone", "a1": 0.6, "a2": 0.30,
                      "f_drive": 0.18, "dphi2": 0.0},
            "integrator": {"t_total": 10.0, "output_dt": 0.05},
        })
        rc = main(["emit-drive", "--config", str(path), "--out", str(tmp_path / "d")])
        assert rc == 0
        lines = (tmp_path / "d" / "drive.csv").read_text().splitlines()
        assert lines[0] == "t,s"
        assert float(lines[1].split(",")[1]) == pytest.approx(0.9)


class TestRunnerArtifacts:
    def test_manifest_inventory_and_determinism(self, tmp_path):
        cfg = load_config(write_yaml(tmp_path / "c.yaml", TINY_SWEEP))
        out1, out2 = tmp_path / "a", tmp_path / "b"
        run(cfg, out_dir=str(out1), workers=1)
        run(cfg, out_dir=str(out2), workers=2)
        manifest = json.loads((out1 / "manifest.json").read_text())
        names = {f["path"] for f in manifest["files"]}
        assert {"phi0_sweep.csv", "fourier_coeffs.csv", "reconstruction.csv",
                "summary.json"} <= names
        for entry in manifest["files"]:
            data = (out1 / entry["path"]).read_bytes()
            assert hashlib.sha256(data).hexdigest() == entry["sha256"]
            assert len(data) == entry["bytes"]
        # schedule independence: identical artifact bytes for 1 or 2 workers
        for name in names:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
        assert manifest["rng_algorithm"] == "PCG64"

    def test_classify_schedule_independent(self, tmp_path):
        cfg = load_config(write_yaml(tmp_path / "c.yaml", TINY_CLASSIFY))
        out1, out2 = tmp_path / "a", tmp_path / "b"
        run(cfg, out_dir=str(out1), workers=1)
        run(cfg, out_dir=str(out2), workers=2)
        assert (out1 / "psychometric.csv").read_bytes() == \
            (out2 / "psychometric.csv").read_bytes()
        lines = (out1 / "psychometric.csv").read_text().splitlines()
        assert lines[0] == "snr_db,method,mean_acc,std_acc,n_reps"
        assert len(lines) == 1 + 2 * 2  # two SNRs x two methods

    def test_seed_override_changes_outputs(self, tmp_path):
        cfg = load_config(write_yaml(tmp_path / "c.yaml", TINY_CLASSIFY))
        out1, out2 = tmp_path / "a", tmp_path / "b"
        m1 = run(cfg, out_dir=str(out1), master_seed=1)
        m2 = run(cfg, out_dir=str(out2), master_seed=2)
        assert m1.task_seeds != m2.task_seeds

    def test_battery_emits_csvs(self, tmp_path):
        cfg = load_preset("F2")
        manifest = run(cfg, out_dir=str(tmp_path / "f2"))
        names = {f["path"] for f in manifest.files}
        for drive in ("tone", "chirp", "burst", "fm"):
            assert f"battery_{drive}_envelope.csv" in names
            assert f"battery_{drive}_spectrogram.csv" in names
            assert f"battery_{drive}_drive.csv" in names
        env = (tmp_path / "f2" / "battery_tone_envelope.csv").read_text().splitlines()
        assert env[0] == "t,n,value"
        # the tone at wavenumber 5 concentrates late-time envelope there
        rows = [line.split(",") for line in env[1:]]
        late = [(int(n), float(v)) for t, n, v in rows if float(t) > 12.0]
        by_mode = {}
        for n, v in late:
            by_mode.setdefault(n, []).append(v)
        means = {n: np.mean(v) for n, v in by_mode.items()}
        assert max(means, key=means.get) == 5
