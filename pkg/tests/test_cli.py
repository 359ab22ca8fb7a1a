import json
import subprocess
import sys

import numpy as np
import pytest

from magnomech import lineshape, model, spectrum
from magnomech.harness import calibration, config, io
from magnomech.harness.cli import main
from magnomech.units import TWO_PI


FIELD_SWEEP = ("--set", "sweep.axis=bias_field", "--set", "sweep.start=0.2787",
               "--set", "sweep.stop=0.2827")


def _run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def _summary(tmp_path, command):
    return json.loads((tmp_path / f"{command}_summary.json").read_text())


class TestSpectrum:
    def test_window_matches_library(self, tmp_path):
        assert _run(tmp_path, "spectrum", "--set", "drive.power_dbm=0") == 0
        info, cols, rows = io.read_csv(tmp_path / "spectrum.csv")
        assert info["schema"] == "spectrum" and info["version"] == 1
        data = np.array(rows, float)
        # library result for the same configuration
        cfg = config.load_config(overrides=("drive.power_dbm=0",))
        p = config.system_params(cfg)
        _, d = model.triple_resonance_drive(p, "red", config.drive_power_watts(cfg))
        win = spectrum.mmit_window(p, d)
        s = _summary(tmp_path, "spectrum")
        assert s["window"]["fwhm_hz"] == pytest.approx(win.fwhm / TWO_PI, rel=1e-9)
        assert s["window"]["center_hz"] == pytest.approx(win.center / TWO_PI, rel=1e-12)
        # re-fitting the written table lands on the same window
        fit = lineshape.fit_lineshape(TWO_PI * data[:, 0], data[:, 4], win.center, win.fwhm / 2)
        assert fit.fwhm / TWO_PI == pytest.approx(s["window"]["fwhm_hz"], rel=1e-6)
        assert s["power_flag"] == "predicted"

    def test_broad_grid(self, tmp_path):
        assert _run(tmp_path, "spectrum", "--set", "probe.mode=broad",
                    "--set", "probe.points=201") == 0
        _, _, rows = io.read_csv(tmp_path / "spectrum.csv")
        assert len(rows) == 201
        assert "window" not in _summary(tmp_path, "spectrum")

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["spectrum", "--set", "probe.points=101", "--out", str(out)]) == 0
        assert (a / "spectrum.csv").read_bytes() == (b / "spectrum.csv").read_bytes()
        assert (a / "spectrum_summary.json").read_bytes() == (b / "spectrum_summary.json").read_bytes()

    def test_unstable_exit_code(self, tmp_path, capsys):
        assert _run(tmp_path, "spectrum", "--set", "drive.branch=blue",
                    "--set", "drive.power_dbm=20") == 2
        assert "InstabilityError" in capsys.readouterr().err


class TestErrors:
    def test_unknown_flag(self, tmp_path, capsys):
        assert _run(tmp_path, "spectrum", "--frobnicate") == 1
        assert "validation error" in capsys.readouterr().err

    def test_unknown_field(self, tmp_path, capsys):
        assert _run(tmp_path, "spectrum", "--set", "device.colour=3") == 1
        assert "device.colour" in capsys.readouterr().err

    def test_missing_fit_data(self, tmp_path, capsys):
        assert _run(tmp_path, "fit") == 1
        assert "fit.data" in capsys.readouterr().err

    def test_bad_config_file(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("[1, 2]")
        assert _run(tmp_path, "spectrum", "--config", str(path)) == 1


class TestCalibrate:
    def test_written_and_reused(self, tmp_path):
        assert _run(tmp_path, "calibrate") == 0
        cal = calibration.load(tmp_path / calibration.CALIBRATION_FILE)
        assert cal.anchor_cooperativity == 2.4
        assert _summary(tmp_path, "calibrate")["blue_threshold_dbm_nominal"] == pytest.approx(
            4.15, abs=0.05)
        assert _run(tmp_path, "stability") == 0
        s = _summary(tmp_path, "stability")
        assert s["power_flag"] == "calibrated"
        # 8 dBm on the red triple resonance reproduces the anchor
        assert s["cooperativity"] == pytest.approx(2.4, rel=1e-9)


class TestCommands:
    def test_sweep_field(self, tmp_path):
        assert _run(tmp_path, "sweep", *FIELD_SWEEP, "--set", "sweep.points=7") == 0
        info, cols, rows = io.read_csv(tmp_path / "sweep.csv")
        assert info["schema"] == "cooperativity_vs_field" and len(rows) == 7
        assert cols[:3] == ["field_t", "C_minus", "C_plus"]

    def test_sweep_power(self, tmp_path):
        assert _run(tmp_path, "sweep", "--set", "sweep.axis=drive_power", "--set", "sweep.start=-20",
                    "--set", "sweep.stop=0", "--set", "sweep.points=3") == 0
        info, _, rows = io.read_csv(tmp_path / "sweep.csv")
        assert info["schema"] == "window_vs_power"
        assert "blue_threshold" in _summary(tmp_path, "sweep")

    def test_stability_blue_threshold(self, tmp_path):
        assert _run(tmp_path, "stability", "--set", "drive.branch=blue",
                    "--set", "drive.power_dbm=-10") == 0
        s = _summary(tmp_path, "stability")
        assert s["stable"] and s["threshold_w"] > 0
        _, _, rows = io.read_csv(tmp_path / "stability.csv")
        assert len(rows) == 6

    def test_modes(self, tmp_path):
        assert _run(tmp_path, "modes") == 0
        s = _summary(tmp_path, "modes")
        assert s["flag"] == "calibrated"
        _, cols, rows = io.read_csv(tmp_path / "modes.csv")
        assert cols[-1] == "f_times_d_hz_m" and rows

    def test_fit_round_trip(self, tmp_path):
        field = tmp_path / "field"
        split = ("--set", "device.photon_magnon_coupling=1.2e7")
        assert main(["sweep", *FIELD_SWEEP, *split, "--set", "sweep.points=15",
                     "--out", str(field)]) == 0
        g_true = _summary(field, "sweep")["parameters"]["g_mb_hz"]
        assert _run(tmp_path, "fit", *split, "--set", "fit.power_dbm=8",
                    "--set", "device.magnon_phonon_coupling=1e-3",
                    "--set", f"fit.data={json.dumps(str(field / 'sweep.csv'))}") == 0
        s = _summary(tmp_path, "fit")
        assert s["fit"]["converged"]
        assert s["g_mb_hz"] == pytest.approx(g_true, rel=1e-3)

    def test_module_entry_point(self, tmp_path):
        out = subprocess.run([sys.executable, "-m", "magnomech", "modes", "--out", str(tmp_path)],
                             capture_output=True, text=True)
        assert out.returncode == 0, out.stderr
