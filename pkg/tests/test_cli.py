"""Command-line runs: output files, manifest and exit codes."""

import csv
import json
import math

import pytest

from zeeman_lasing import __version__
from zeeman_lasing.main import build_parser, main

SMALL = {"n_atoms": 1000, "integration": {"t_end_ms": 50.0}}


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(SMALL))
    return path


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_parser_requires_command():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args([])
    assert exc.value.code == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_dressed_writes_levels_and_manifest(tmp_path, config_path):
    out = tmp_path / "out"
    assert main(["dressed", "--peaks", "--max-n", "2", "--config", str(config_path), "--out", str(out)]) == 0
    rows = read_csv(out / "dressed.csv")
    assert rows[0][:9] == [
        "branch", "n", "shift_hz", "amp_D_re", "amp_D_im", "amp_B_re", "amp_B_im", "amp_G_re", "amp_G_im",
    ]
    assert len(rows) == 1 + 3 * 3
    assert [r[0] for r in rows[1:4]] == ["plus", "zero", "minus"]
    assert [r[1] for r in rows[1:]] == ["0"] * 3 + ["1"] * 3 + ["2"] * 3
    for r in rows[1:]:
        assert float(r[2]) == pytest.approx(float(r[9]) / (2 * math.pi) * 1e3)
        amps = [float(x) for x in r[3:9]]
        assert sum(a * a for a in amps) == pytest.approx(1.0)
    peaks = read_csv(out / "peaks.csv")
    assert peaks[0][:3] == ["offset_hz", "weight", "group"]
    assert len(peaks) == 1 + 3 + 9 * 2
    assert [r[2] for r in peaks[1:4]] == ["0"] * 3
    assert all(r[1] == "" for r in peaks[4:])

    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "dressed"
    assert manifest["version"] == __version__
    assert manifest["outputs"] == ["dressed.csv", "peaks.csv"]
    assert manifest["config"]["n_atoms"] == 1000


def test_floats_keep_full_precision(tmp_path, config_path):
    out = tmp_path / "out"
    main(["dressed", "--config", str(config_path), "--out", str(out)])
    shift = read_csv(out / "dressed.csv")[1][2]
    assert len(shift.replace("-", "").replace(".", "").split("e")[0]) >= 15


def test_transmit_without_drive_is_a_config_error(tmp_path, config_path, capsys):
    assert main(["transmit", "--config", str(config_path), "--out", str(tmp_path / "out")]) == 2
    assert "drive" in capsys.readouterr().err


def test_bad_config_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"n_atom": 10}')
    assert main(["dressed", "--config", str(path), "--out", str(tmp_path / "out")]) == 2
    assert "n_atoms" in capsys.readouterr().err


def test_bad_fgrid_exit_code(tmp_path, config_path):
    code = main(["spectrum", "--fgrid", "1:2", "--config", str(config_path), "--out", str(tmp_path / "out")])
    assert code == 2


def test_output_dir_from_environment(tmp_path, config_path, monkeypatch):
    monkeypatch.setenv("ZEEMAN_LASING_OUT", str(tmp_path / "env"))
    assert main(["dressed", "--config", str(config_path)]) == 0
    assert (tmp_path / "env" / "dressed.csv").exists()


@pytest.mark.slow
def test_lase(tmp_path, config_path):
    out = tmp_path / "out"
    assert main(["lase", "--config", str(config_path), "--out", str(out)]) == 0
    header, row = read_csv(out / "lase.csv")
    values = dict(zip(header, row))
    assert float(values["n"]) > 0
    assert values["converged"] == "1"
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["diagnostics"]["steady_state"]["converged"] is True
    assert "steady_state" in manifest["timings"]


@pytest.mark.slow
def test_transmit(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(dict(SMALL, drive={"amp0_sqrt_khz": 10.0})))
    out = tmp_path / "out"
    assert main(["transmit", "--log", "--config", str(path), "--out", str(out)]) == 0
    rows = read_csv(out / "transmission.csv")
    assert rows[0] == ["offset_rad_per_ms", "offset_hz", "intensity_sq", "magnitude", "phase_rad", "log10_intensity"]
    for r in rows[1:]:
        assert float(r[3]) ** 2 == pytest.approx(float(r[2]), rel=1e-9, abs=1e-300)
    assert read_csv(out / "transmission_peaks.csv")[0] == ["offset_rad_per_ms", "offset_hz", "intensity_sq"]
    assert len(rows) > 10
    assert (out / "transmission_peaks.csv").exists()


@pytest.mark.slow
def test_sweep_pump(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(dict(SMALL, sweep={"eta_over_gamma": [1.0, 5.0]})))
    out = tmp_path / "out"
    assert main(["sweep-pump", "--config", str(path), "--out", str(out)]) == 0
    rows = read_csv(out / "sweep.csv")
    assert rows[0][0] == "eta_over_gamma"
    assert [r[0] for r in rows[1:]] == ["1", "5"]
