"""Config loading, validation and unit handling."""

import json

import pytest

from zeeman_lasing.config import OUTPUT_ENV, Config, output_dir, parse_fgrid
from zeeman_lasing.core.data import DriveShape
from zeeman_lasing.core.errors import ConfigError, ParameterError
from zeeman_lasing.core.units import hz_to_angular, khz_to_angular, mhz_to_angular, ns_to_ms, zeeman_splitting


def write_config(tmp_path, data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data, indent=2))
    return path


def test_defaults():
    config = Config._from_dict({})
    p = config.physical_params()
    assert p.n_atoms == 250_000
    assert p.g == pytest.approx(khz_to_angular(7.5))
    assert p.kappa == pytest.approx(khz_to_angular(150.0))
    assert p.eta_plus == pytest.approx(5.0 * khz_to_angular(7.5))
    assert p.eta_minus == p.eta_plus
    assert p.delta_zeeman == pytest.approx(mhz_to_angular(0.1))
    assert p.omega_c_offset == 0.0
    assert config.drive_config() is None
    assert "g_khz" in config.defaults_used
    assert "sweep.*" in config.defaults_used


def test_load_explicit_path(tmp_path, capsys):
    path = write_config(tmp_path, {"n_atoms": 10, "eta_khz": 3.0, "b_field_gauss": 0.5})
    config = Config.load(path)
    assert config.config_path == path
    assert "Loading config from" in capsys.readouterr().out
    p = config.physical_params()
    assert p.n_atoms == 10
    assert p.eta_plus == pytest.approx(khz_to_angular(3.0))
    assert p.delta_zeeman == pytest.approx(zeeman_splitting(0.5))


def test_missing_explicit_path(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        Config.load(tmp_path / "nope.json")


def test_search_order_falls_back_to_defaults(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(Config, "get_user_config_dir", classmethod(lambda cls: tmp_path / "user"))
    config = Config.load()
    assert config.config_path is None
    assert "built-in defaults" in capsys.readouterr().out


def test_cwd_config_is_found(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(Config, "get_user_config_dir", classmethod(lambda cls: tmp_path / "user"))
    write_config(tmp_path, {"n_atoms": 7})
    assert Config.load().physics.n_atoms == 7


def test_invalid_json_reports_line(tmp_path):
    path = tmp_path / "config.json"
    path.write_text('{\n  "n_atoms": 10,\n  "g_khz": \n}\n')
    with pytest.raises(ConfigError) as exc:
        Config.load(path)
    assert exc.value.line == 4
    assert str(path) in str(exc.value)


def test_unknown_key_suggests(tmp_path):
    path = tmp_path / "config.json"
    path.write_text('{\n  "n_atoms": 10,\n  "kapa1_khz": 75\n}\n')
    with pytest.raises(ConfigError) as exc:
        Config.load(path)
    assert "kappa1_khz" in exc.value.suggestions
    assert exc.value.line == 3


def test_unit_suffix_mismatch():
    with pytest.raises(ConfigError, match="unit-suffix mismatch.*g_khz"):
        Config._from_dict({"g_hz": 7500.0})
    with pytest.raises(ConfigError, match="sigma_ns"):
        Config._from_dict({"drive": {"sigma_ms": 1e-5}})


@pytest.mark.parametrize("data", [
    {"eta_over_gamma": 1.0, "eta_khz": 2.0},
    {"delta_mhz": 0.1, "b_field_gauss": 1.0},
])
def test_mutually_exclusive_keys(data):
    with pytest.raises(ConfigError, match="mutually exclusive"):
        Config._from_dict(data)


@pytest.mark.parametrize("data,match", [
    ({"n_atoms": 0}, "n_atoms"),
    ({"kappa2_khz": -1.0}, "kappa2"),
    ({"integration": {"rtol": 0.5}}, "rtol"),
    ({"drive": {"shape": "square"}}, "shape"),
    ({"sweep": {"fgrid": "1:2"}}, "fgrid"),
])
def test_invalid_values_become_config_errors(data, match):
    with pytest.raises(ConfigError, match=match):
        Config._from_dict(data)


def test_section_must_be_object():
    with pytest.raises(ConfigError, match="'filter' must be an object"):
        Config._from_dict({"filter": 3})


def test_drive_block():
    config = Config._from_dict({"drive": {"amp0_sqrt_khz": 400.0, "detuning_khz": -10.0}})
    drive = config.drive_config()
    assert drive.shape == DriveShape.GAUSSIAN
    assert drive.amp0 == pytest.approx(400.0)
    assert drive.pulse_center == pytest.approx(ns_to_ms(264.1))
    assert drive.pulse_sigma == pytest.approx(ns_to_ms(26.4))
    assert drive.omega_d_offset == pytest.approx(khz_to_angular(-10.0))
    assert config.physical_params().drive is None
    assert config.physical_params(with_drive=True).drive == drive


def test_filter_overrides():
    config = Config._from_dict({"filter": {"chi_hz": 2.0}})
    p = config.physical_params()
    f = config.filter_params(p)
    assert f.chi == pytest.approx(hz_to_angular(2.0))
    assert f.beta == pytest.approx(f.chi / 10)
    assert config.has_filter_override
    assert config.filter_override(p) == f


def test_filter_without_overrides_is_left_to_the_emission_code():
    config = Config._from_dict({})
    assert not config.has_filter_override
    assert config.filter_override(config.physical_params()) is None


@pytest.mark.parametrize("beta_hz", [0.0, -1.0])
def test_filter_beta_must_be_positive(beta_hz):
    with pytest.raises(ConfigError, match="beta must be > 0"):
        Config._from_dict({"filter": {"beta_hz": beta_hz}})


def test_snapshot_reloads_to_same_parameters():
    config = Config._from_dict({"b_field_gauss": 0.2, "eta_khz": 4.0, "drive": {"shape": "constant"}})
    again = Config._from_dict(json.loads(json.dumps(config.to_dict())))
    assert again.physical_params(with_drive=True) == config.physical_params(with_drive=True)
    assert again.integration_config() == config.integration_config()


def test_parse_fgrid():
    lo, hi, n = parse_fgrid("-200:200:401")
    assert (lo, hi, n) == (pytest.approx(khz_to_angular(-200)), pytest.approx(khz_to_angular(200)), 401)
    for bad in ("1:2", "a:b:c", "2:1:10", "0:1:1"):
        with pytest.raises(ParameterError):
            parse_fgrid(bad)


def test_output_dir(tmp_path, monkeypatch):
    monkeypatch.delenv(OUTPUT_ENV, raising=False)
    monkeypatch.chdir(tmp_path)
    assert output_dir() == tmp_path / "out"
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path / "env"))
    assert output_dir() == tmp_path / "env"
    assert output_dir(tmp_path / "cli") == tmp_path / "cli"
