"""Config parsing, CLI commands, output formats, exit codes."""

import csv
import json
import math
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from franson_dwdm.cli import main
from franson_dwdm.config import RunConfig
from franson_dwdm.errors import ConfigError

BALANCED = """
[source]
pump_wavelength_nm = 770
usable_band_nm = 1541, 1579

[fiber]
model = smf-effective

[interferometers]
path_diff_b_m = 0.067
detuning_um = 0
phase_offset_rad = 0
calibration_wavelength_nm = 1540

[grid]
spacing_ghz = 100

[analysis]
threshold_phase_rad = 0.14
step_nm = 0.5

[output]
timestamp = false
"""

DETUNED = """
[source]
usable_band_nm = 1541, 1579

[interferometers]
detuning_um = -8.0
phase_offset_rad = auto

[optimize]
delta_min_um = -20
delta_max_um = 5
delta_step_um = 0.5

[simulation]
pairs = 50000
seed = 3

[output]
timestamp = false
"""


@pytest.fixture
def balanced_cfg(tmp_path):
    path = tmp_path / "balanced.ini"
    path.write_text(BALANCED)
    return str(path)


@pytest.fixture
def detuned_cfg(tmp_path):
    path = tmp_path / "detuned.ini"
    path.write_text(DETUNED)
    return str(path)


def read_csv(path):
    with open(path) as fh:
        rows = [r for r in csv.reader(line for line in fh
                                      if not line.startswith("#"))]
    return rows[0], rows[1:]


def test_ini_and_json_configs_agree(tmp_path):
    ini = tmp_path / "a.ini"
    ini.write_text(BALANCED)
    sections = {
        "source": {"pump_wavelength_nm": 770, "usable_band_nm": [1541, 1579]},
        "fiber": {"model": "smf-effective"},
        "interferometers": {"path_diff_b_m": 0.067, "detuning_um": 0,
                            "phase_offset_rad": 0,
                            "calibration_wavelength_nm": 1540},
        "grid": {"spacing_ghz": 100},
        "analysis": {"threshold_phase_rad": 0.14, "step_nm": 0.5},
        "output": {"timestamp": False},
    }
    jsn = tmp_path / "a.json"
    jsn.write_text(json.dumps(sections))
    a = RunConfig.from_file(ini)
    b = RunConfig.from_file(jsn)
    assert a.fiber == b.fiber
    assert a.source == b.source
    assert a.grid == b.grid
    assert a.interferometer() == b.interferometer()
    assert a.analysis == b.analysis


def test_unknown_key_rejected_by_name(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[source]\npump_nm = 770\n")
    with pytest.raises(ConfigError) as err:
        RunConfig.from_file(path)
    assert "pump_nm" in str(err.value)


def test_unknown_section_rejected(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[sources]\npump_wavelength_nm = 770\n")
    with pytest.raises(ConfigError) as err:
        RunConfig.from_file(path)
    assert "sources" in str(err.value)


def test_bad_value_names_key(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[grid]\nspacing_ghz = wide\n")
    with pytest.raises(ConfigError) as err:
        RunConfig.from_file(path)
    assert "spacing_ghz" in str(err.value)


def test_json_section_must_be_object(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"grid": 5}')
    with pytest.raises(ConfigError) as err:
        RunConfig.from_file(path)
    assert "grid" in str(err.value)


def test_invariants_checked_at_parse_time(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[grid]\nspacing_ghz = 100\npassband_ghz = 150\n")
    with pytest.raises(ConfigError):
        RunConfig.from_file(path)


def test_defaults_cover_missing_file_sections(tmp_path):
    path = tmp_path / "empty.ini"
    path.write_text("")
    cfg = RunConfig.from_file(path)
    assert cfg.fiber.name == "smf-effective"
    assert cfg.grid.spacing_ghz == 100.0
    assert cfg.simulation.eta_A == 0.20


def test_missing_config_exits_2(capsys):
    assert main(["plan", "--config", "/no/such/file.ini"]) == 2
    assert "config error" in capsys.readouterr().err


def test_plan_balanced_summary(balanced_cfg, tmp_path, capsys):
    out = tmp_path / "plan.csv"
    assert main(["plan", "--config", balanced_cfg, "--out", str(out)]) == 0
    summary = capsys.readouterr().out.strip()
    assert summary.startswith("passing_pairs=")
    count = int(summary.split("=")[1])
    assert 13 <= count <= 19
    header, rows = read_csv(out)
    assert header[0] == "index_A" and header[-1] == "passes"
    assert len(rows) == 47
    assert sum(r[-1] == "true" for r in rows) == count


def test_rerun_is_byte_identical(balanced_cfg, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["plan", "--config", balanced_cfg, "--out", str(a),
          "--no-header-timestamp"])
    main(["plan", "--config", balanced_cfg, "--out", str(b),
          "--no-header-timestamp"])
    assert a.read_bytes() == b.read_bytes()


def test_sweep_rows_internally_consistent(balanced_cfg, tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", balanced_cfg, "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["lambda_A_nm", "lambda_B_nm", "phi_rad", "qber",
                      "channel_index_A", "channel_index_B", "pass"]
    assert len(rows) == 77  # 1541..1579 at 0.5 nm steps
    for r in rows:
        phi, qber = float(r[2]), float(r[3])
        assert abs(qber - math.sin(phi / 2.0) ** 2) < 1e-9
        lam_a, lam_b = float(r[0]), float(r[1])
        assert abs(1.0 / 770.0 - 1.0 / lam_a - 1.0 / lam_b) < 1e-12


def test_sweep_svg_well_formed(balanced_cfg, tmp_path):
    svg = tmp_path / "sweep.svg"
    main(["sweep", "--config", balanced_cfg, "--svg", str(svg),
          "--out", str(tmp_path / "s.csv")])
    tree = ET.parse(svg)
    tags = {el.tag.split('}')[-1] for el in tree.iter()}
    assert "polyline" in tags and "rect" in tags


def test_json_format_payload(balanced_cfg, tmp_path):
    out = tmp_path / "plan.json"
    main(["plan", "--config", balanced_cfg, "--out", str(out),
          "--format", "json"])
    payload = json.loads(Path(out).read_text())
    assert payload["passing_pairs"] >= 13
    assert payload["columns"][0] == "index_A"
    assert len(payload["rows"]) == 47
    assert "meta" not in payload  # timestamp disabled in config


def test_optimize_cli(detuned_cfg, tmp_path, capsys):
    out = tmp_path / "opt.json"
    assert main(["optimize", "--config", detuned_cfg, "--out", str(out)]) == 0
    payload = json.loads(Path(out).read_text())
    assert 42 <= payload["pair_count"] <= 50
    assert abs(payload["best_delta_um"] - payload["closed_form_delta_um"]) <= 0.5
    assert payload["profile_columns"][0] == "lambda_A_nm"
    assert len(payload["profile"]) == 47
    assert "pair_count=" in capsys.readouterr().out


def test_simulate_cli_and_seed_override(detuned_cfg, tmp_path):
    a = tmp_path / "sim_a.csv"
    b = tmp_path / "sim_b.csv"
    c = tmp_path / "sim_c.csv"
    assert main(["simulate", "--config", detuned_cfg, "--out", str(a)]) == 0
    assert main(["simulate", "--config", detuned_cfg, "--out", str(b)]) == 0
    assert main(["simulate", "--config", detuned_cfg, "--out", str(c),
                 "--seed", "99"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()
    header, rows = read_csv(a)
    assert header[:4] == ["index_A", "index_B", "lambda_A_nm", "lambda_B_nm"]
    assert len(rows) == 47
    total_post = sum(int(r[4]) for r in rows)
    assert total_post > 0
    for r in rows:
        assert int(r[5]) + int(r[6]) == int(r[4])


def test_dispersion_cli(balanced_cfg, tmp_path):
    out = tmp_path / "disp.csv"
    assert main(["dispersion", "--config", balanced_cfg, "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header[0] == "lambda_nm" and header[-1] == "group_velocity_m_s"
    for r in rows[:5]:
        n, ng = float(r[1]), float(r[4])
        assert 1.4 < n < ng < 1.5


def test_numerical_error_exits_3(tmp_path, capsys):
    path = tmp_path / "bad_band.ini"
    path.write_text("[analysis]\nband_nm = 800, 900\n")
    assert main(["dispersion", "--config", str(path)]) == 3
    assert "numerical error" in capsys.readouterr().err


SHIPPED = Path(__file__).resolve().parent.parent / "configs"


def test_shipped_detuned_plan_covers_band(capsys):
    """The checked-in detuned recipe reproduces the broadband coverage."""
    assert main(["plan", "--config", str(SHIPPED / "detuned_100ghz.ini"),
                 "--out", "/dev/null"]) == 0
    count = int(capsys.readouterr().out.strip().splitlines()[-1].split("=")[1])
    assert 42 <= count <= 50


def test_shipped_json_twin_matches_ini(capsys):
    for name in ("detuned_100ghz.ini", "detuned_100ghz.json"):
        cfg = RunConfig.from_file(SHIPPED / name)
        assert cfg.detuning_m == pytest.approx(-8.0e-6)
        assert cfg.phi0_auto
    assert main(["plan", "--config", str(SHIPPED / "detuned_100ghz.json"),
                 "--out", "/dev/null"]) == 0
    count = int(capsys.readouterr().out.strip().splitlines()[-1].split("=")[1])
    assert 42 <= count <= 50


def test_custom_fiber_from_config(tmp_path):
    path = tmp_path / "custom.ini"
    path.write_text(
        "[fiber]\nname = my-glass\n"
        "b_coefficients = 0.6961663, 0.4079426, 0.8974794\n"
        "c_coefficients_um2 = 0.004679148, 0.01351206, 97.934003\n"
        "validity_nm = 1200, 1700\n")
    cfg = RunConfig.from_file(path)
    assert cfg.fiber.name == "my-glass"
    from franson_dwdm import refractive_index
    assert refractive_index(cfg.fiber, 1540.0) == pytest.approx(1.4441, abs=1e-3)
