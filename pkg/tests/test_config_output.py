import json

import pytest

from vacuum_rc.config import KEYS, RunConfig, load_config, parse_config_text
from vacuum_rc.errors import ConfigError
from vacuum_rc.output import OutputRecord, format_float, parse_csv, parse_json


def test_keys_cover_documented_set():
    documented = {
        "h0_gev", "omega_d0", "omega_b0", "omega_vac0", "delta", "mass_gev", "a_start",
        "a_end", "n_samples", "n_traj", "n_steps", "dt", "seed", "out_path", "format",
    }
    assert documented <= set(KEYS)


def test_parse_with_comments():
    text = "# header\n\ndelta = 0.16   # upper bar\nn_traj=2000\nsweep_grid = 0.1, 0.2\n"
    values = parse_config_text(text)
    assert values == {"delta": 0.16, "n_traj": 2000, "sweep_grid": (0.1, 0.2)}


def test_unknown_key_reports_line():
    with pytest.raises(ConfigError, match=r"cfg:3: unknown key 'hubble'"):
        parse_config_text("delta = 0.1\n\nhubble = 3\n", "cfg")


@pytest.mark.parametrize("line", ["delta 0.1", "n_traj = many", "n_steps = 1.5"])
def test_malformed_lines(line):
    with pytest.raises(ConfigError, match=":1:"):
        parse_config_text(line + "\n", "cfg")


def test_integer_keys_accept_scientific():
    assert parse_config_text("n_traj = 1e4")["n_traj"] == 10_000


def test_flags_override_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("delta = 0.16\nmass_gev = 0.5\n")
    cfg = load_config(path, {"delta": "0.02"})
    assert cfg.delta == 0.02
    assert cfg.mass_gev == 0.5


def test_missing_file():
    with pytest.raises(ConfigError, match="cannot read"):
        load_config("/nonexistent/run.cfg")


def test_text_round_trip(tmp_path):
    cfg = RunConfig(delta=0.1 + 0.2, sweep_grid=(1e-3, 0.7), seed=99, format="json")
    path = tmp_path / "echo.cfg"
    path.write_text(cfg.to_text())
    assert load_config(path) == cfg


def test_bad_format():
    with pytest.raises(ConfigError):
        RunConfig(format="xml")


def test_format_float_round_trips():
    for x in (0.1, 1 / 3, 1.0601974787334548e-05, -1.3088657107017724e-91, 5e-324):
        text = format_float(x)
        assert float(text) == x
        mantissa = text.split("e")[0].lstrip("-").replace(".", "")
        assert len(mantissa) == 17


def test_csv_and_json_agree():
    rec = OutputRecord(
        metadata={"command": "x", "order_of_magnitude": True},
        columns=["a", "b"],
        rows=[[0.1, 1 / 3], [2.0, -7.5e-91]],
    )
    meta_c, cols_c, rows_c = parse_csv(rec.to_csv())
    meta_j, cols_j, rows_j = parse_json(rec.to_json())
    assert meta_c == meta_j == rec.metadata
    assert cols_c == cols_j == ["a", "b"]
    assert rows_c == rows_j == rec.rows
    assert rec.to_csv().splitlines()[1] == "a,b"
    json.loads(rec.to_json())
