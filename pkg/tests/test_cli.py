import csv
import io
import json
from importlib import resources

import jsonschema
import pytest

from mirror_radiance import __version__
from mirror_radiance.cli import ConfigError, RunConfig, config_from_args, main

SCHEMA = json.loads(resources.files("mirror_radiance").joinpath("data/output.schema.json").read_text())


def run(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out.read_text() if out.exists() else None


def read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith(f"# mirror-radiance v{__version__} cmd=")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_power_table(tmp_path):
    code, text = run(tmp_path, "power", "--trajectory", "self-dual", "--v", "0.9",
                     "--t-range", "-5", "5", "--n", "1000")
    assert code == 0
    rows = read_csv(text)
    assert len(rows) == 1000
    assert list(rows[0]) == ["trajectory", "v", "t", "P_L", "P_F"]
    assert float(rows[0]["t"]) == -5.0


def test_energy_static_rows(tmp_path):
    code, text = run(tmp_path, "energy", "--v", "0")
    assert code == 0
    rows = read_csv(text)
    assert [r["trajectory"] for r in rows] == ["self-dual", "betak"]
    for r in rows:
        assert float(r["E_closed"]) == float(r["E_larmor"]) == float(r["E_feynman"]) == 0.0


def test_verify_betak_passes(tmp_path):
    code, text = run(tmp_path, "verify", "--trajectory", "betak", "--v", "0.9", "--kappa", "1")
    assert code == 0
    rows = read_csv(text)
    assert {r["check"] for r in rows} >= {"energy_triple_spread", "identity_residual_max"}
    assert all(r["passed"] == "1" for r in rows)


@pytest.mark.parametrize("args", [
    ["power", "--n", "3", "--v", "0.5", "0.9"],
    ["energy", "--v", "0.3", "0.6"],
    ["beta", "--n", "3"],
    ["spectrum", "--n", "3", "--trajectory", "betak"],
    ["distribution", "--n-theta", "3", "--n-phi", "3", "--omega", "1", "4"],
    ["particles", "--n", "3", "--trajectory", "self-dual", "--v", "0.5"],
    ["particles", "--totals", "--trajectory", "betak", "--v", "0.3", "--tol", "1e-5"],
    ["pitcher", "--n", "5"],
])
def test_json_output_validates_and_is_reproducible(tmp_path, args):
    code, text = run(tmp_path, *args, "--format", "json", name="a.json")
    assert code == 0
    doc = json.loads(text)
    jsonschema.validate(doc, SCHEMA)
    assert all(len(row) == len(doc["columns"]) for row in doc["rows"])
    _, again = run(tmp_path, *args, "--format", "json", name="b.json")
    assert again == text


def test_csv_byte_identical_and_parallel_matches_serial(tmp_path):
    args = ["spectrum", "--n", "6", "--v", "0.5"]
    _, a = run(tmp_path, *args, name="a.csv")
    _, b = run(tmp_path, *args, name="b.csv")
    _, c = run(tmp_path, *args, "--jobs", "2", name="c.csv")
    assert a == b == c
    assert "\r" not in a


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trajectory": "betak", "v": 0.7, "n": 4, "t-range": [-1, 1]}))
    c = config_from_args(["power", "--config", str(cfg), "--n", "7"])
    assert c.trajectory == "betak" and c.v == (0.7,) and c.t_range == (-1.0, 1.0)
    assert c.n == 7


def test_distribution_default_speed():
    assert config_from_args(["distribution"]).v == (0.95,)
    assert config_from_args(["power"]).v == (0.9,)


@pytest.mark.parametrize("args", [
    ["power", "--n", "1"],
    ["power", "--t-range", "2", "1"],
    ["power", "--v", "1.0"],
    ["spectrum", "--tol", "0"],
    ["energy", "--kappa", "-1"],
    ["pitcher", "--v", "0"],
])
def test_invalid_config_exit_2(tmp_path, args):
    assert main([*args, "--out", str(tmp_path / "x")]) == 2


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"speed": 0.5}))
    with pytest.raises(ConfigError):
        config_from_args(["power", "--config", str(cfg)])
    assert main(["power", "--config", str(tmp_path / "missing.json")]) == 2


def test_bad_flag_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["power", "--bogus"])
    assert info.value.code == 2


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(command="power", format="xml")
    with pytest.raises(ConfigError):
        RunConfig(command="render")


def test_verify_failure_exit_1(tmp_path, monkeypatch):
    import mirror_radiance.cli as cli

    monkeypatch.setattr(cli, "verify_identity", lambda *a, **k: 1.0)
    code, text = run(tmp_path, "verify", "--trajectory", "self-dual", "--v", "0")
    assert code == 1
    assert any(r["passed"] == "0" for r in read_csv(text))


def test_nonconvergence_exit_3(tmp_path, monkeypatch):
    import mirror_radiance.cli as cli
    from mirror_radiance.errors import ConvergenceError

    def boom(*a, **k):
        raise ConvergenceError("budget exhausted")

    monkeypatch.setattr(cli, "energy_spectrum", boom)
    assert main(["spectrum", "--n", "2", "--out", str(tmp_path / "x")]) == 3
