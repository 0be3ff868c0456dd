import json
import subprocess
import sys
from pathlib import Path

import pytest

from ldgm_ldpc import cli
from ldgm_ldpc.config import RunConfig, load_config
from ldgm_ldpc.errors import ConfigurationError

CONFIGS = sorted((Path(__file__).parent.parent / "configs").glob("*.toml"))

SMALL = """
[ensemble]
n1 = 300
n2 = 300
lambda_G = {2 = 1.0}
rho_G = {2 = 1.0}
lambda_H = {3 = 1.0}
rho_H = {6 = 1.0}
seed = 4

[channel]
kind = "bec"
param = DELTA

[puncture]
p = P

[sweep]
deltas = [0.2, 0.5]
trials = 2
"""


def write_cfg(tmp_path, delta=0.4, p=0.5, extra=""):
    path = tmp_path / "c.toml"
    path.write_text(SMALL.replace("DELTA", str(delta)).replace("P", str(p)) + extra)
    return str(path)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_de_zero_delta_trace(tmp_path, capsys):
    cfg = write_cfg(tmp_path, delta=0.0, p=0.0)
    out = tmp_path / "trace.csv"
    assert run(["de", "--config", cfg, "-o", str(out)], capsys)[0] == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "l,x1,x2,x3,y1,y2,y3"
    assert len(lines) == 31
    assert all(float(ln.split(",")[2]) == 0.0 for ln in lines[1:])


def test_bounds_echo_schedule(capsys):
    code, out, _ = run(["bounds", "--epsilon", "0.01", "--kappa", "10"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["p"] == pytest.approx(0.9, abs=1e-15)
    assert {"rate_bound", "degree_bound", "effective_capacity", "prop1_bound"} <= set(data)


@pytest.mark.parametrize("path", CONFIGS, ids=lambda p: p.stem)
def test_shipped_configs_stability_verdicts_agree(path, capsys):
    code, out, _ = run(["stability", "--config", str(path)], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["closed_form_stable"] == data["jacobian_stable"]
    assert data["agree"]


@pytest.mark.parametrize("path", CONFIGS, ids=lambda p: p.stem)
def test_shipped_configs_load(path):
    cfg = load_config(path)
    cfg.ensemble_params()
    cfg.de_config()


def test_unknown_key_exit_2(tmp_path, capsys):
    cfg = write_cfg(tmp_path, extra="\n[de]\nbogus = 1\n")
    with pytest.raises(SystemExit) as exc:
        cli.main(["de", "--config", cfg])
    assert exc.value.code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ConfigurationError" and "bogus" in err["message"]


def test_bad_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["de", "--no-such-flag"])
    assert exc.value.code == 2
    assert json.loads(capsys.readouterr().err)["error"] == "usage"


def test_infeasible_schedule_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bounds", "--epsilon", "0.5", "--kappa", "10"])
    assert exc.value.code == 2


def test_degenerate_bound_exit_3(capsys):
    # p = 1 leaves g21 = 0, so log(1/g21) is undefined
    with pytest.raises(SystemExit) as exc:
        cli.main(["bounds", "--epsilon", "0.1", "--kappa", "0"])
    assert exc.value.code == 3
    assert len(capsys.readouterr().err.strip().splitlines()) == 1


def test_missing_config_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["de", "--config", "/nonexistent.toml"])
    assert exc.value.code == 2


@pytest.mark.parametrize("cmd", ["sample", "encode", "simulate", "de", "threshold", "stability",
                                 "bounds", "sweep", "compare"])
def test_every_subcommand_is_deterministic(cmd, tmp_path, capsys):
    cfg = write_cfg(tmp_path)
    outs = []
    for k in range(2):
        dest = tmp_path / f"{cmd}{k}.out"
        code, out, _ = run([cmd, "--config", cfg, "--seed", "9", "--precision", "1e-4",
                            "--iterations", "10", "-o", str(dest)], capsys)
        assert code == 0
        outs.append((out, dest.read_bytes() if dest.exists() else b""))
    assert outs[0] == outs[1]


def test_seed_changes_stochastic_output(tmp_path, capsys):
    cfg = write_cfg(tmp_path)
    a = run(["encode", "--config", cfg, "--seed", "1"], capsys)[1]
    b = run(["encode", "--config", cfg, "--seed", "2"], capsys)[1]
    assert a != b


def test_sweep_json_mirror(tmp_path, capsys):
    cfg = write_cfg(tmp_path)
    out = tmp_path / "sweep.csv"
    run(["sweep", "--config", cfg, "-o", str(out)], capsys)
    mirror = json.loads(out.with_suffix(".json").read_text())
    assert mirror["spec"]["ensemble"]["n1"] == 300
    assert len(mirror["rows"]) == 2
    assert out.read_text().splitlines()[0].startswith("delta,p,n,trials,ber_x1_mean")


def test_floats_have_17_digits(tmp_path, capsys):
    cfg = write_cfg(tmp_path)
    out = run(["stability", "--config", cfg, "--format", "json"], capsys)[1]
    assert '"delta": 0.40000000000000002' in out


def test_flag_overrides_config(tmp_path):
    cfg = load_config(write_cfg(tmp_path, delta=0.4))
    assert cfg.override("channel", param=0.1).channel_model().param == 0.1
    with pytest.raises(ConfigurationError):
        RunConfig.from_mapping({"unknown": {}})


def test_module_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "ldgm_ldpc.cli", "bounds", "--epsilon", "0.01",
                           "--kappa", "10"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["p"] == pytest.approx(0.9)
