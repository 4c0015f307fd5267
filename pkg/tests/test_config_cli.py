import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specfilt.blocks import shift_matrix_natural
from specfilt.cli import main
from specfilt.config import (
    CALIBRATED_CUTOFF,
    bundled_names,
    dump_config,
    load_config,
    parse_config,
    with_overrides,
)
from specfilt.exceptions import ConfigError

BUNDLED = [
    "bw_det", "bw_det_zero", "bw_rand", "bw_rand_zero", "ci_det",
    "ci_rand", "cii_det", "cii_rand", "lr_det", "lr_rand",
]


def small(**kw):
    data = {"name": "tiny", "family": "bw", "orders": [2, 3], "L": [32, 64]}
    data.update(kw)
    return data


def write(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_bundled_set():
    assert bundled_names() == BUNDLED


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_round_trip(name):
    cfg = load_config(name)
    text = dump_config(cfg)
    again = parse_config(json.loads(text))
    assert again == cfg
    assert dump_config(again) == text


def test_defaults():
    cfg = parse_config(small())
    assert cfg.T == 1.0
    assert cfg.signal.kind == "sin" and cfg.signal.omega == 10 * math.pi
    assert cfg.noise.sigma == 0.2 and len(cfg.noise.tones) == 3
    assert cfg.ripple == 0.1
    assert cfg.M == 10_000
    assert cfg.cutoff == CALIBRATED_CUTOFF
    assert parse_config(small(noise={"kind": "random"})).noise.sigma == 0.01


@settings(max_examples=40, deadline=None)
@given(
    family=st.sampled_from(["bw", "ci", "cii"]),
    orders=st.lists(st.integers(1, 8), min_size=1, max_size=4),
    Ls=st.lists(st.integers(1, 2048), min_size=1, max_size=4),
    ripple=st.floats(0.001, 2.0),
    cutoff=st.one_of(st.floats(0.1, 1e4), st.integers(1, 100).map(lambda k: {"pi": k})),
    noise=st.sampled_from([{"kind": "random", "sigma": 0.05}, {"kind": "none"}, {"kind": "deterministic"}]),
    seed=st.integers(0, 2**31),
    shift=st.sampled_from(["natural", "zero"]),
)
def test_round_trip_idempotent(family, orders, Ls, ripple, cutoff, noise, seed, shift):
    data = small(family=family, orders=orders, L=Ls, ripple=ripple, cutoff=cutoff,
                 noise=noise, seed=seed, shift_mode=shift)
    first = parse_config(data)
    text = dump_config(first)
    assert parse_config(json.loads(text)) == first
    assert dump_config(parse_config(json.loads(text))) == text


@pytest.mark.parametrize(
    "patch, field",
    [
        ({"family": "elliptic"}, "family"),
        ({"orders": []}, "orders"),
        ({"L": [0]}, "L.0"),
        ({"ripple": -1}, "ripple"),
        ({"cutoff": {"pi": -2}}, "cutoff"),
        ({"shift_mode": "sideways"}, "shift_mode"),
        ({"bogus": 1}, "bogus"),
        ({"noise": {"kind": "random", "tones": []}}, "noise.tones"),
        ({"family": "lr", "orders": [2, 3]}, "orders"),
    ],
)
def test_invalid_config_names_field(patch, field):
    with pytest.raises(ConfigError) as info:
        parse_config(small(**patch))
    assert info.value.field == field


def test_missing_required_field():
    data = small()
    del data["orders"]
    with pytest.raises(ConfigError) as info:
        parse_config(data)
    assert info.value.field == "orders"


def test_load_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config("no_such_table")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_overrides():
    cfg = with_overrides(load_config("bw_rand"), seed=3, shift_mode="zero", M=10)
    assert (cfg.seed, cfg.shift_mode.value, cfg.M) == (3, "zero", 10)


def test_cli_matrices_csv(tmp_path, capsys):
    out = tmp_path / "S.csv"
    assert main(["matrices", "--kind", "shift", "--L", "5", "--param", "0.1", "--out", str(out)]) == 0
    rows = out.read_text().strip().splitlines()
    assert len(rows) == 5
    assert all(len(r.split(",")) == 5 for r in rows)
    assert rows[0].split(",")[0] == "1.00000000000000000e+00"
    values = np.loadtxt(out, delimiter=",")
    assert np.array_equal(values, shift_matrix_natural(1.0, 5, 0.1).data)
    assert main(["matrices", "--kind", "shift"]) == 2


def test_cli_design(tmp_path, capsys):
    out = tmp_path / "poles.csv"
    assert main(["design", "--family", "ci", "--order", "3", "--cutoff-pi", "40", "--csv", str(out)]) == 0
    text = capsys.readouterr().out
    for key in ("gamma", "alpha", "beta", "lambda", "tau_phase", "tau_group", "poles"):
        assert key in text
    assert len(out.read_text().strip().splitlines()) == 4
    assert main(["design", "--family", "lr", "--order", "3"]) == 2


def test_cli_simulate(capsys):
    assert main(["simulate", "--config", "bw_det", "--order", "3", "--L", "1024"]) == 0
    assert "0.0244" in capsys.readouterr().out


def test_cli_experiment_layout(tmp_path, capsys):
    path = write(tmp_path, small(noise={"kind": "random"}, M=50))
    assert main(["experiment", "--config", path, "--out", str(tmp_path / "o")]) == 0
    table = (tmp_path / "o" / "tiny.csv").read_text().splitlines()
    assert table[0] == "n,L=32,L=64"
    cell = table[1].split(",")[1]
    mean, std = cell.split(" ")
    float(mean), float(std.strip("()"))
    long_rows = (tmp_path / "o" / "tiny_long.csv").read_text().splitlines()
    assert len(long_rows) == 1 + 4


def test_cli_experiment_deterministic_layout(tmp_path, capsys):
    cfg = load_config("bw_det")
    assert len(cfg.orders) == 5 and len(cfg.Ls) == 4
    path = write(tmp_path, small())
    assert main(["experiment", "--config", path]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "n,L=32,L=64"
    assert all(len(v) == 8 for v in out[1].split(",")[1:])


def test_cli_experiment_is_deterministic(tmp_path):
    path = write(tmp_path, small(noise={"kind": "random"}, M=300))
    for d in ("a", "b"):
        assert main(["experiment", "--config", path, "--out", str(tmp_path / d), "--seed", "11"]) == 0
    for name in ("tiny.csv", "tiny_long.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert main(["experiment", "--config", path, "--out", str(tmp_path / "c"), "--seed", "12"]) == 0
    assert (tmp_path / "a" / "tiny_long.csv").read_bytes() != (tmp_path / "c" / "tiny_long.csv").read_bytes()


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["experiment", "--config", write(tmp_path, small(family="lr"))]) == 2
    assert "orders" in capsys.readouterr().err
    slow = write(tmp_path, small(T=0.1, cutoff=1.0, orders=[6]), "slow.json")
    assert main(["simulate", "--config", slow]) == 3
    assert main(["calibrate", "--anchor", "0.1", "--L", "128"]) == 4
    assert main(["calibrate", "--anchor", "0.2421"]) == 2


def test_cli_calibrate(capsys):
    assert main(["calibrate"]) == 0
    out = capsys.readouterr().out
    assert out.count("tau=") == 4
    assert "consensus cutoff" in out
    spread = float(out.split("relative spread ")[1].split()[0])
    assert spread < 0.01


def test_cli_validate(tmp_path, capsys):
    out = tmp_path / "v.csv"
    assert main(["validate", "--config", "bw_det", "--order", "3", "--L", "128", "256", "--out", str(out)]) == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0].startswith("family,n,L,tau,l2_full")
    assert len(rows) == 3


def test_cli_render_and_emit(tmp_path):
    img = tmp_path / "fig.ppm"
    assert main(["render-poly", "--family", "bw", "--order", "3", "--min", "-2", "--max", "2",
                 "--px", "32", "--out", str(img)]) == 0
    assert img.read_bytes().startswith(b"P6\n32 32\n255\n")
    sig = tmp_path / "s.csv"
    assert main(["emit", "--config", "bw_det", "--order", "3", "--L", "128", "--grid", "21", "--out", str(sig)]) == 0
    lines = sig.read_text().splitlines()
    assert lines[0] == "t,u,g,x,x_star"
    assert len(lines) == 22


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "specfilt", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("matrices", "design", "simulate", "experiment", "validate", "calibrate", "render-poly", "emit"):
        assert sub in proc.stdout
