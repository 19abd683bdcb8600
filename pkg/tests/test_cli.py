import json
import math

import pytest

from crow_sense import cli


def run(argv, capsys):
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    lines = text.strip().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def test_spectrum_golden(capsys):
    code, out, _ = run(["spectrum", "--omega-min", "7", "--omega-max", "9", "--steps", "3"], capsys)
    assert code == 0
    head, body = rows(out)
    assert head == ["omega", "j_ss", "j_so", "j_oo"]
    assert float(body[1][0]) == 8.0
    assert float(body[1][1]) == pytest.approx(16 * 2 / math.pi / 6, rel=1e-15)


def test_poles_table(capsys):
    code, out, _ = run(["poles", "--set", "delta_s=2.4", "--sheet", "one"], capsys)
    assert code == 0
    head, body = rows(out)
    assert head == ["param", "re_omega_r", "im_omega_r", "sheet", "is_bound"]
    assert [float(r[1]) for r in body] == pytest.approx([-0.0051924, 0.9303089, 14.0085686], abs=1e-6)
    assert {r[3] for r in body} == {"ONE"} and {r[4] for r in body} == {"1"}


def test_poles_sweep_parallel_matches_serial(capsys):
    argv = ["poles", "--sweep", "delta_s=2:3:3", "--sheet", "one"]
    _, serial, _ = run(argv, capsys)
    _, parallel, _ = run(argv + ["--jobs", "2"], capsys)
    assert serial == parallel
    assert {r[0] for r in rows(serial)[1]} == {"2", "2.5", "3"}


def test_simulate(capsys):
    code, out, _ = run(["simulate", "--t-end", "1", "--grid", "3", "--green"], capsys)
    assert code == 0
    head, body = rows(out)
    assert head == ["t", "re_alpha_s", "im_alpha_s", "re_alpha_o", "im_alpha_o"]
    assert [float(x) for x in body[0]] == [0, 0, 0, 1, 0]


def test_sensitivity_files_and_reruns(tmp_path, capsys):
    out = tmp_path / "s.csv"
    argv = ["sensitivity", "--set", "delta_s=2.4", "--temperature-si", "0", "--steps", "11", "--out", str(out)]
    assert run(argv, capsys)[0] == 0
    first = out.read_bytes()
    meta = json.loads((tmp_path / "s.csv.json").read_text())
    assert meta["params"]["delta_s"] == 2.4 and meta["params"]["temperature_si"] == 0
    assert len(meta["poles"]) == 32
    assert meta["zero_point_line_si"] == pytest.approx(2.15366e-24, rel=1e-5)
    head, body = rows(first.decode())
    assert head == ["omega", "s_add", "f_s_si", "thermal", "shot", "cav_o", "cav_s", "reservoir"]
    assert len(body) == 11
    assert run(argv, capsys)[0] == 0
    assert out.read_bytes() == first


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("# wide band\nxi_w = 12\n")
    code, out, _ = run(["poles", "--config", str(cfg), "--sheet", "one"], capsys)
    assert code == 0 and rows(out)[1] == []


def test_selfcheck(capsys):
    code, out, _ = run(["selfcheck"], capsys)
    assert code == 0
    assert out.count("PASS") >= 10 and "FAIL" not in out


@pytest.mark.parametrize("argv", [["poles", "--set", "bogus=1"],
                                  ["poles", "--frobnicate"],
                                  ["poles", "--sweep", "delta_s=3:2:5"],
                                  ["spectrum", "--set", "xi_w=0"],
                                  ["sensitivity", "--omega-min", "-1"],
                                  ["nonsense"]])
def test_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert err


def test_unknown_key_is_named(capsys):
    _, _, err = run(["spectrum", "--set", "bogus=1"], capsys)
    assert "bogus" in err
    _, _, err = run(["spectrum", "--frobnicate"], capsys)
    assert "--frobnicate" in err


def test_domain_error_exit(capsys):
    code, _, err = run(["simulate", "--t-end", "1", "--n-chain", "5"], capsys)
    assert code == 1
    assert "DomainError" in err
