import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from padiclab import __version__
from padiclab.cli import compile_expr, dispatch
from padiclab.jackson import jackson_integral
from padiclab.qcalc import d_q
from padiclab.waves import WaveSpec, f_b_map

GOLDEN = Path(__file__).parent / "golden"


def run_cli(args, capsys):
    code = dispatch(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_map_prints_value(capsys):
    code, out, _ = run_cli(["map", "--base", "3", "--b", "1", "--r", "10"], capsys)
    assert code == 0
    assert out.strip().splitlines()[-1] == "10"


def test_map_matches_library(capsys):
    code, out, _ = run_cli(["map", "--base", "3", "--b", "0.5", "--r", "10"], capsys)
    value = float(out.strip().splitlines()[-1])
    assert value == f_b_map(10, WaveSpec(base=3, b_frac=0.5))


def test_usage_error_exit_2():
    # argparse validation failures exit with status 2
    with pytest.raises(SystemExit) as err:
        dispatch(["wave", "--base", "1", "--b", "0.5"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        dispatch(["no-such-command"])
    assert err.value.code == 2


def test_runtime_error_exit_1(tmp_path, capsys):
    code, _, err = run_cli(["fit", "--input", str(tmp_path / "missing.csv")], capsys)
    assert code == 1
    assert "error:" in err


def test_wave_row_count(tmp_path, capsys):
    out_file = tmp_path / "fig1.csv"
    code, _, _ = run_cli(
        ["wave", "--base", "3", "--b", "0.5", "--n", "6", "--out", str(out_file)], capsys
    )
    assert code == 0
    lines = out_file.read_text().splitlines()
    data = [l for l in lines if not l.startswith("#")]
    assert len(data) == 1 + 729  # header + rows


def test_wave_golden_files_byte_stable(tmp_path, capsys):
    for b, name in (("0.5", "wave_p3_b05.csv"), ("1.5", "wave_p3_b15.csv")):
        first = tmp_path / f"a_{name}"
        second = tmp_path / f"b_{name}"
        for target in (first, second):
            code, _, _ = run_cli(
                ["wave", "--base", "3", "--b", b, "--n", "6", "--out", str(target)], capsys
            )
            assert code == 0
        assert first.read_bytes() == second.read_bytes()
        assert first.read_bytes() == (GOLDEN / name).read_bytes()


@pytest.mark.parametrize(
    "args,name",
    [
        (["pattern", "--kind", "impulse"], "pattern_impulse.csv"),
        (["pattern", "--kind", "zigzag"], "pattern_zigzag.csv"),
        (["pattern", "--kind", "flat"], "pattern_flat.csv"),
        (["pattern", "--kind", "diagonal"], "pattern_diagonal.csv"),
        (["pattern", "--kind", "triangle-converging", "--base", "3/2"],
         "pattern_triangle_converging.csv"),
        (["pattern", "--kind", "triangle-expanding", "--base", "3/2"],
         "pattern_triangle_expanding.csv"),
    ],
)
def test_pattern_golden(args, name, tmp_path, capsys):
    out_file = tmp_path / name
    code, _, _ = run_cli(args + ["--out", str(out_file)], capsys)
    assert code == 0
    assert out_file.read_bytes() == (GOLDEN / name).read_bytes()


def test_expand_and_norm_output(capsys):
    code, out, _ = run_cli(["expand", "--n", "26", "--base", "3"], capsys)
    assert code == 0
    assert "digits = 2,2,2" in out
    code, out, _ = run_cli(["norm", "--value", "1/9", "--p", "3"], capsys)
    assert code == 0
    assert "valuation = -2" in out
    assert "norm = 9" in out


def test_qderiv_matches_library(capsys):
    code, out, _ = run_cli(["qderiv", "--expr", "x**2", "--x", "1", "--q", "2"], capsys)
    assert code == 0
    value = float(out.strip().splitlines()[-1])
    assert value == d_q(lambda x: x**2, 1.0, 2.0)
    assert value == pytest.approx(2.5)


def test_jackson_matches_library(capsys):
    code, out, _ = run_cli(["jackson", "--expr", "x**2", "--q", "0.5"], capsys)
    assert code == 0
    line = [l for l in out.splitlines() if l.startswith("jackson_integral")][0]
    value = float(line.split("=")[1])
    assert value == jackson_integral(lambda x: x**2, 1.0, 0.5, 1e-12)


def test_qqseries_runs(capsys):
    code, out, _ = run_cli(
        ["qqseries", "--expr", "x**2", "--q", "0.9", "--b", "0.1", "--m-max", "4"], capsys
    )
    assert code == 0
    assert "qq_series =" in out


def test_algebra_check_output(capsys):
    code, out, _ = run_cli(["algebra-check", "--degree", "4", "--q", "0.5"], capsys)
    assert code == 0
    assert "ladder_plus_residual = 0" in out
    assert "paper_rhs_deviation" in out


def test_operators_output(capsys):
    code, out, _ = run_cli(["operators", "--sites", "1", "--u", "2", "--mu", "0.5"], capsys)
    assert code == 0
    assert "gamma5_identity_residual = 0" in out
    assert "fermionic (8)" in out and "bosonic (6)" in out
    spectrum_line = [l for l in out.splitlines() if l.startswith("spectrum")][0]
    values = sorted(float(v) for v in spectrum_line.split("=")[1].split(","))
    assert values == pytest.approx(sorted([0.0, -0.5, -0.5, 1.0]))


def test_scs_output(capsys):
    code, out, _ = run_cli(["scs", "--e", "0.3,0.7,0.4", "--h", "0.2,0.5,-0.3"], capsys)
    assert code == 0
    assert "structure_report = clean" in out
    assert "norm = 0.99999999999999989" in out or "norm = 1" in out


def test_simulate_deterministic_csv(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", "--agents", "20", "--steps", "200", "--seed", "42"]
    assert run_cli(args + ["--out", str(a)], capsys)[0] == 0
    assert run_cli(args + ["--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    header = [l for l in a.read_text().splitlines() if not l.startswith("#")][0]
    assert header == "step,n_buy,n_sell,n_hold,price"


def test_seed_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PADIC_LAB_SEED", "777")
    out_file = tmp_path / "r.csv"
    code, _, _ = run_cli(
        ["wave", "--base", "3", "--b", "0.5", "--random", "10", "--out", str(out_file)],
        capsys,
    )
    assert code == 0
    assert "seed=777" in out_file.read_text()


def test_config_file_presets(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"base": 3, "b": 0.5, "n": 4}))
    out_file = tmp_path / "w.csv"
    code, _, _ = run_cli(["--config", str(cfg), "wave", "--out", str(out_file)], capsys)
    assert code == 0
    data = [l for l in out_file.read_text().splitlines() if not l.startswith("#")]
    assert len(data) == 1 + 81  # n=4 from config

    kv = tmp_path / "cfg.txt"
    kv.write_text("base = 3\nb = 1.5\nn = 3\n")
    out2 = tmp_path / "w2.csv"
    # explicit flag overrides the config value
    code, _, _ = run_cli(["--config", str(kv), "wave", "--n", "2", "--out", str(out2)], capsys)
    assert code == 0
    data = [l for l in out2.read_text().splitlines() if not l.startswith("#")]
    assert len(data) == 1 + 9


def test_json_format(tmp_path, capsys):
    out_file = tmp_path / "w.json"
    code, _, _ = run_cli(
        ["wave", "--base", "3", "--b", "1", "--n", "2", "--format", "json",
         "--out", str(out_file)], capsys,
    )
    assert code == 0
    doc = json.loads(out_file.read_text())
    assert doc["meta"]["command"] == "wave"
    assert doc["value"] == [float(k) for k in range(9)]


def test_svg_and_plot_emission(tmp_path, capsys):
    svg = tmp_path / "w.svg"
    png = tmp_path / "w.png"
    code, _, _ = run_cli(
        ["wave", "--base", "3", "--b", "0.5", "--n", "4",
         "--out", str(tmp_path / "w.csv"), "--svg", str(svg), "--plot", str(png)],
        capsys,
    )
    assert code == 0
    text = svg.read_text()
    assert text.startswith("<svg") and "<polyline" in text
    assert png.stat().st_size > 1000


def test_fit_cli_end_to_end(tmp_path, capsys):
    from padiclab.waves import wave_series

    w = wave_series(WaveSpec(base=3, b_frac=0.5, n_digits=4))
    csv_path = tmp_path / "px.csv"
    with open(csv_path, "w") as fh:
        fh.write("date,close\n")
        for i, v in enumerate(3.0 * w.values + 1.0):
            fh.write(f"{i},{float(v)!r}\n")
    out_json = tmp_path / "fit.json"
    overlay = tmp_path / "overlay.csv"
    code, _, _ = run_cli(
        ["fit", "--input", str(csv_path), "--bases", "3", "--b-min", "0.4",
         "--b-max", "0.6", "--b-step", "0.05", "--t0-max", "4",
         "--out", str(out_json), "--overlay", str(overlay)],
        capsys,
    )
    assert code == 0
    doc = json.loads(out_json.read_text())
    assert doc["fit"]["b"] == pytest.approx(0.5)
    assert doc["fit"]["A"] == pytest.approx(3.0, rel=1e-9)
    assert doc["fit"]["C"] == pytest.approx(1.0, rel=1e-9)
    rows = [l for l in overlay.read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == "t,price,fitted"
    assert len(rows) == 1 + 81


def test_embed_cli(tmp_path, capsys):
    csv_path = tmp_path / "px.csv"
    csv_path.write_text("date,close\n0,1\n1,2\n2,3\n3,4\n")
    out_file = tmp_path / "emb.csv"
    code, _, _ = run_cli(
        ["embed", "--input", str(csv_path), "--m", "3", "--out", str(out_file)], capsys
    )
    assert code == 0
    rows = [l for l in out_file.read_text().splitlines() if not l.startswith("#")]
    assert rows == ["i,x0,x1,x2", "0,1,2,3", "1,2,3,4"]


def test_envelope_cli(tmp_path, capsys):
    out_file = tmp_path / "env.csv"
    code, _, _ = run_cli(
        ["envelope", "--samples", "50", "--scale", "20", "--out", str(out_file)], capsys
    )
    assert code == 0
    rows = [l for l in out_file.read_text().splitlines() if not l.startswith("#")]
    assert len(rows) == 1 + 50


def test_compile_expr_whitelist():
    fn = compile_expr("sin(x) + pi")
    assert fn(0.0) == pytest.approx(math.pi)
    with pytest.raises(ValueError):
        compile_expr("__import__('os')")
    with pytest.raises(ValueError):
        compile_expr("open('x')")
    with pytest.raises(ValueError):
        compile_expr("x +* 2")


def test_console_script_subprocess():
    # one real process round trip through the installed entry point
    env = dict(os.environ)
    proc = subprocess.run(
        [sys.executable, "-m", "padiclab.cli", "map", "--base", "3", "--b", "1", "--r", "10"],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip().splitlines()[-1] == "10"
    assert f"padiclab v{__version__}" in proc.stdout


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as err:
        dispatch(["--version"])
    assert err.value.code == 0
