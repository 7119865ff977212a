"""End-to-end command line behavior, run in process through entry()."""

import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from ordrisk.cli import RunConfig, build_parser, entry, parse_marginal
from ordrisk.dist import Empirical, Normal, Pareto, Uniform
from ordrisk.errors import DomainError


def run(*argv):
    return entry(list(argv))


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# ---------------------------------------------------------------------------
# marginal specs and config


def test_parse_marginal_kinds(tmp_path):
    assert isinstance(parse_marginal("pareto:1,1"), Pareto)
    assert isinstance(parse_marginal("uniform:0,2"), Uniform)
    assert isinstance(parse_marginal("normal:0,1"), Normal)
    p = tmp_path / "obs.csv"
    p.write_text("value\n1\n2\n3\n")
    d = parse_marginal(f"csv:{p}")
    assert isinstance(d, Empirical)
    assert d.values.size == 3


@pytest.mark.parametrize(
    "spec",
    ["pareto", "pareto:1", "pareto:1,1,1", "pareto:a,b", "cauchy:0,1"],
)
def test_parse_marginal_rejects(spec):
    with pytest.raises(DomainError):
        parse_marginal(spec)


def test_config_validation():
    ok = RunConfig(p_from=0.9, p_to=0.99, p_step=0.01)
    ok.validate()
    for kw in [
        dict(p_from=0.0),
        dict(p_from=0.95, p_to=0.9),
        dict(p_step=0.0),
        dict(grid_n=99),
        dict(trunc=0.4),
        dict(trunc=1.0),
        dict(q=1.5),
        dict(replicates=0),
        dict(size=0),
        dict(t_step=-1.0),
        dict(max_violation=-0.1),
    ]:
        with pytest.raises(DomainError):
            RunConfig(**kw).validate()


def test_default_level_grid():
    levels = RunConfig().levels()
    assert levels.size == 20
    assert levels[0] == 0.900 and levels[-1] == 0.995


def test_threshold_grid():
    cfg = RunConfig(t_from=5.0, t_to=8.0, t_step=1.5)
    assert np.allclose(cfg.thresholds(), [5.0, 6.5, 8.0])
    with pytest.raises(DomainError):
        RunConfig().thresholds()
    with pytest.raises(DomainError):
        RunConfig(t_from=8.0, t_to=5.0, t_step=1.0).thresholds()


def test_parser_rejects_bad_usage():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["bounds"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        build_parser().parse_args(["frobnicate"])


# ---------------------------------------------------------------------------
# selftest


def test_selftest_passes(capsys):
    assert run("selftest") == 0
    out = capsys.readouterr().out
    assert "all 6 checks passed" in out
    assert out.count("pass") >= 6


def test_selftest_forced_failure(capsys):
    assert run("selftest", "--perturb", "1.0") == 4
    captured = capsys.readouterr()
    assert "FAIL" in captured.out
    assert "1 of 6 checks failed" in captured.err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ordrisk", "selftest"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr


# ---------------------------------------------------------------------------
# bounds


BOUNDS_ARGS = [
    "bounds",
    "--margF",
    "uniform:0,100",
    "--margG",
    "uniform:0,120",
    "--p-from",
    "0.9",
    "--p-to",
    "0.95",
    "--p-step",
    "0.01",
    "--grid-n",
    "2000",
]


def test_bounds_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    assert run(*BOUNDS_ARGS, "--out", str(out)) == 0
    assert "order check: max violation" in capsys.readouterr().out

    rows = read_rows(out / "curve.csv")
    assert rows[0] == ["p", "L", "Lo", "Uo", "U", "R"]
    assert len(rows) == 7
    for row in rows[1:]:
        p, l, lo, uo, u, r = map(float, row)
        assert l <= lo <= uo <= u
        assert 0.0 <= r <= 1.0

    crows = read_rows(out / "couplings.csv")
    assert crows[0] == ["p", "var_dl", "var_ct"]
    assert len(crows) == 7

    reports = json.loads((out / "reports.json").read_text())
    assert len(reports) == 6
    assert reports[0]["measure"] == "var"
    assert reports[0]["grid_n"] == 2000


def test_bounds_rerun_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(*BOUNDS_ARGS, "--out", str(a)) == 0
    assert run(*BOUNDS_ARGS, "--out", str(b)) == 0
    for name in ("curve.csv", "couplings.csv", "reports.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_bounds_rvar_requires_q(capsys):
    args = [a for a in BOUNDS_ARGS] + ["--measure", "rvar", "--out", "/tmp"]
    assert run(*args) == 2
    assert "requires --q" in capsys.readouterr().err
    assert run(*args, "--q", "0.93") == 2  # q below top of grid


def test_bounds_rvar_runs(tmp_path):
    assert (
        run(*BOUNDS_ARGS, "--measure", "rvar", "--q", "0.99", "--out", str(tmp_path))
        == 0
    )
    reports = json.loads((tmp_path / "reports.json").read_text())
    assert reports[0]["measure"] == "rvar"
    assert reports[0]["q"] == 0.99


def test_bounds_order_gate(tmp_path, capsys):
    rng = np.random.default_rng(1)
    lo = tmp_path / "lo.csv"
    hi = tmp_path / "hi.csv"
    lo.write_text("value\n" + "\n".join(f"{v:.9f}" for v in rng.uniform(0, 1, 300)))
    hi.write_text(
        "value\n" + "\n".join(f"{v:.9f}" for v in rng.uniform(0.3, 1.3, 300))
    )
    args = [
        "bounds",
        "--margF",
        f"csv:{hi}",
        "--margG",
        f"csv:{lo}",
        "--p-from",
        "0.9",
        "--p-to",
        "0.9",
        "--grid-n",
        "1000",
        "--out",
        str(tmp_path / "o"),
    ]
    assert run(*args) == 2
    assert "--project repairs" in capsys.readouterr().err
    assert run(*args, "--project") == 0


def test_missing_csv_is_io_error(tmp_path, capsys):
    args = [
        "bounds",
        "--margF",
        f"csv:{tmp_path}/absent.csv",
        "--margG",
        "uniform:0,1",
        "--out",
        str(tmp_path),
    ]
    assert run(*args) == 3
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# probbounds


def test_probbounds_outputs(tmp_path):
    out = tmp_path / "pb"
    rc = run(
        "probbounds",
        "--margF",
        "pareto:1,1",
        "--margG",
        "pareto:2,1",
        "--t-from",
        "5",
        "--t-to",
        "8",
        "--t-step",
        "1.5",
        "--out",
        str(out),
    )
    assert rc == 0
    rows = read_rows(out / "probbounds.csv")
    assert rows[0] == ["t", "m", "mo", "Mo", "M", "prob_dl", "prob_ct"]
    assert len(rows) == 4
    for row in rows[1:]:
        t, m, mo, big_mo, big_m, p_dl, p_ct = map(float, row)
        assert 0.0 <= m <= mo <= big_mo <= big_m <= 1.0
        assert mo - 1e-6 <= p_dl <= big_mo + 1e-6
    last = dict(zip(rows[0], map(float, rows[3])))
    assert last["t"] == 8.0
    assert abs(last["mo"] - 0.5) < 2e-3
    assert abs(last["Mo"] - 5.0 / 7.0) < 2e-3


def test_probbounds_bad_grid(capsys):
    rc = run(
        "probbounds",
        "--margF",
        "pareto:1,1",
        "--margG",
        "pareto:2,1",
        "--t-from",
        "8",
        "--t-to",
        "5",
        "--t-step",
        "1",
    )
    assert rc == 2
    assert "t_from <= t_to" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# sample


def test_sample_comonotone(tmp_path):
    out = tmp_path / "s"
    rc = run(
        "sample",
        "--margF",
        "uniform:0,1",
        "--margG",
        "uniform:0,2",
        "--kind",
        "comonotone",
        "--size",
        "300",
        "--seed",
        "1",
        "--out",
        str(out),
    )
    assert rc == 0
    rows = read_rows(out / "samples.csv")
    assert rows[0] == ["x", "y"]
    data = np.array([[float(r[0]), float(r[1])] for r in rows[1:]])
    assert data.shape[0] == 300
    order = np.argsort(data[:, 0])
    assert np.all(np.diff(data[order, 1]) >= -1e-12)
    meta = json.loads((out / "samples.json").read_text())
    assert meta["kind"] == "comonotone"
    assert meta["seed"] == 1
    assert meta["size"] == 300


def test_sample_countermonotone_constant_sum(tmp_path):
    out = tmp_path / "s"
    rc = run(
        "sample",
        "--margF",
        "uniform:0,1",
        "--margG",
        "uniform:0,1",
        "--kind",
        "countermonotone",
        "--size",
        "200",
        "--seed",
        "2",
        "--out",
        str(out),
    )
    assert rc == 0
    rows = read_rows(out / "samples.csv")
    sums = np.array([float(r[0]) + float(r[1]) for r in rows[1:]])
    assert np.allclose(sums, 1.0, atol=1e-9)


def test_sample_dl_directed_and_deterministic(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    args = [
        "sample",
        "--margF",
        "pareto:1,1",
        "--margG",
        "pareto:2,1",
        "--kind",
        "dl",
        "--size",
        "500",
        "--seed",
        "9",
        "--grid-n",
        "2000",
    ]
    assert run(*args, "--out", str(out1)) == 0
    assert run(*args, "--out", str(out2)) == 0
    assert (out1 / "samples.csv").read_bytes() == (out2 / "samples.csv").read_bytes()
    rows = read_rows(out1 / "samples.csv")
    for r in rows[1:]:
        assert float(r[0]) <= float(r[1]) + 1e-12


# ---------------------------------------------------------------------------
# casestudy


@pytest.fixture(scope="module")
def obs_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("obs")
    rng = np.random.default_rng(42)
    xs = rng.uniform(0.0, 1.0, 400)
    ys = rng.uniform(0.2, 1.4, 400)
    near = rng.permutation(xs) - 0.004 + 0.008 * rng.uniform(size=400)

    def write(name, vals):
        p = root / name
        p.write_text("value\n" + "\n".join(f"{v:.9f}" for v in vals) + "\n")
        return str(p)

    return {
        "x": write("x.csv", xs),
        "y": write("y.csv", ys),
        "near": write("near.csv", near),
    }


def casestudy_args(obs_x, obs_y, out):
    return [
        "casestudy",
        "--obsX",
        obs_x,
        "--obsY",
        obs_y,
        "--groupX",
        "30",
        "--groupY",
        "30",
        "--replicates",
        "500",
        "--seed",
        "3",
        "--p-from",
        "0.9",
        "--p-to",
        "0.92",
        "--p-step",
        "0.01",
        "--grid-n",
        "2000",
        "--out",
        str(out),
    ]


def test_casestudy_clean_pair(obs_files, tmp_path):
    out = tmp_path / "cs"
    assert run(*casestudy_args(obs_files["x"], obs_files["y"], out)) == 0
    pre = json.loads((out / "preprocessing.json").read_text())
    assert pre["max_violation"] == 0.0
    assert pre["projected"] is False
    assert pre["replicates"] == 500
    assert pre["threshold"] == pytest.approx(2.0 / np.sqrt(500))
    rows = read_rows(out / "curve.csv")
    assert len(rows) == 4
    for row in rows[1:]:
        vals = [float(v) for v in row[1:5]]
        assert vals == sorted(vals)


def test_casestudy_small_violation_needs_project(obs_files, tmp_path, capsys):
    out = tmp_path / "cs"
    args = casestudy_args(obs_files["x"], obs_files["near"], out)
    assert run(*args) == 2
    assert "rerun with --project" in capsys.readouterr().err
    assert run(*args, "--project") == 0
    pre = json.loads((out / "preprocessing.json").read_text())
    assert pre["projected"] is True
    assert 0.0 < pre["max_violation"] <= pre["threshold"]


def test_casestudy_large_violation_always_fails(obs_files, tmp_path, capsys):
    out = tmp_path / "cs"
    args = casestudy_args(obs_files["y"], obs_files["x"], out)
    assert run(*args) == 2
    assert run(*args, "--project") == 2
    assert "exceeds threshold" in capsys.readouterr().err


def test_casestudy_explicit_threshold(obs_files, tmp_path):
    out = tmp_path / "cs"
    args = casestudy_args(obs_files["x"], obs_files["near"], out)
    assert run(*args, "--project", "--max-violation", "0") == 2
