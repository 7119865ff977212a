"""Batch command-line pipelines over the bounds and coupling layers.

Subcommands
-----------
bounds       best/worst curves of one risk measure over a level grid
probbounds   probability bound columns over a threshold grid
sample       coupled pairs under a chosen dependence, as CSV
casestudy    bootstrap totals from two observation files, order repair,
             then the bounds pipeline
selftest     analytic oracle checks; nonzero exit on any failure

Exit codes: 0 success, 2 precondition or order failure, 3 I/O failure,
4 selftest failure. All outputs are deterministic for a fixed config
and seed. Infinite values are written as ``inf``/``-inf`` in CSV and
as the strings ``"inf"``/``"-inf"`` in JSON; undefined cells are empty
in CSV and ``null`` in JSON.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .bounds import (
    best_var_constrained,
    bound_report,
    ct_sum_values,
    ct_sum_var,
    dl_sum_var,
    prob_lower,
    prob_lower_unconstrained,
    prob_upper,
    prob_upper_unconstrained,
    worst_ess_inf_constrained,
    worst_ess_inf_unconstrained,
    worst_var_constrained,
)
from .coupling import (
    COUPLING_KINDS,
    dl_plan_discrete,
    dl_sum_cdf,
    export_batch_csv,
    sample_coupling,
)
from .dist import (
    DEFAULT_GRID_N,
    DEFAULT_TRUNC,
    Dist,
    Normal,
    Pareto,
    Uniform,
    check_st,
    empirical_from_samples,
    isotonic_pair_projection,
    read_empirical_csv,
)
from .errors import (
    DegenerateSpreadError,
    DomainError,
    OrderViolationError,
    OrdriskError,
)

_MEASURES = ("var", "es", "rvar", "essinf", "esssup")


@dataclass
class RunConfig:
    """One flat config shared by every subcommand; unused fields stay None."""

    marg_f: str | None = None
    marg_g: str | None = None
    p_from: float = 0.900
    p_to: float = 0.995
    p_step: float = 0.005
    grid_n: int = DEFAULT_GRID_N
    trunc: float = DEFAULT_TRUNC
    seed: int = 0
    out_dir: str = "."
    project: bool = False
    measure: str = "var"
    q: float | None = None
    t_from: float | None = None
    t_to: float | None = None
    t_step: float | None = None
    kind: str | None = None
    size: int | None = None
    jitter: bool = False
    obs_x: str | None = None
    obs_y: str | None = None
    group_x: int | None = None
    group_y: int | None = None
    replicates: int = 1000
    max_violation: float | None = None
    perturb: float = 0.0

    def validate(self) -> None:
        if not (0.0 < self.p_from <= self.p_to < 1.0):
            raise DomainError("level grid must satisfy 0 < p_from <= p_to < 1")
        if self.p_step <= 0.0:
            raise DomainError("p step must be positive")
        if self.grid_n < 100:
            raise DomainError("grid_n must be at least 100")
        if not 0.5 < self.trunc < 1.0:
            raise DomainError("truncation level must lie in (0.5, 1)")
        if self.q is not None and not 0.0 < self.q < 1.0:
            raise DomainError("q must lie in (0, 1)")
        if self.replicates < 1:
            raise DomainError("replicate count must be positive")
        if self.size is not None and self.size < 1:
            raise DomainError("sample size must be positive")
        if self.t_step is not None and self.t_step <= 0.0:
            raise DomainError("t step must be positive")
        if self.max_violation is not None and self.max_violation < 0.0:
            raise DomainError("violation threshold must be nonnegative")

    def levels(self) -> np.ndarray:
        k = int(math.floor((self.p_to - self.p_from) / self.p_step + 1e-9))
        return np.round(self.p_from + self.p_step * np.arange(k + 1), 12)

    def thresholds(self) -> np.ndarray:
        if self.t_from is None or self.t_to is None or self.t_step is None:
            raise DomainError("probbounds needs --t-from, --t-to and --t-step")
        if self.t_from > self.t_to:
            raise DomainError("threshold grid must satisfy t_from <= t_to")
        k = int(math.floor((self.t_to - self.t_from) / self.t_step + 1e-9))
        return self.t_from + self.t_step * np.arange(k + 1)


def parse_marginal(spec: str) -> Dist:
    """Build a distribution from ``kind:args`` notation.

    Kinds: ``pareto:scale,shape``, ``uniform:lo,hi``, ``normal:mean,sd``,
    ``csv:path`` (one ``value`` column with optional ``weight``).
    """
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise DomainError(f"marginal spec {spec!r} needs kind:args")
    if kind == "csv":
        return read_empirical_csv(rest)
    try:
        args = [float(tok) for tok in rest.split(",")]
    except ValueError:
        raise DomainError(f"bad numeric arguments in marginal spec {spec!r}") from None
    if kind == "pareto" and len(args) == 2:
        return Pareto(args[0], args[1])
    if kind == "uniform" and len(args) == 2:
        return Uniform(args[0], args[1])
    if kind == "normal" and len(args) == 2:
        return Normal(args[0], args[1])
    raise DomainError(f"unknown marginal spec {spec!r}")


def _fmt(v) -> str:
    if v is None:
        return ""
    return f"{float(v):.12g}"


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    print(f"wrote {path}")


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {path}")


def _order_gate(f: Dist, g: Dist, project: bool):
    """Check F <= G stochastically; optionally repair empirical pairs."""
    rep = check_st(f, g)
    log = {
        "max_violation": float(rep.max_violation),
        "witness": None if rep.witness is None else float(rep.witness),
        "projected": False,
    }
    if rep.holds:
        return f, g, log
    if not project:
        print(
            "order check failed; --project repairs empirical or grid marginals",
            file=sys.stderr,
        )
        raise OrderViolationError(rep)
    f, g = isotonic_pair_projection(f, g)
    after = check_st(f, g, tol=0.0)
    if not after.holds:
        raise OrdriskError("isotonic projection left an order violation")
    log["projected"] = True
    return f, g, log


def _emit_bound_outputs(f: Dist, g: Dist, cfg: RunConfig) -> None:
    """Curve CSV, per-level coupling VaRs and JSON reports for one pair."""
    measure = cfg.measure
    if measure == "rvar":
        if cfg.q is None:
            raise DomainError("measure rvar requires --q")
        if cfg.q <= cfg.p_to:
            raise DomainError("q must exceed the top of the level grid")
    os.makedirs(cfg.out_dir, exist_ok=True)
    ps = [float(p) for p in cfg.levels()]
    reports = [
        bound_report(
            f, g, measure, p=p, q=cfg.q, grid_n=cfg.grid_n, trunc=cfg.trunc
        )
        for p in ps
    ]
    rows = [
        (
            r.p,
            r.unconstrained_best,
            r.constrained_best,
            r.constrained_worst,
            r.unconstrained_worst,
            r.r,
        )
        for r in reports
    ]
    _write_csv(
        os.path.join(cfg.out_dir, "curve.csv"),
        ["p", "L", "Lo", "Uo", "U", "R"],
        rows,
    )
    plan = dl_plan_discrete(f, g, cfg.grid_n, 0.0, trunc=cfg.trunc, check=False)
    ct = np.sort(ct_sum_values(f, g, grid_n=cfg.grid_n))
    crows = [
        (p, dl_sum_var(f, g, p, plan=plan), ct_sum_var(f, g, p, values=ct))
        for p in ps
    ]
    _write_csv(
        os.path.join(cfg.out_dir, "couplings.csv"),
        ["p", "var_dl", "var_ct"],
        crows,
    )
    _write_json(
        os.path.join(cfg.out_dir, "reports.json"),
        [r.to_json_dict() for r in reports],
    )


def cmd_bounds(cfg: RunConfig) -> int:
    f = parse_marginal(cfg.marg_f)
    g = parse_marginal(cfg.marg_g)
    f, g, log = _order_gate(f, g, cfg.project)
    print(f"order check: max violation {log['max_violation']:.6g}")
    _emit_bound_outputs(f, g, cfg)
    return 0


def _nest4(m: float, mo: float, big_mo: float, big_m: float):
    # independent bisections may cross by their own tolerance; snap those,
    # refuse anything larger
    vals = [m, mo, big_mo, big_m]
    out = [vals[0]]
    for v in vals[1:]:
        if v < out[-1]:
            if out[-1] - v > 1e-4:
                raise OrdriskError("probability bounds failed to nest")
            v = out[-1]
        out.append(v)
    return tuple(out)


def cmd_probbounds(cfg: RunConfig) -> int:
    f = parse_marginal(cfg.marg_f)
    g = parse_marginal(cfg.marg_g)
    ts = cfg.thresholds()
    f, g, log = _order_gate(f, g, cfg.project)
    print(f"order check: max violation {log['max_violation']:.6g}")
    os.makedirs(cfg.out_dir, exist_ok=True)
    plan = dl_plan_discrete(f, g, cfg.grid_n, 0.0, trunc=cfg.trunc, check=False)
    ct = np.sort(ct_sum_values(f, g, grid_n=cfg.grid_n))
    kw = dict(grid_n=cfg.grid_n, trunc=cfg.trunc)
    rows = []
    for t in ts:
        t = float(t)
        m = prob_lower_unconstrained(f, g, t)
        mo = prob_lower(f, g, t, **kw)
        big_mo = prob_upper(f, g, t, **kw)
        big_m = prob_upper_unconstrained(f, g, t)
        m, mo, big_mo, big_m = _nest4(m, mo, big_mo, big_m)
        p_dl = dl_sum_cdf(plan, t)
        p_ct = float(np.searchsorted(ct, t, side="right")) / ct.size
        rows.append((t, m, mo, big_mo, big_m, p_dl, p_ct))
    _write_csv(
        os.path.join(cfg.out_dir, "probbounds.csv"),
        ["t", "m", "mo", "Mo", "M", "prob_dl", "prob_ct"],
        rows,
    )
    return 0


def cmd_sample(cfg: RunConfig) -> int:
    f = parse_marginal(cfg.marg_f)
    g = parse_marginal(cfg.marg_g)
    batch = sample_coupling(
        f,
        g,
        cfg.kind,
        cfg.size,
        cfg.seed,
        jitter=cfg.jitter,
        plan_n=cfg.grid_n,
        trunc=cfg.trunc,
    )
    os.makedirs(cfg.out_dir, exist_ok=True)
    csv_path = os.path.join(cfg.out_dir, "samples.csv")
    export_batch_csv(batch, csv_path, os.path.join(cfg.out_dir, "samples.json"))
    print(f"wrote {csv_path}")
    return 0


def _bootstrap_totals(rng, d, group: int, replicates: int) -> np.ndarray:
    w = d.weights
    if np.allclose(w, 1.0 / w.size):
        w = None
    draws = rng.choice(d.values, size=(replicates, group), replace=True, p=w)
    return draws.sum(axis=1)


def cmd_casestudy(cfg: RunConfig) -> int:
    obs_x = read_empirical_csv(cfg.obs_x)
    obs_y = read_empirical_csv(cfg.obs_y)
    rng = np.random.default_rng(cfg.seed)
    tot_x = _bootstrap_totals(rng, obs_x, cfg.group_x, cfg.replicates)
    tot_y = _bootstrap_totals(rng, obs_y, cfg.group_y, cfg.replicates)
    if np.unique(tot_x).size < 2 or np.unique(tot_y).size < 2:
        raise DegenerateSpreadError("bootstrap totals are degenerate")
    fhat = empirical_from_samples(tot_x)
    ghat = empirical_from_samples(tot_y)

    rep = check_st(fhat, ghat)
    mv = max(float(rep.max_violation), 0.0)
    thr = (
        cfg.max_violation
        if cfg.max_violation is not None
        else 2.0 / math.sqrt(cfg.replicates)
    )
    projected = False
    if mv > thr:
        print(
            f"max violation {mv:.6g} exceeds threshold {thr:.6g}", file=sys.stderr
        )
        raise OrderViolationError(rep)
    if mv > 0.0:
        if not cfg.project:
            print(
                f"violation {mv:.6g} within threshold {thr:.6g}; "
                "rerun with --project to repair",
                file=sys.stderr,
            )
            raise OrderViolationError(rep)
        fhat, ghat = isotonic_pair_projection(fhat, ghat)
        after = check_st(fhat, ghat, tol=0.0)
        if not after.holds:
            raise OrdriskError("isotonic projection left an order violation")
        projected = True
    print(f"order check: max violation {mv:.6g} (threshold {thr:.6g})")

    os.makedirs(cfg.out_dir, exist_ok=True)
    _write_json(
        os.path.join(cfg.out_dir, "preprocessing.json"),
        {
            "obs_x": str(cfg.obs_x),
            "obs_y": str(cfg.obs_y),
            "group_x": cfg.group_x,
            "group_y": cfg.group_y,
            "replicates": cfg.replicates,
            "seed": cfg.seed,
            "max_violation": mv,
            "witness": None if rep.witness is None else float(rep.witness),
            "threshold": thr,
            "projected": projected,
        },
    )
    _emit_bound_outputs(fhat, ghat, cfg)
    return 0


def cmd_selftest(cfg: RunConfig) -> int:
    """Pareto-pair oracle values with analytic expectations."""
    f, g = Pareto(1.0, 1.0), Pareto(2.0, 1.0)
    checks = [
        (
            "worst ess-inf (constrained)",
            worst_ess_inf_constrained(f, g) + cfg.perturb,
            4.0,
            1e-9,
        ),
        (
            "worst ess-inf (unconstrained)",
            worst_ess_inf_unconstrained(f, g),
            3.0 + 2.0 * math.sqrt(2.0),
            1e-6,
        ),
        (
            "worst VaR at p=0.5",
            worst_var_constrained(f, g, 0.5),
            8.0,
            1e-6,
        ),
        (
            "best VaR at p=0.5",
            best_var_constrained(f, g, 0.5),
            5.0,
            1e-3,
        ),
        (
            "prob lower (mo) at t=8",
            prob_lower(f, g, 8.0),
            0.5,
            1e-3,
        ),
        (
            "prob upper (Mo) at t=5",
            prob_upper(f, g, 5.0),
            0.5,
            1e-3,
        ),
    ]
    width = max(len(name) for name, *_ in checks)
    failed = 0
    for name, value, expected, tol in checks:
        err = abs(value - expected)
        ok = err <= tol
        failed += 0 if ok else 1
        print(
            f"{name:<{width}}  value {value:<22.12g} expected {expected:<22.12g}"
            f" err {err:<12.3g} tol {tol:<8.0e} {'pass' if ok else 'FAIL'}"
        )
    if failed:
        print(f"{failed} of {len(checks)} checks failed", file=sys.stderr)
        return 4
    print(f"all {len(checks)} checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    marg = argparse.ArgumentParser(add_help=False)
    marg.add_argument(
        "--margF",
        dest="marg_f",
        required=True,
        metavar="SPEC",
        help="pareto:scale,shape | uniform:lo,hi | normal:mean,sd | csv:path",
    )
    marg.add_argument("--margG", dest="marg_g", required=True, metavar="SPEC")

    num = argparse.ArgumentParser(add_help=False)
    num.add_argument("--grid-n", dest="grid_n", type=int, default=DEFAULT_GRID_N)
    num.add_argument(
        "--truncate-m", dest="trunc", type=float, default=DEFAULT_TRUNC
    )

    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--out", dest="out_dir", default=".", metavar="DIR")
    io.add_argument("--seed", type=int, default=0)

    levels = argparse.ArgumentParser(add_help=False)
    levels.add_argument("--p-from", dest="p_from", type=float, default=0.900)
    levels.add_argument("--p-to", dest="p_to", type=float, default=0.995)
    levels.add_argument("--p-step", dest="p_step", type=float, default=0.005)

    meas = argparse.ArgumentParser(add_help=False)
    meas.add_argument("--measure", choices=_MEASURES, default="var")
    meas.add_argument("--q", type=float, default=None, help="upper level for rvar")

    proj = argparse.ArgumentParser(add_help=False)
    proj.add_argument("--project", action="store_true")

    top = argparse.ArgumentParser(
        prog="ordrisk",
        description="risk bounds for ordered sums with known marginals",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "bounds",
        parents=[marg, levels, num, io, meas, proj],
        help="bound curves over a level grid",
    )
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser(
        "probbounds",
        parents=[marg, num, io, proj],
        help="probability bounds over a threshold grid",
    )
    p.add_argument("--t-from", dest="t_from", type=float, required=True)
    p.add_argument("--t-to", dest="t_to", type=float, required=True)
    p.add_argument("--t-step", dest="t_step", type=float, required=True)
    p.set_defaults(func=cmd_probbounds)

    p = sub.add_parser(
        "sample",
        parents=[marg, num, io],
        help="draw coupled pairs to CSV",
    )
    p.add_argument("--kind", choices=COUPLING_KINDS, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--jitter", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser(
        "casestudy",
        parents=[levels, num, io, meas, proj],
        help="bootstrap two observation files into bound curves",
    )
    p.add_argument("--obsX", dest="obs_x", required=True, metavar="CSV")
    p.add_argument("--obsY", dest="obs_y", required=True, metavar="CSV")
    p.add_argument("--groupX", dest="group_x", type=int, required=True)
    p.add_argument("--groupY", dest="group_y", type=int, required=True)
    p.add_argument("--replicates", type=int, default=1000)
    p.add_argument(
        "--max-violation", dest="max_violation", type=float, default=None
    )
    p.set_defaults(func=cmd_casestudy)

    p = sub.add_parser("selftest", help="analytic oracle checks")
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return top


def _config(args: argparse.Namespace) -> RunConfig:
    names = {fld.name for fld in dataclasses.fields(RunConfig)}
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in names})
    cfg.validate()
    return cfg


def entry(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return int(args.func(_config(args)))
    except OrdriskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(entry())
