"""Ordered couplings of two marginals.

Implements the smallest joint CDF among couplings of (X, Y) with
X ~ F, Y ~ G and X <= Y, here called the directed coupling:

* transport maps ``transport_upper`` / ``transport_lower``;
* its closed-form bivariate CDF ``dl_cdf``;
* discrete coupling plans (``dl_plan_discrete``) built by matching
  descending quantile grids, and the sum CDF over a plan;
* samplers for comonotone, countermonotone and dl dependence.

The transport map is ``T(x) = inf{z >= x : F(z)-G(z) < F(x)-G(x)}``
(``+inf`` when the set is empty). All continuous evaluation is a grid
scan refined by bisection; the bisection returns the upper end of its
final bracket, so numeric transport values never undershoot the true
infimum.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._search import refine_min
from .dist import (
    DEFAULT_GRID_N,
    DEFAULT_TRUNC,
    Dist,
    _merged_grid,
    check_st,
    upper_tail,
    negate_dist,
)
from .errors import DomainError, OrderViolationError, PlanInfeasibleError

__all__ = [
    "DlPlan",
    "SampleBatch",
    "TransportEvaluator",
    "transport_upper",
    "transport_lower",
    "dl_cdf",
    "dl_plan_discrete",
    "dl_sum_cdf",
    "sample_coupling",
    "export_plan_csv",
    "export_batch_csv",
]

DEFAULT_SCAN_N = 2048

COUPLING_KINDS = ("comonotone", "countermonotone", "dl")


def _require_order(f: Dist, g: Dist, tol=None):
    report = check_st(f, g, tol=tol)
    if not report.holds:
        raise OrderViolationError(report)
    return report


class TransportEvaluator:
    """Shared evaluation grid for F - G with transport and infimum queries.

    Built once per ordered pair; all queries are read-only. The grid
    merges both quantile functions with every atom location, so a sign
    change of F - G between consecutive nodes is at most one resolution
    cell wide.
    """

    def __init__(
        self,
        f: Dist,
        g: Dist,
        *,
        scan_n: int = DEFAULT_SCAN_N,
        trunc: float = DEFAULT_TRUNC,
        check: bool = True,
        order_tol: float | None = None,
    ):
        if check:
            _require_order(f, g, order_tol)
        self.f = f
        self.g = g
        self.zs = _merged_grid(f, g, scan_n, trunc)
        self.dz = np.asarray(f.cdf(self.zs), dtype=float) - np.asarray(
            g.cdf(self.zs), dtype=float
        )

    def diff(self, z):
        """F(z) - G(z), vectorized."""
        return np.asarray(self.f.cdf(z), dtype=float) - np.asarray(
            self.g.cdf(z), dtype=float
        )

    def upper_many(self, xs) -> np.ndarray:
        """Transport map at each x, +inf where the constraint set is empty.

        Grid scan for the first node strictly below F(x)-G(x), then a
        joint bisection over all active brackets. The returned value is
        the upper bracket end, hence >= the true infimum.
        """
        xs = np.asarray(xs, dtype=float)
        flat = xs.ravel()
        dx = self.diff(flat)
        out = np.full(flat.shape, math.inf)
        lo = np.empty(flat.shape)
        hi = np.empty(flat.shape)
        active = np.zeros(flat.shape, dtype=bool)
        for i in range(flat.size):
            x, d0 = flat[i], dx[i]
            if not (d0 > 0.0) or not math.isfinite(x):
                continue
            k0 = int(np.searchsorted(self.zs, x, side="left"))
            seg = self.dz[k0:]
            below = seg < d0
            if not below.any():
                continue
            j = k0 + int(np.argmax(below))
            lo[i] = x if j == 0 else max(x, self.zs[j - 1])
            hi[i] = self.zs[j]
            active[i] = True
        if active.any():
            a = lo[active]
            b = hi[active]
            target = dx[active]
            for _ in range(80):
                width = b - a
                if np.all(width <= 4e-16 * np.maximum(1.0, np.abs(b))):
                    break
                mid = 0.5 * (a + b)
                inside = self.diff(mid) < target
                b = np.where(inside, mid, b)
                a = np.where(inside, a, mid)
            out[active] = b
        return out.reshape(xs.shape)

    def upper(self, x: float) -> float:
        return float(self.upper_many(np.array([float(x)]))[0])

    def min_between(self, a: float, b: float) -> float:
        """inf of F - G over [a, b], grid scan plus golden refinement."""
        if not a <= b:
            raise DomainError("min_between requires a <= b")
        i0 = int(np.searchsorted(self.zs, a, side="left"))
        i1 = int(np.searchsorted(self.zs, b, side="right"))
        ts = np.concatenate(([a], self.zs[i0:i1], [b]))
        vals = self.diff(ts)
        scalar = lambda z: float(self.diff(np.asarray([z]))[0])
        return refine_min(scalar, ts, vals, tol=1e-12 * max(1.0, b - a))


def transport_upper(
    f: Dist,
    g: Dist,
    x: float,
    *,
    scan_n: int = DEFAULT_SCAN_N,
    trunc: float = DEFAULT_TRUNC,
    evaluator: TransportEvaluator | None = None,
) -> float:
    """T(x) = inf{z >= x : F(z)-G(z) < F(x)-G(x)}; +inf on an empty set.

    Requires F <= G in the usual stochastic order.
    """
    ev = evaluator or TransportEvaluator(f, g, scan_n=scan_n, trunc=trunc)
    return ev.upper(float(x))


def transport_lower(
    f: Dist,
    g: Dist,
    x: float,
    *,
    scan_n: int = DEFAULT_SCAN_N,
    trunc: float = DEFAULT_TRUNC,
) -> float:
    """sup{t <= x : F(t)-G(t) < F(x)-G(x)}; -inf on an empty set.

    Computed through the reflection identity
    ``-transport_upper(negate(G), negate(F), -x)``.
    """
    fr = negate_dist(g, grid_n=max(scan_n, DEFAULT_GRID_N), trunc=trunc)
    gr = negate_dist(f, grid_n=max(scan_n, DEFAULT_GRID_N), trunc=trunc)
    return -transport_upper(fr, gr, -float(x), scan_n=scan_n, trunc=trunc)


def dl_cdf(
    f: Dist,
    g: Dist,
    x: float,
    y: float,
    *,
    scan_n: int = DEFAULT_SCAN_N,
    trunc: float = DEFAULT_TRUNC,
    evaluator: TransportEvaluator | None = None,
) -> float:
    """Bivariate CDF of the directed coupling at (x, y).

    Equals G(y) when y <= x, otherwise
    ``F(x) - inf_{z in [x,y]} (F(z) - G(z))``, clamped to [0, 1].
    """
    x, y = float(x), float(y)
    ev = evaluator or TransportEvaluator(f, g, scan_n=scan_n, trunc=trunc)
    if y <= x:
        return float(ev.g.cdf(y))
    val = float(ev.f.cdf(x)) - ev.min_between(x, y)
    return min(1.0, max(0.0, val))


# ---------------------------------------------------------------------------
# discrete plans


@dataclass(frozen=True, eq=False)
class DlPlan:
    """Discrete directed coupling between two n-point quantile grids.

    Pair k carries mass 1/n and matches the k-th largest F-grid point
    with the smallest still-available G-grid point above it. ``tag`` is
    "common" where the pair sits on the diagonal and "singular"
    otherwise. ``p`` is the tail level the grids were drawn from (0 for
    whole distributions).
    """

    n: int
    p: float
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    tag: np.ndarray = field(repr=False)
    y_index: np.ndarray = field(repr=False)

    @cached_property
    def sums_sorted(self) -> np.ndarray:
        return np.sort(self.x + self.y)

    def __repr__(self):
        common = int(np.count_nonzero(self.tag == "common"))
        return f"DlPlan(n={self.n}, p={self.p!r}, common={common})"


def _plan_levels(n: int, p: float) -> np.ndarray:
    # descending: p + (1-p)(n-i)/n for i = 1..n
    return p + (1.0 - p) * (n - np.arange(1, n + 1)) / n


def _grid_points(d: Dist, levels: np.ndarray, trunc: float) -> np.ndarray:
    pts = np.asarray(d.quantile_left(levels), dtype=float)
    bad = ~np.isfinite(pts)
    if bad.any():
        clipped = np.clip(levels[bad], 1.0 - trunc, trunc)
        pts[bad] = d.quantile_left(clipped)
    return pts


def dl_plan_discrete(
    f: Dist,
    g: Dist,
    n: int,
    p: float = 0.0,
    *,
    trunc: float = DEFAULT_TRUNC,
    check: bool = True,
) -> DlPlan:
    """Directed coupling plan on the n-point upper tail grids at level p.

    Grid points sit at levels p + (1-p)(n-i)/n, i = 1..n; iteration runs
    in decreasing x, matching each x_k with min{y in S_k : y >= x_k} and
    removing the match from S_k. Raises PlanInfeasibleError when no
    admissible y remains, which signals a stochastic-order violation at
    grid resolution.
    """
    n = int(n)
    if n < 1:
        raise DomainError("plan size must be at least 1")
    p = float(p)
    if not 0.0 <= p < 1.0:
        raise DomainError("plan tail level must lie in [0, 1)")
    if check:
        _require_order(upper_tail(f, p, trunc=trunc), upper_tail(g, p, trunc=trunc))
    levels = _plan_levels(n, p)
    xs = _grid_points(f, levels, trunc)
    ys = _grid_points(g, levels, trunc)

    # Merge both descending grids; at a tie the y is stacked before the
    # x arrives, so equal locations pair with each other.
    x_out = np.empty(n)
    y_out = np.empty(n)
    y_idx = np.empty(n, dtype=np.int64)
    stack: list[int] = []
    j = 0
    for i in range(n):
        x = xs[i]
        while j < n and ys[j] >= x:
            stack.append(j)
            j += 1
        if not stack:
            raise PlanInfeasibleError(
                f"no available y >= {x:.6g} for pair {i + 1} of {n}"
            )
        m = stack.pop()
        x_out[i] = x
        y_out[i] = ys[m]
        y_idx[i] = m
    tags = np.where(x_out == y_out, "common", "singular")
    return DlPlan(n=n, p=p, x=x_out, y=y_out, tag=tags, y_index=y_idx)


def dl_sum_cdf(plan: DlPlan, t):
    """P(X + Y <= t) under the plan: (1/n) #. {k : x_k + y_k <= t}."""
    scalar = np.ndim(t) == 0
    tt = np.asarray(t, dtype=float)
    out = np.searchsorted(plan.sums_sorted, tt, side="right") / plan.n
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# samplers


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Seeded draw of coupled pairs; x and y are aligned arrays."""

    coupling_kind: str
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    seed: int
    size: int

    def __repr__(self):
        return f"SampleBatch(kind={self.coupling_kind!r}, size={self.size}, seed={self.seed})"


def _safe_levels(u: np.ndarray) -> np.ndarray:
    # keep quantile arguments strictly inside (0, 1)
    return np.clip(u, 1e-12, 1.0 - 1e-12)


def sample_coupling(
    f: Dist,
    g: Dist,
    kind: str,
    size: int,
    seed: int,
    *,
    jitter: bool = False,
    plan: DlPlan | None = None,
    plan_n: int = DEFAULT_GRID_N,
    trunc: float = DEFAULT_TRUNC,
) -> SampleBatch:
    """Draw coupled pairs under comonotone, countermonotone or dl dependence.

    dl draws resample plan atoms uniformly; with ``jitter`` each draw is
    displaced within its quantile cell (the same cell fraction on both
    sides, clamped to keep x <= y exact). Deterministic given the seed.
    """
    if kind not in COUPLING_KINDS:
        raise DomainError(f"unknown coupling kind {kind!r}")
    size = int(size)
    if size < 1:
        raise DomainError("sample size must be positive")
    rng = np.random.default_rng(seed)
    if kind == "comonotone":
        u = _safe_levels(rng.random(size))
        x = np.asarray(f.quantile_left(u), dtype=float)
        y = np.asarray(g.quantile_left(u), dtype=float)
    elif kind == "countermonotone":
        u = _safe_levels(rng.random(size))
        x = np.asarray(f.quantile_left(u), dtype=float)
        y = np.asarray(g.quantile_left(1.0 - u), dtype=float)
    else:
        if plan is None:
            plan = dl_plan_discrete(f, g, plan_n, 0.0, trunc=trunc)
        idx = rng.integers(0, plan.n, size)
        if jitter:
            frac = rng.random(size)
            w = (1.0 - plan.p) / plan.n
            x_lev = plan.p + (1.0 - plan.p) * (plan.n - 1 - idx) / plan.n
            y_lev = plan.p + (1.0 - plan.p) * (plan.n - 1 - plan.y_index[idx]) / plan.n
            x = np.asarray(f.quantile_left(_safe_levels(x_lev + frac * w)), dtype=float)
            y = np.asarray(g.quantile_left(_safe_levels(y_lev + frac * w)), dtype=float)
            y = np.maximum(x, y)
        else:
            x = plan.x[idx].copy()
            y = plan.y[idx].copy()
    return SampleBatch(coupling_kind=kind, x=x, y=y, seed=int(seed), size=size)


# ---------------------------------------------------------------------------
# file formats


def export_plan_csv(plan: DlPlan, path):
    """Write plan pairs as CSV with header ``k,x,y,tag``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "x", "y", "tag"])
        for k in range(plan.n):
            writer.writerow(
                [k + 1, f"{plan.x[k]:.12g}", f"{plan.y[k]:.12g}", str(plan.tag[k])]
            )


def export_batch_csv(batch: SampleBatch, path, sidecar_path=None):
    """Write batch pairs as CSV ``x,y`` plus a JSON sidecar {kind, seed, size}."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y"])
        for xv, yv in zip(batch.x, batch.y):
            writer.writerow([f"{xv:.12g}", f"{yv:.12g}"])
    if sidecar_path is None:
        sidecar_path = str(path) + ".json"
    meta = {"kind": batch.coupling_kind, "seed": batch.seed, "size": batch.size}
    with open(sidecar_path, "w") as fh:
        json.dump(meta, fh, sort_keys=True)
        fh.write("\n")
