"""One-dimensional distribution toolkit.

Distributions expose a CDF, generalized inverses (left and right
quantiles), support endpoints, tail conditioning, negation,
stochastic-order checks and tail risk measures (ES, RVaR). Five
representations are supported:

* ``Pareto(scale, shape)``: ``F(x) = 1 - (scale/x)**shape`` on ``x >= scale``;
* ``Uniform(lo, hi)``;
* ``Normal(mean, sd)``;
* ``Empirical``: weighted atoms with a step CDF;
* ``QuantileGrid``: piecewise-linear quantile function tabulated at
  levels in (0, 1), the numeric fallback for everything without a
  closed form.

Conventions. ``quantile_left(u) = inf{t : F(t) >= u}`` and
``quantile_right(u) = inf{t : F(t) > u}``; by convention the left
quantile at 0 and the right quantile at 1 return the support endpoints
(possibly infinite). Infinite values are returned as ``inf`` floats,
never as large finite surrogates. Unbounded supports are truncated at
quantile level ``trunc`` (default ``1 - 1e-6``) whenever a finite grid
has to be built.
"""

from __future__ import annotations

import csv
import math

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import DomainError

__all__ = [
    "Dist",
    "Pareto",
    "Uniform",
    "Normal",
    "Empirical",
    "QuantileGrid",
    "OrderCheckReport",
    "cdf_eval",
    "quantile_left",
    "quantile_right",
    "upper_tail",
    "lower_tail",
    "negate_dist",
    "to_grid",
    "check_st",
    "check_ss",
    "es_eval",
    "rvar_eval",
    "empirical_from_samples",
    "isotonic_pair_projection",
    "read_empirical_csv",
    "write_grid_csv",
]

DEFAULT_GRID_N = 10_000
DEFAULT_TRUNC = 1.0 - 1e-6

_PARAMETRIC_KINDS = ("pareto", "uniform", "normal")


def _validate_levels(u):
    arr = np.asarray(u, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise DomainError("quantile level must lie in [0, 1]")
    return arr


def _as_output(arr, scalar):
    return float(arr) if scalar else arr


class Dist:
    """Common distribution interface. Instances are immutable value objects."""

    kind: str = "abstract"

    def cdf(self, x):
        raise NotImplementedError

    def _ql(self, u):
        raise NotImplementedError

    def _qr(self, u):
        return self._ql(u)

    def quantile_left(self, u):
        scalar = np.ndim(u) == 0
        arr = _validate_levels(u)
        return _as_output(self._ql(arr), scalar)

    def quantile_right(self, u):
        scalar = np.ndim(u) == 0
        arr = _validate_levels(u)
        return _as_output(self._qr(arr), scalar)

    @property
    def support_lo(self) -> float:
        raise NotImplementedError

    @property
    def support_hi(self) -> float:
        raise NotImplementedError


class Pareto(Dist):
    """Pareto distribution, ``F(x) = 1 - (scale/x)**shape`` for ``x >= scale``."""

    kind = "pareto"

    def __init__(self, scale: float, shape: float):
        if not (scale > 0 and math.isfinite(scale)):
            raise DomainError("pareto scale must be positive and finite")
        if not (shape > 0 and math.isfinite(shape)):
            raise DomainError("pareto shape must be positive and finite")
        self.scale = float(scale)
        self.shape = float(shape)

    def __repr__(self):
        return f"Pareto(scale={self.scale!r}, shape={self.shape!r})"

    def cdf(self, x):
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(x <= self.scale, 0.0, 1.0 - (self.scale / x) ** self.shape)
        out = np.where(np.isposinf(x), 1.0, out)
        return _as_output(out, scalar)

    def _ql(self, u):
        with np.errstate(divide="ignore"):
            return self.scale * (1.0 - u) ** (-1.0 / self.shape)

    @property
    def support_lo(self):
        return self.scale

    @property
    def support_hi(self):
        return math.inf


class Uniform(Dist):
    """Continuous uniform distribution on ``[lo, hi]``."""

    kind = "uniform"

    def __init__(self, lo: float, hi: float):
        if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
            raise DomainError("uniform requires finite lo < hi")
        self.lo = float(lo)
        self.hi = float(hi)

    def __repr__(self):
        return f"Uniform(lo={self.lo!r}, hi={self.hi!r})"

    def cdf(self, x):
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        out = np.clip((x - self.lo) / (self.hi - self.lo), 0.0, 1.0)
        return _as_output(out, scalar)

    def _ql(self, u):
        return self.lo + u * (self.hi - self.lo)

    @property
    def support_lo(self):
        return self.lo

    @property
    def support_hi(self):
        return self.hi


class Normal(Dist):
    """Gaussian distribution with the given mean and standard deviation."""

    kind = "normal"

    def __init__(self, mean: float, sd: float):
        if not (math.isfinite(mean) and sd > 0 and math.isfinite(sd)):
            raise DomainError("normal requires finite mean and positive sd")
        self.mean = float(mean)
        self.sd = float(sd)

    def __repr__(self):
        return f"Normal(mean={self.mean!r}, sd={self.sd!r})"

    def cdf(self, x):
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        return _as_output(ndtr((x - self.mean) / self.sd), scalar)

    def _ql(self, u):
        with np.errstate(divide="ignore"):
            return self.mean + self.sd * ndtri(u)

    @property
    def support_lo(self):
        return -math.inf

    @property
    def support_hi(self):
        return math.inf


class Empirical(Dist):
    """Weighted atoms with a right-continuous step CDF.

    ``values`` must be nondecreasing; ``weights`` positive. Use
    :func:`empirical_from_samples` to build one from raw draws.
    """

    kind = "empirical"

    def __init__(self, values, weights):
        values = np.asarray(values, dtype=float)
        weights = np.asarray(weights, dtype=float)
        if values.ndim != 1 or values.size == 0 or values.shape != weights.shape:
            raise DomainError("empirical requires matching 1-d values and weights")
        if np.any(np.diff(values) < 0):
            raise DomainError("empirical values must be nondecreasing")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise DomainError("empirical weights must be positive and finite")
        if not np.all(np.isfinite(values)):
            raise DomainError("empirical values must be finite")
        self.values = values
        self.weights = weights / weights.sum()
        self._cumw = np.cumsum(self.weights)
        self._cumw[-1] = 1.0

    def __repr__(self):
        return f"Empirical(n={self.values.size})"

    def cdf(self, x):
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.values, x, side="right")
        padded = np.concatenate(([0.0], self._cumw))
        return _as_output(padded[idx], scalar)

    def _ql(self, u):
        idx = np.searchsorted(self._cumw, u, side="left")
        idx = np.minimum(idx, self.values.size - 1)
        return self.values[idx]

    def _qr(self, u):
        idx = np.searchsorted(self._cumw, u, side="right")
        idx = np.minimum(idx, self.values.size - 1)
        return self.values[idx]

    @property
    def support_lo(self):
        return float(self.values[0])

    @property
    def support_hi(self):
        return float(self.values[-1])


class QuantileGrid(Dist):
    """Piecewise-linear quantile function through ``(us[i], xs[i])``.

    ``us`` must be strictly increasing inside (0, 1); ``xs``
    nondecreasing. The quantile function is held constant outside
    ``[us[0], us[-1]]``, so the endpoints carry atoms of mass ``us[0]``
    and ``1 - us[-1]``. The CDF is the generalized inverse, linear in
    ``x`` between table nodes.
    """

    kind = "grid"

    def __init__(self, us, xs):
        us = np.asarray(us, dtype=float)
        xs = np.asarray(xs, dtype=float)
        if us.ndim != 1 or us.size == 0 or us.shape != xs.shape:
            raise DomainError("grid requires matching 1-d level and value tables")
        if np.any(us <= 0.0) or np.any(us >= 1.0) or np.any(np.diff(us) <= 0):
            raise DomainError("grid levels must be strictly increasing inside (0, 1)")
        if np.any(np.diff(xs) < 0) or not np.all(np.isfinite(xs)):
            raise DomainError("grid values must be finite and nondecreasing")
        self.us = us
        self.xs = xs

    def __repr__(self):
        return f"QuantileGrid(n={self.us.size})"

    def cdf(self, x):
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        xs, us = self.xs, self.us
        r = np.searchsorted(xs, x, side="right")
        out = np.empty(x.shape, dtype=float)
        out[r == 0] = 0.0
        out[r == xs.size] = 1.0
        mid = (r > 0) & (r < xs.size)
        if np.any(mid):
            rm = r[mid]
            xl, xr = xs[rm - 1], xs[rm]
            ul, ur = us[rm - 1], us[rm]
            xm = x[mid]
            at_node = xm == xl
            interp = ul + (ur - ul) * (xm - xl) / np.where(xr > xl, xr - xl, 1.0)
            out[mid] = np.where(at_node, ul, interp)
        return _as_output(out, scalar)

    def _ql(self, u):
        return np.interp(u, self.us, self.xs)

    @property
    def support_lo(self):
        return float(self.xs[0])

    @property
    def support_hi(self):
        return float(self.xs[-1])


def cdf_eval(d: Dist, x):
    """Evaluate the CDF of ``d`` at ``x`` (scalar or array)."""
    return d.cdf(x)


def quantile_left(d: Dist, u):
    """Left generalized inverse ``inf{t : F(t) >= u}`` for ``u`` in [0, 1]."""
    return d.quantile_left(u)


def quantile_right(d: Dist, u):
    """Right generalized inverse ``inf{t : F(t) > u}``; ``u = 1`` maps to the upper endpoint."""
    return d.quantile_right(u)


def _midpoints(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) / n


def to_grid(d: Dist, n: int = DEFAULT_GRID_N, trunc: float = DEFAULT_TRUNC) -> QuantileGrid:
    """Quantile-grid approximation of ``d`` at midpoint levels ``(i - 1/2)/n``.

    Levels are clipped to ``[1 - trunc, trunc]`` so unbounded supports
    come out finite.
    """
    if n < 2:
        raise DomainError("grid size must be at least 2")
    if not (0.5 < trunc < 1.0):
        raise DomainError("truncation level must lie in (0.5, 1)")
    us = _midpoints(int(n))
    xs = d.quantile_left(np.clip(us, 1.0 - trunc, trunc))
    return QuantileGrid(us, xs)


def upper_tail(
    d: Dist, p: float, *, grid_n: int = DEFAULT_GRID_N, trunc: float = DEFAULT_TRUNC
) -> Dist:
    """Distribution of ``d`` conditioned above its ``p`` quantile.

    The result has CDF ``(F(x) - p)_+ / (1 - p)``, the law of
    ``F^{-1}(U)`` with ``U`` uniform on ``[p, 1]``. Pareto, uniform and
    empirical inputs map to exact closed forms; other kinds are
    tabulated on a quantile grid of size ``grid_n``.
    """
    p = float(p)
    if not 0.0 <= p < 1.0:
        raise DomainError("tail level p must lie in [0, 1)")
    if p == 0.0:
        return d
    if isinstance(d, Pareto):
        return Pareto(d.scale * (1.0 - p) ** (-1.0 / d.shape), d.shape)
    if isinstance(d, Uniform):
        return Uniform(d.lo + p * (d.hi - d.lo), d.hi)
    if isinstance(d, Empirical):
        hi = np.minimum(d._cumw, 1.0)
        lo = np.concatenate(([0.0], d._cumw[:-1]))
        w = np.maximum(hi, p) - np.maximum(lo, p)
        keep = w > 0
        return Empirical(d.values[keep], w[keep] / (1.0 - p))
    # The conditional support has a finite lower endpoint at F^{-1}(p);
    # pin it with a near-zero node so tail grids do not undershoot it.
    us = np.concatenate(([1e-9], _midpoints(int(grid_n))))
    levels = np.clip(p + (1.0 - p) * us, 1.0 - trunc, trunc)
    return QuantileGrid(us, d.quantile_left(levels))


def lower_tail(
    d: Dist, p: float, *, grid_n: int = DEFAULT_GRID_N, trunc: float = DEFAULT_TRUNC
) -> Dist:
    """Distribution of ``d`` conditioned below its ``p`` quantile.

    The result has CDF ``min(F(x), p) / p``. Mirror of
    :func:`upper_tail`; ``p = 1`` returns ``d`` unchanged.
    """
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise DomainError("tail level p must lie in (0, 1]")
    if p == 1.0:
        return d
    if isinstance(d, Uniform):
        return Uniform(d.lo, d.lo + p * (d.hi - d.lo))
    if isinstance(d, Empirical):
        hi = np.minimum(d._cumw, p)
        lo = np.minimum(np.concatenate(([0.0], d._cumw[:-1])), p)
        w = hi - lo
        keep = w > 0
        return Empirical(d.values[keep], w[keep] / p)
    # Mirror of the endpoint pin in upper_tail: the conditional support
    # ends at the finite quantile F^{-1}(p).
    us = np.concatenate((_midpoints(int(grid_n)), [1.0 - 1e-9]))
    levels = np.clip(p * us, 1.0 - trunc, trunc)
    return QuantileGrid(us, d.quantile_left(levels))


def negate_dist(
    d: Dist, *, grid_n: int = DEFAULT_GRID_N, trunc: float = DEFAULT_TRUNC
) -> Dist:
    """Distribution of ``-X`` for ``X ~ d``, i.e. CDF ``1 - F(-t-)``.

    Exact for uniform, normal, empirical and grid kinds. Pareto has no
    closed-form mirror here, so it is reflected through a quantile grid
    truncated at level ``trunc``.
    """
    if isinstance(d, Uniform):
        return Uniform(-d.hi, -d.lo)
    if isinstance(d, Normal):
        return Normal(-d.mean, d.sd)
    if isinstance(d, Empirical):
        return Empirical(-d.values[::-1], d.weights[::-1])
    if isinstance(d, QuantileGrid):
        return QuantileGrid(1.0 - d.us[::-1], -d.xs[::-1])
    return negate_dist(to_grid(d, grid_n, trunc))


def empirical_from_samples(values, weights=None) -> Empirical:
    """Build an :class:`Empirical` from raw draws, merging duplicate atoms."""
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise DomainError("no samples given")
    if not np.all(np.isfinite(values)):
        raise DomainError("samples must be finite")
    if weights is None:
        weights = np.ones_like(values)
    else:
        weights = np.asarray(weights, dtype=float).ravel()
        if weights.shape != values.shape:
            raise DomainError("weights must match samples")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise DomainError("weights must be positive and finite")
    uniq, inverse = np.unique(values, return_inverse=True)
    merged = np.bincount(inverse, weights=weights, minlength=uniq.size)
    return Empirical(uniq, merged)


# ---------------------------------------------------------------------------
# stochastic-order checks


class OrderCheckReport:
    """Outcome of a stochastic-order check on a merged evaluation grid."""

    __slots__ = ("holds", "max_violation", "witness", "grid_size")

    def __init__(self, holds, max_violation, witness, grid_size):
        self.holds = bool(holds)
        self.max_violation = float(max_violation)
        self.witness = float(witness)
        self.grid_size = int(grid_size)

    def __repr__(self):
        return (
            f"OrderCheckReport(holds={self.holds}, max_violation={self.max_violation:.3g}, "
            f"witness={self.witness:.6g}, grid_size={self.grid_size})"
        )


def _atom_points(d: Dist) -> np.ndarray:
    if isinstance(d, Empirical):
        return d.values
    if isinstance(d, QuantileGrid):
        return d.xs
    return np.empty(0)


def _merged_grid(f: Dist, g: Dist, grid_size: int, trunc: float = DEFAULT_TRUNC):
    us = np.clip(_midpoints(grid_size), 1.0 - trunc, trunc)
    pieces = [f.quantile_left(us), g.quantile_left(us), _atom_points(f), _atom_points(g)]
    for d in (f, g):
        for endp in (d.support_lo, d.support_hi):
            if math.isfinite(endp):
                pieces.append(np.array([endp]))
    ts = np.concatenate(pieces)
    ts = ts[np.isfinite(ts)]
    return np.unique(ts)


def _default_order_tol(f: Dist, g: Dist, grid_size: int) -> float:
    if f.kind in _PARAMETRIC_KINDS and g.kind in _PARAMETRIC_KINDS:
        return 1e-9
    return 2.0 / grid_size


def check_st(f: Dist, g: Dist, grid_size: int = 2048, tol: float | None = None) -> OrderCheckReport:
    """Check usual stochastic order ``F <= G`` (i.e. ``F(t) >= G(t)`` for all t).

    Evaluated on the union of both quantile grids and all atoms. The
    default tolerance is ``1e-9`` for parametric pairs and
    ``2/grid_size`` when an empirical or grid kind is involved.
    """
    if tol is None:
        tol = _default_order_tol(f, g, grid_size)
    ts = _merged_grid(f, g, grid_size)
    d = np.asarray(f.cdf(ts)) - np.asarray(g.cdf(ts))
    i = int(np.argmin(d))
    mv = max(0.0, float(-d[i]))
    return OrderCheckReport(mv <= tol, mv, ts[i], ts.size)


def check_ss(f: Dist, g: Dist, grid_size: int = 2048, tol: float | None = None) -> OrderCheckReport:
    """Check strong stochastic order: ``F - G`` nonincreasing above ``G``'s lower endpoint.

    Equivalent to ``G(y) - G(x) >= F(y) - F(x)`` for all
    ``y >= x >= G^{-1}(0)``. The reported violation is the largest
    positive increase of ``F - G`` along the merged grid.
    """
    if tol is None:
        tol = _default_order_tol(f, g, grid_size)
    ts = _merged_grid(f, g, grid_size)
    lo = g.support_lo
    if math.isfinite(lo):
        ts = ts[ts >= lo]
        if ts.size == 0 or ts[0] > lo:
            ts = np.concatenate(([lo], ts))
    d = np.asarray(f.cdf(ts)) - np.asarray(g.cdf(ts))
    inc = d - np.minimum.accumulate(d)
    j = int(np.argmax(inc))
    mv = max(0.0, float(inc[j]))
    return OrderCheckReport(mv <= tol, mv, ts[j], ts.size)


def isotonic_pair_projection(f_hat: Dist, g_hat: Dist, w_f: float = 1.0, w_g: float = 1.0):
    """Project a CDF pair onto the stochastic-order cone ``F >= G`` pointwise.

    At every grid threshold where the estimates already satisfy
    ``F(t) >= G(t)`` they are left untouched; where they cross, both are
    replaced by the weighted average, which is the weighted
    least-squares optimum under the constraint at that threshold. The
    curves are re-monotonized and returned as a pair of empirical
    distributions on the merged atom grid.
    """
    if not (w_f > 0 and w_g > 0):
        raise DomainError("projection weights must be positive")
    if f_hat.kind not in ("empirical", "grid") or g_hat.kind not in ("empirical", "grid"):
        raise DomainError("projection expects empirical or grid inputs")
    ts = np.unique(np.concatenate([_atom_points(f_hat), _atom_points(g_hat)]))
    fv = np.asarray(f_hat.cdf(ts), dtype=float)
    gv = np.asarray(g_hat.cdf(ts), dtype=float)
    pooled = (w_f * fv + w_g * gv) / (w_f + w_g)
    cross = fv < gv
    fs = np.where(cross, pooled, fv)
    gs = np.where(cross, pooled, gv)
    fs = np.clip(np.maximum.accumulate(fs), 0.0, 1.0)
    gs = np.clip(np.maximum.accumulate(gs), 0.0, 1.0)
    fs[-1] = 1.0
    gs[-1] = 1.0
    return _empirical_from_cdf(ts, fs), _empirical_from_cdf(ts, gs)


def _empirical_from_cdf(ts, cdf_vals):
    w = np.diff(np.concatenate(([0.0], cdf_vals)))
    keep = w > 0
    return Empirical(ts[keep], w[keep])


# ---------------------------------------------------------------------------
# tail risk measures


def _norm_pdf(z):
    return np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def _quantile_integral(d: Dist, a: float, b: float) -> float:
    """Exact ``\\int_a^b F^{-1}(u) du`` over the quantile representation.

    Returns ``inf`` when the integral diverges (heavy Pareto tail at
    ``b = 1``).
    """
    if isinstance(d, Uniform):
        return d.lo * (b - a) + 0.5 * (d.hi - d.lo) * (b * b - a * a)
    if isinstance(d, Normal):
        za = ndtri(a) if a > 0.0 else -math.inf
        zb = ndtri(b) if b < 1.0 else math.inf
        pa = _norm_pdf(za) if math.isfinite(za) else 0.0
        pb = _norm_pdf(zb) if math.isfinite(zb) else 0.0
        return d.mean * (b - a) + d.sd * (pa - pb)
    if isinstance(d, Pareto):
        if b >= 1.0 and d.shape <= 1.0:
            return math.inf
        if d.shape == 1.0:
            return d.scale * math.log((1.0 - a) / (1.0 - b))
        e = 1.0 - 1.0 / d.shape
        anti = lambda u: -d.scale * (1.0 - u) ** e / e
        top = 0.0 if b >= 1.0 else anti(b)
        return top - anti(a)
    if isinstance(d, Empirical):
        hi = d._cumw
        lo = np.concatenate(([0.0], d._cumw[:-1]))
        w = np.maximum(np.minimum(hi, b) - np.maximum(lo, a), 0.0)
        return float(np.dot(d.values, w))
    if isinstance(d, QuantileGrid):
        # segments: flat below us[0], linear between nodes, flat above us[-1]
        ul = np.concatenate(([0.0], d.us))
        ur = np.concatenate((d.us, [1.0]))
        xl = np.concatenate(([d.xs[0]], d.xs))
        xr = np.concatenate(([d.xs[0]], d.xs[1:], [d.xs[-1]]))
        lo = np.clip(a, ul, ur)
        hi = np.clip(b, ul, ur)
        width = np.where(ur > ul, ur - ul, 1.0)
        q_lo = xl + (xr - xl) * (lo - ul) / width
        q_hi = xl + (xr - xl) * (hi - ul) / width
        return float(np.sum(0.5 * (q_lo + q_hi) * np.maximum(hi - lo, 0.0)))
    raise DomainError(f"unsupported kind {d.kind!r}")


def es_eval(d: Dist, p: float) -> float:
    """Expected shortfall at level ``p``: the mean of the upper ``p`` tail.

    Returns ``inf`` explicitly when the tail mean diverges.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError("es level must lie in (0, 1)")
    return _quantile_integral(d, p, 1.0) / (1.0 - p)


def rvar_eval(d: Dist, p: float, q: float) -> float:
    """Range value-at-risk: the average of the quantile over ``[p, q]``."""
    p, q = float(p), float(q)
    if not (0.0 <= p < q < 1.0):
        raise DomainError("rvar levels require 0 <= p < q < 1")
    return _quantile_integral(d, p, q) / (q - p)


# ---------------------------------------------------------------------------
# file formats


def read_empirical_csv(path) -> Empirical:
    """Read observations from a CSV with header ``value`` or ``value,weight``."""
    values, weights = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[0].strip().lower() != "value":
            raise DomainError(f"{path}: expected header 'value[,weight]'")
        has_w = len(header) > 1 and header[1].strip().lower() == "weight"
        for row in reader:
            if not row:
                continue
            values.append(float(row[0]))
            weights.append(float(row[1]) if has_w else 1.0)
    return empirical_from_samples(np.asarray(values), np.asarray(weights))


def write_grid_csv(d: Dist, path, *, n: int = DEFAULT_GRID_N, trunc: float = DEFAULT_TRUNC):
    """Write the quantile table of ``d`` as a CSV with header ``u,x``."""
    grid = d if isinstance(d, QuantileGrid) else to_grid(d, n, trunc)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["u", "x"])
        for u, x in zip(grid.us, grid.xs):
            writer.writerow([f"{float(u):.12g}", f"{float(x):.12g}"])
