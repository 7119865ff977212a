"""Best- and worst-case tail risk of X + Y with known marginals.

Every bound comes in a constrained flavor (couplings with X <= Y) and
an unconstrained flavor (all couplings). Constrained extremes are
attained by the directed coupling of the relevant tail pair;
unconstrained extremes by countermonotone tail pairing (VaR, RVaR,
ess-inf/ess-sup) or by comonotonicity (worst ES). Values are extended
reals: infinities are returned as proper floats, never saturated.

Continuous marginals go through the transport formulas
(scan + golden refinement); marginals with atoms go through discrete
coupling plans, whose min/max/fractional-mean order statistics give the
same bounds at grid resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._search import refine_max, refine_min
from .coupling import (
    DEFAULT_SCAN_N,
    TransportEvaluator,
    dl_plan_discrete,
)
from .dist import (
    DEFAULT_GRID_N,
    DEFAULT_TRUNC,
    Dist,
    Empirical,
    es_eval,
    lower_tail,
    negate_dist,
    upper_tail,
)
from .errors import DegenerateSpreadError, DomainError

__all__ = [
    "BoundReport",
    "worst_ess_inf_constrained",
    "best_ess_sup_constrained",
    "worst_ess_inf_unconstrained",
    "best_ess_sup_unconstrained",
    "worst_var_constrained",
    "best_var_constrained",
    "worst_var_unconstrained",
    "best_var_unconstrained",
    "worst_es_constrained",
    "worst_es_unconstrained",
    "best_es_constrained",
    "best_es_unconstrained",
    "worst_rvar_constrained",
    "best_rvar_constrained",
    "worst_rvar_unconstrained",
    "best_rvar_unconstrained",
    "prob_upper",
    "prob_lower",
    "prob_upper_unconstrained",
    "prob_lower_unconstrained",
    "du_reduction",
    "bound_report",
    "dl_sum_var",
    "ct_sum_var",
    "ct_sum_values",
]

_X_SCAN_N = 1024


def _has_atoms(d: Dist) -> bool:
    return isinstance(d, Empirical)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError("level p must lie in (0, 1)")
    return p


def _check_pq(p: float, q: float, *, allow_p0: bool) -> tuple[float, float]:
    p, q = float(p), float(q)
    lo_ok = p >= 0.0 if allow_p0 else p > 0.0
    if not (lo_ok and p < q < 1.0):
        kind = "0 <= p < q < 1" if allow_p0 else "0 < p < q < 1"
        raise DomainError(f"rvar levels require {kind}")
    return p, q


def _midlevels(n: int) -> np.ndarray:
    return (np.arange(int(n)) + 0.5) / int(n)


# ---------------------------------------------------------------------------
# fractional order-statistic means over sorted plan sums


def _lower_frac_mean(sorted_vals: np.ndarray, frac: float) -> float:
    """Mean of the lowest ``frac`` of the mass (uniform atoms, sorted input)."""
    n = sorted_vals.size
    if not 0.0 < frac <= 1.0 + 1e-12:
        raise DomainError("fraction must lie in (0, 1]")
    m = min(frac, 1.0) * n
    k = int(math.floor(m))
    total = float(np.sum(sorted_vals[:k]))
    if k < n and m > k:
        total += (m - k) * float(sorted_vals[k])
    return total / m


def _upper_frac_mean(sorted_vals: np.ndarray, frac: float) -> float:
    return -_lower_frac_mean(-sorted_vals[::-1], frac)


# ---------------------------------------------------------------------------
# essential bounds


def worst_ess_inf_constrained(
    f: Dist,
    g: Dist,
    *,
    grid_n: int = DEFAULT_GRID_N,
    scan_n: int = _X_SCAN_N,
    trunc: float = DEFAULT_TRUNC,
    evaluator: TransportEvaluator | None = None,
) -> float:
    """Largest essential infimum of X + Y over couplings with X <= Y.

    Continuous route: min of the transport objective T(x) + x over
    [F^{-1}(0), G^{-1}(0)] capped by 2 G^{-1}(0); equals the essential
    infimum of the directed-coupling sum. Marginals with atoms route
    through the discrete plan minimum instead.
    """
    if _has_atoms(f) or _has_atoms(g):
        plan = dl_plan_discrete(f, g, grid_n, 0.0, trunc=trunc)
        return float(plan.sums_sorted[0])
    b = float(g.quantile_left(0.0))
    if b == -math.inf:
        return -math.inf
    cap = 2.0 * b
    a = float(f.quantile_left(0.0))
    if a == -math.inf:
        a = float(f.quantile_left(1.0 - trunc))
    if a > b:
        a = b
    ev = evaluator or TransportEvaluator(
        f, g, scan_n=max(scan_n, DEFAULT_SCAN_N), trunc=trunc
    )
    xs = np.linspace(a, b, scan_n + 1)
    obj = ev.upper_many(xs) + xs
    inner = refine_min(
        lambda x: ev.upper(float(x)) + float(x),
        xs,
        obj,
        tol=1e-8 * max(1.0, b - a),
    )
    return float(min(inner, cap))


def best_ess_sup_constrained(
    f: Dist,
    g: Dist,
    *,
    grid_n: int = DEFAULT_GRID_N,
    scan_n: int = _X_SCAN_N,
    trunc: float = DEFAULT_TRUNC,
) -> float:
    """Smallest essential supremum of X + Y over couplings with X <= Y.

    Mirror of :func:`worst_ess_inf_constrained` through the reflection
    identity best(F, G) = -worst(negate(G), negate(F)).
    """
    if _has_atoms(f) or _has_atoms(g):
        plan = dl_plan_discrete(f, g, grid_n, 0.0, trunc=trunc)
        return float(plan.sums_sorted[-1])
    if f.support_hi == math.inf or g.support_hi == math.inf:
        return math.inf
    fr = negate_dist(g, grid_n=grid_n, trunc=trunc)
    gr = negate_dist(f, grid_n=grid_n, trunc=trunc)
    return -worst_ess_inf_constrained(
        fr, gr, grid_n=grid_n, scan_n=scan_n, trunc=trunc
    )


def worst_ess_inf_unconstrained(
    f: Dist, g: Dist, *, scan_n: int = _X_SCAN_N
) -> float:
    """Largest essential infimum over all couplings: countermonotone value."""
    us = np.linspace(0.0, 1.0, scan_n + 1)
    obj = np.asarray(f.quantile_left(us)) + np.asarray(g.quantile_left(1.0 - us))
    fn = lambda u: float(f.quantile_left(float(u))) + float(
        g.quantile_left(1.0 - float(u))
    )
    return float(refine_min(fn, us, obj, tol=1e-10))


def best_ess_sup_unconstrained(
    f: Dist, g: Dist, *, scan_n: int = _X_SCAN_N
) -> float:
    """Smallest essential supremum over all couplings: countermonotone value."""
    us = np.linspace(0.0, 1.0, scan_n + 1)
    obj = np.asarray(f.quantile_left(us)) + np.asarray(g.quantile_left(1.0 - us))
    fn = lambda u: float(f.quantile_left(float(u))) + float(
        g.quantile_left(1.0 - float(u))
    )
    return float(refine_max(fn, us, obj, tol=1e-10))


# ---------------------------------------------------------------------------
# VaR bounds


def worst_var_constrained(
    f: Dist,
    g: Dist,
    p: float,
    *,
    grid_n: int = DEFAULT_GRID_N,
    scan_n: int = _X_SCAN_N,
    trunc: float = DEFAULT_TRUNC,
) -> float:
    """Worst-case VaR at level p under the order constraint.

    Reduces to the worst essential infimum of the upper p-tails; for
    marginals with atoms the discrete tail plan minimum is used.
    """
    p = _check_p(p)
    if _has_atoms(f) or _has_atoms(g):
        plan = dl_plan_discrete(f, g, grid_n, p, trunc=trunc)
        return float(plan.sums_sorted[0])
    fp = upper_tail(f, p, grid_n=grid_n, trunc=trunc)
    gp = upper_tail(g, p, grid_n=grid_n, trunc=trunc)
    return worst_ess_inf_constrained(
        fp, gp, grid_n=grid_n, scan_n=scan_n, trunc=trunc
    )


def best_var_constrained(
    f: Dist,
    g: Dist,
    p: float,
    *,
    grid_n: int = DEFAULT_GRID_N,
    scan_n: int = _X_SCAN_N,
    trunc: float = DEFAULT_TRUNC,
) -> float:
    """Best-case VaR at level p under the order constraint.

    Reduces to the best essential supremum of the lower p-tails. The
    same value serves the left and the right quantile for continuous
    strictly increasing marginals.
    """
    p = _check_p(p)
    fl = lower_tail(f, p, grid_n=grid_n, trunc=trunc)
    gl = lower_tail(g, p, grid_n=grid_n, trunc=trunc)
    if _has_atoms(f) or _has_atoms(g):
        plan = dl_plan_discrete(fl, gl, grid_n, 0.0, trunc=trunc)
        return float(plan.sums_sorted[-1])
    return best_ess_sup_constrained(fl, gl, grid_n=grid_n, scan_n=scan_n, trunc=trunc)


def worst_var_unconstrained(
    f: Dist, g: Dist, p: float, *, scan_n: int = _X_SCAN_N
) -> float:
    """Worst-case VaR over all couplings: countermonotone upper tails."""
    p = _check_p(p)
    xs = np.linspace(0.0, 1.0 - p, scan_n + 1)
    obj = np.asarray(f.quantile_left(np.clip(p + xs, 0.0, 1.0))) + np.asarray(
        g.quantile_left(1.0 - xs)
    )
    fn = lambda x: float(f.quantile_left(min(1.0, p + float(x)))) + float(
        g.quantile_left(1.0 - float(x))
    )
    return float(refine_min(fn, xs, obj, tol=1e-10))


def best_var_unconstrained(
    f: Dist, g: Dist, p: float, *, scan_n: int = _X_SCAN_N
) -> float:
    """Best-case VaR over all couplings: countermonotone lower tails."""
    p = _check_p(p)
    xs = np.linspace(0.0, p, scan_n + 1)
    obj = np.asarray(f.quantile_left(xs)) + np.asarray(
        g.quantile_left(np.clip(p - xs, 0.0, 1.0))
    )
    fn = lambda x: float(f.quantile_left(float(x))) + float(
        g.quantile_left(max(0.0, p - float(x)))
    )
    return float(refine_max(fn, xs, obj, tol=1e-10))


# ---------------------------------------------------------------------------
# ES bounds


def worst_es_constrained(f: Dist, g: Dist, p: float, **_ignored) -> float:
    """Worst-case ES at level p: ES_p(F) + ES_p(G).

    The order constraint does not improve the worst case (the tail
    generator of ES is the mean, which is coupling-invariant). Infinite
    tail means propagate as inf.
    """
    p = _check_p(p)
    return es_eval(f, p) + es_eval(g, p)


def worst_es_unconstrained(f: Dist, g: Dist, p: float, **_ignored) -> float:
    """Worst-case ES over all couplings; comonotone additivity gives the same sum."""
    return worst_es_constrained(f, g, p)


def best_es_constrained(
    f: Dist,
    g: Dist,
    p: float,
    *,
    grid_n: int = DEFAULT_GRID_N,
    trunc: float = DEFAULT_TRUNC,
) -> float:
    """Best-case ES under the order constraint: ES of the directed-coupling sum."""
    p = _check_p(p)
    plan = dl_plan_discrete(f, g, grid_n, 0.0, trunc=trunc)
    return _upper_frac_mean(plan.sums_sorted, 1.0 - p)


def best_es_unconstrained(
    f: Dist, g: Dist, p: float, *, grid_n: int = DEFAULT_GRID_N, **_ignored
) -> float:
    """Best-case ES over all couplings: ES of the countermonotone sum."""
    p = _check_p(p)
    s = np.sort(ct_sum_values(f, g, grid_n=grid_n))
    return _upper_frac_mean(s, 1.0 - p)


# ---------------------------------------------------------------------------
# RVaR bounds


def worst_rvar_constrained(
    f: Dist,
    g: Dist,
    p: float,
    q: float,
    *,
    grid_n: int = DEFAULT_GRID_N,
    trunc: float = DEFAULT_TRUNC,
) -> float:
    """Worst-case RVaR over [p, q] under the order constraint.

    Mean of the lowest a-fraction of directed-coupling upper-tail sums,
    a = (q-p)/(1-p).
    """
    p, q = _check_pq(p, q, allow_p0=True)
    plan = dl_plan_discrete(f, g, grid_n, p, trunc=trunc)
    a = (q - p) / (1.0 - p)
    return _lower_frac_mean(plan.sums_sorted, a)


def best_rvar_constrained(
    f: Dist,
    g: Dist,
    p: float,
    q: float,
    *,
    grid_n: int = DEFAULT_GRID_N,
    trunc: float = DEFAULT_TRUNC,
) -> float:
    """Best-case RVaR over [p, q] under the order constraint.

    ES at level p/q of the directed coupling of the lower q-tails.
    """
    p, q = _check_pq(p, q, allow_p0=False)
    fl = lower_tail(f, q, grid_n=grid_n, trunc=trunc)
    gl = lower_tail(g, q, grid_n=grid_n, trunc=trunc)
    plan = dl_plan_discrete(fl, gl, grid_n, 0.0, trunc=trunc)
    return _upper_frac_mean(plan.sums_sorted, 1.0 - p / q)


def worst_rvar_unconstrained(
    f: Dist, g: Dist, p: float, q: float, *, grid_n: int = DEFAULT_GRID_N, **_ignored
) -> float:
    """Worst-case RVaR over all couplings: countermonotone upper p-tails."""
    p, q = _check_pq(p, q, allow_p0=True)
    us = p + (1.0 - p) * _midlevels(grid_n)
    s = np.asarray(f.quantile_left(us)) + np.asarray(g.quantile_left(us[::-1]))
    a = (q - p) / (1.0 - p)
    return _lower_frac_mean(np.sort(s), a)


def best_rvar_unconstrained(
    f: Dist, g: Dist, p: float, q: float, *, grid_n: int = DEFAULT_GRID_N, **_ignored
) -> float:
    """Best-case RVaR over all couplings: countermonotone lower q-tails."""
    p, q = _check_pq(p, q, allow_p0=False)
    us = q * _midlevels(grid_n)
    s = np.asarray(f.quantile_left(us)) + np.asarray(g.quantile_left(us[::-1]))
    return _upper_frac_mean(np.sort(s), 1.0 - p / q)


# ---------------------------------------------------------------------------
# reference coupling functionals (plot columns, probability bounds)


def ct_sum_values(f: Dist, g: Dist, *, grid_n: int = DEFAULT_GRID_N) -> np.ndarray:
    """Countermonotone sum evaluated on the midpoint level grid (unsorted)."""
    us = _midlevels(grid_n)
    return np.asarray(f.quantile_left(us)) + np.asarray(g.quantile_left(us[::-1]))


def _sorted_quantile(sorted_vals: np.ndarray, p: float) -> float:
    n = sorted_vals.size
    idx = int(np.searchsorted((np.arange(n) + 1) / n, p, side="left"))
    return float(sorted_vals[min(idx, n - 1)])


def dl_sum_var(
    f: Dist,
    g: Dist,
    p: float,
    *,
    grid_n: int = DEFAULT_GRID_N,
    trunc: float = DEFAULT_TRUNC,
    plan=None,
) -> float:
    """VaR at level p of the directed-coupling sum of the whole marginals."""
    p = _check_p(p)
    if plan is None:
        plan = dl_plan_discrete(f, g, grid_n, 0.0, trunc=trunc)
    return _sorted_quantile(plan.sums_sorted, p)


def ct_sum_var(
    f: Dist, g: Dist, p: float, *, grid_n: int = DEFAULT_GRID_N, values=None
) -> float:
    """VaR at level p of the countermonotone sum of the whole marginals."""
    p = _check_p(p)
    if values is None:
        values = np.sort(ct_sum_values(f, g, grid_n=grid_n))
    return _sorted_quantile(values, p)


# ---------------------------------------------------------------------------
# probability bounds (VaR inversion)


def _invert_nondecreasing(fn, t: float, tol: float = 1e-6) -> float:
    lo, hi = 1e-9, 1.0 - 1e-9
    if fn(lo) > t:
        return 0.0
    if fn(hi) <= t:
        return 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fn(mid) <= t:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def prob_lower(
    f: Dist,
    g: Dist,
    t: float,
    *,
    grid_n: int = DEFAULT_GRID_N,
    scan_n: int = _X_SCAN_N,
    trunc: float = DEFAULT_TRUNC,
    tol: float = 1e-6,
) -> float:
    """Lower bound on P(X+Y <= t) under the order constraint.

    Inverse of the nondecreasing map p -> worst-case VaR_p; clamped to
    {0, 1} outside the attainable range.
    """
    fn = lambda p: worst_var_constrained(
        f, g, p, grid_n=grid_n, scan_n=scan_n, trunc=trunc
    )
    return _invert_nondecreasing(fn, float(t), tol)


def prob_upper(
    f: Dist,
    g: Dist,
    t: float,
    *,
    grid_n: int = DEFAULT_GRID_N,
    scan_n: int = _X_SCAN_N,
    trunc: float = DEFAULT_TRUNC,
    tol: float = 1e-6,
) -> float:
    """Upper bound on P(X+Y <= t) under the order constraint.

    Inverse of the nondecreasing map p -> best-case VaR_p.
    """
    fn = lambda p: best_var_constrained(
        f, g, p, grid_n=grid_n, scan_n=scan_n, trunc=trunc
    )
    return _invert_nondecreasing(fn, float(t), tol)


def prob_lower_unconstrained(
    f: Dist, g: Dist, t: float, *, scan_n: int = _X_SCAN_N, tol: float = 1e-6
) -> float:
    """Lower bound on P(X+Y <= t) over all couplings."""
    fn = lambda p: worst_var_unconstrained(f, g, p, scan_n=scan_n)
    return _invert_nondecreasing(fn, float(t), tol)


def prob_upper_unconstrained(
    f: Dist, g: Dist, t: float, *, scan_n: int = _X_SCAN_N, tol: float = 1e-6
) -> float:
    """Upper bound on P(X+Y <= t) over all couplings."""
    fn = lambda p: best_var_unconstrained(f, g, p, scan_n=scan_n)
    return _invert_nondecreasing(fn, float(t), tol)


# ---------------------------------------------------------------------------
# DU-spread reduction and reporting


def du_reduction(l: float, u: float, lo: float, uo: float):
    """Spread reductions (R_L, R_U, R) of [Lo, Uo] inside [L, U].

    Requires the nesting L <= Lo <= Uo <= U with a finite positive
    spread U - L; otherwise the spread is degenerate or undefined.
    """
    vals = (l, u, lo, uo)
    if not all(math.isfinite(v) for v in vals):
        raise DegenerateSpreadError("spread reduction undefined for infinite bounds")
    if u <= l:
        raise DegenerateSpreadError("spread U - L must be positive")
    if not (l <= lo <= uo <= u):
        raise DomainError("bounds must nest: L <= Lo <= Uo <= U")
    r_l = (lo - l) / (u - l)
    r_u = (u - uo) / (u - l)
    return r_l, r_u, r_l + r_u


_MEASURE_ALIASES = {
    "var": "var",
    "es": "es",
    "rvar": "rvar",
    "essinf": "ess_inf",
    "ess_inf": "ess_inf",
    "esssup": "ess_sup",
    "ess_sup": "ess_sup",
    "prob": "prob",
}

_ATTAINING = {
    "var": "dl_upper_tail",
    "rvar": "dl_upper_tail",
    "es": "comonotone",
    "ess_inf": "dl_upper_tail",
    "ess_sup": "dl_lower_tail",
    "prob": "dl_upper_tail",
}


def _json_num(v):
    if v is None:
        return None
    v = float(v)
    if math.isnan(v):
        return "nan"
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    return v


@dataclass(frozen=True)
class BoundReport:
    """Constrained and unconstrained extremes of one measure at one level."""

    measure: str
    p: float | None
    q: float | None
    t: float | None
    constrained_worst: float | None
    constrained_best: float | None
    unconstrained_worst: float | None
    unconstrained_best: float | None
    r_l: float | None
    r_u: float | None
    r: float | None
    attaining: str
    grid_n: int
    truncation_m: float

    def to_json_dict(self) -> dict:
        return {
            "measure": self.measure,
            "p": self.p,
            "q": self.q,
            "t": self.t,
            "constrained_worst": _json_num(self.constrained_worst),
            "constrained_best": _json_num(self.constrained_best),
            "unconstrained_worst": _json_num(self.unconstrained_worst),
            "unconstrained_best": _json_num(self.unconstrained_best),
            "R_L": _json_num(self.r_l),
            "R_U": _json_num(self.r_u),
            "R": _json_num(self.r),
            "attaining": self.attaining,
            "grid_n": self.grid_n,
            "truncation_m": self.truncation_m,
        }


def bound_report(
    f: Dist,
    g: Dist,
    measure: str,
    *,
    p: float | None = None,
    q: float | None = None,
    t: float | None = None,
    grid_n: int = DEFAULT_GRID_N,
    scan_n: int = _X_SCAN_N,
    trunc: float = DEFAULT_TRUNC,
) -> BoundReport:
    """All four extremes of one measure plus the spread reduction.

    Tiny inversions of the theoretical nesting caused by independent
    grid routes are snapped; genuine violations raise. An infinite or
    degenerate spread leaves the reduction fields unset.
    """
    try:
        measure = _MEASURE_ALIASES[str(measure).lower()]
    except KeyError:
        raise DomainError(f"unknown measure {measure!r}") from None
    kw = dict(grid_n=grid_n, scan_n=scan_n, trunc=trunc)
    plain = dict(grid_n=grid_n, trunc=trunc)
    if measure == "var":
        _check_p(p if p is not None else -1.0)
        cw = worst_var_constrained(f, g, p, **kw)
        cb = best_var_constrained(f, g, p, **kw)
        uw = worst_var_unconstrained(f, g, p, scan_n=scan_n)
        ub = best_var_unconstrained(f, g, p, scan_n=scan_n)
    elif measure == "es":
        _check_p(p if p is not None else -1.0)
        cw = worst_es_constrained(f, g, p)
        uw = cw
        cb = best_es_constrained(f, g, p, **plain)
        ub = best_es_unconstrained(f, g, p, grid_n=grid_n)
    elif measure == "rvar":
        if p is None or q is None:
            raise DomainError("rvar needs both p and q")
        cw = worst_rvar_constrained(f, g, p, q, **plain)
        cb = best_rvar_constrained(f, g, p, q, **plain)
        uw = worst_rvar_unconstrained(f, g, p, q, grid_n=grid_n)
        ub = best_rvar_unconstrained(f, g, p, q, grid_n=grid_n)
    elif measure == "ess_inf":
        cw = worst_ess_inf_constrained(f, g, **kw)
        uw = worst_ess_inf_unconstrained(f, g, scan_n=scan_n)
        cb = ub = float(f.quantile_left(0.0)) + float(g.quantile_left(0.0))
    elif measure == "ess_sup":
        cb = best_ess_sup_constrained(f, g, **kw)
        ub = best_ess_sup_unconstrained(f, g, scan_n=scan_n)
        cw = uw = float(f.quantile_left(1.0)) + float(g.quantile_left(1.0))
    else:
        if t is None:
            raise DomainError("prob needs a threshold t")
        cb = prob_lower(f, g, t, **kw)
        cw = prob_upper(f, g, t, **kw)
        ub = prob_lower_unconstrained(f, g, t, scan_n=scan_n)
        uw = prob_upper_unconstrained(f, g, t, scan_n=scan_n)

    ub, cb, cw, uw = _snap_nesting(ub, cb, cw, uw, grid_n)
    try:
        r_l, r_u, r = du_reduction(ub, uw, cb, cw)
    except DegenerateSpreadError:
        r_l = r_u = r = None
    return BoundReport(
        measure=measure,
        p=None if p is None else float(p),
        q=None if q is None else float(q),
        t=None if t is None else float(t),
        constrained_worst=cw,
        constrained_best=cb,
        unconstrained_worst=uw,
        unconstrained_best=ub,
        r_l=r_l,
        r_u=r_u,
        r=r,
        attaining=_ATTAINING[measure],
        grid_n=int(grid_n),
        truncation_m=float(trunc),
    )


def _snap_nesting(ub, cb, cw, uw, grid_n):
    """Snap sub-resolution inversions of ub <= cb <= cw <= uw."""
    finite = [abs(v) for v in (ub, cb, cw, uw) if math.isfinite(v)]
    scale = max([1.0] + finite)
    tol = scale * (1e-7 + 4.0 / grid_n)
    if math.isfinite(cb) and math.isfinite(ub) and 0.0 < ub - cb <= tol:
        cb = ub
    if math.isfinite(cw) and math.isfinite(cb) and 0.0 < cb - cw <= tol:
        cw = cb
    if math.isfinite(uw) and math.isfinite(cw) and 0.0 < cw - uw <= tol:
        uw = cw
    return ub, cb, cw, uw
