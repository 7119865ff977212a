"""Scan-and-refine minimisation helpers for the bound formulas."""

import numpy as np

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_min(f, a, b, *, tol=1e-10, maxiter=200):
    """Golden-section minimum of ``f`` on ``[a, b]``.

    Returns ``(x, f(x))``. ``inf`` values are tolerated; ``f`` is assumed
    unimodal on the bracket (callers scan a grid first and refine locally).
    """
    a, b = float(a), float(b)
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        fa, fb = f(a), f(b)
        return (a, fa) if fa <= fb else (b, fb)
    a0, b0 = a, b
    fa0, fb0 = f(a0), f(b0)
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(maxiter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b = x2
            x2, f2 = x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
        else:
            a = x1
            x1, f1 = x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
    cands = [(a0, fa0), (b0, fb0), (x1, f1), (x2, f2)]
    cands = [(x, v) for x, v in cands if not np.isnan(v)]
    return min(cands, key=lambda c: c[1])


def refine_min(f, xs, vals, *, tol=1e-10):
    """Minimum of pre-scanned ``vals`` improved by a golden pass on the best bracket."""
    vals = np.where(np.isnan(vals), np.inf, vals)
    k = int(np.argmin(vals))
    if not np.isfinite(vals[k]):
        return float(vals[k])
    lo = xs[max(k - 1, 0)]
    hi = xs[min(k + 1, len(xs) - 1)]

    def g(x):
        v = f(x)
        return np.inf if np.isnan(v) else v

    _, v = golden_min(g, lo, hi, tol=tol)
    return float(min(vals[k], v))


def refine_max(f, xs, vals, *, tol=1e-10):
    neg = refine_min(lambda x: -f(x), xs, -np.asarray(vals, dtype=float), tol=tol)
    return -neg
