"""Hot loops: sums of a coefficient vector against a three-term recurrence.

Every kernel evaluates, for each point ``i``,

    S_i = sum_{l=0}^{L-1} c_l y_l(t_i),   y_{l+1} = alpha_l t y_l - gamma_l y_{l-1},

with per-point starting values ``y_0, y_1``. Legendre series use
``alpha_l = (2l+1)/(l+1)``, ``gamma_l = l/(l+1)``; the half-angle sine sums use
``alpha = 2``, ``gamma = 1``. Summation runs in increasing ``l`` for every
point, so results do not depend on the thread count.

Each kernel has a numba body (parallel over points) and a numpy body
(vectorised over points, python loop over ``l``).
"""

from __future__ import annotations

import numpy as np

from . import _accel
from ._dd import dd_add, dd_div_exact, dd_mul, dd_sub


def _series_dd_numpy(c_hi, c_lo, a_hi, a_lo, g_hi, g_lo, t_hi, t_lo, y0_hi, y0_lo, y1_hi, y1_lo):
    L = c_hi.shape[0]
    ph, pl = y0_hi.copy(), y0_lo.copy()
    qh, ql = y1_hi.copy(), y1_lo.copy()
    sh, sl = dd_mul(c_hi[0], c_lo[0], ph, pl)
    for l in range(1, L):
        th, tl = dd_mul(c_hi[l], c_lo[l], qh, ql)
        sh, sl = dd_add(sh, sl, th, tl)
        if l + 1 < L:
            uh, ul = dd_mul(a_hi[l], a_lo[l], t_hi, t_lo)
            uh, ul = dd_mul(uh, ul, qh, ql)
            vh, vl = dd_mul(g_hi[l], g_lo[l], ph, pl)
            nh, nl = dd_sub(uh, ul, vh, vl)
            ph, pl, qh, ql = qh, ql, nh, nl
    return np.asarray(sh, dtype=np.float64), np.asarray(sl, dtype=np.float64)


def _series_f64_numpy(c, a, g, t, y0, y1):
    L = c.shape[0]
    p = y0.copy()
    q = y1.copy()
    s = c[0] * p
    for l in range(1, L):
        s = s + c[l] * q
        if l + 1 < L:
            p, q = q, a[l] * t * q - g[l] * p
    return s


if _accel.HAVE_NUMBA:
    from numba import njit, prange

    @njit(parallel=True, cache=True)
    def _series_dd_numba(c_hi, c_lo, a_hi, a_lo, g_hi, g_lo, t_hi, t_lo, y0_hi, y0_lo, y1_hi, y1_lo):
        n = t_hi.shape[0]
        L = c_hi.shape[0]
        out_hi = np.empty(n)
        out_lo = np.empty(n)
        for i in prange(n):
            ph, pl = y0_hi[i], y0_lo[i]
            qh, ql = y1_hi[i], y1_lo[i]
            sh, sl = dd_mul(c_hi[0], c_lo[0], ph, pl)
            for l in range(1, L):
                th, tl = dd_mul(c_hi[l], c_lo[l], qh, ql)
                sh, sl = dd_add(sh, sl, th, tl)
                if l + 1 < L:
                    uh, ul = dd_mul(a_hi[l], a_lo[l], t_hi[i], t_lo[i])
                    uh, ul = dd_mul(uh, ul, qh, ql)
                    vh, vl = dd_mul(g_hi[l], g_lo[l], ph, pl)
                    nh, nl = dd_sub(uh, ul, vh, vl)
                    ph, pl, qh, ql = qh, ql, nh, nl
            out_hi[i] = sh
            out_lo[i] = sl
        return out_hi, out_lo

    @njit(parallel=True, cache=True)
    def _series_f64_numba(c, a, g, t, y0, y1):
        n = t.shape[0]
        L = c.shape[0]
        out = np.empty(n)
        for i in prange(n):
            p = y0[i]
            q = y1[i]
            s = c[0] * p
            for l in range(1, L):
                s += c[l] * q
                if l + 1 < L:
                    nxt = a[l] * t[i] * q - g[l] * p
                    p = q
                    q = nxt
            out[i] = s
        return out


def _as1d(x):
    return np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=np.float64)))


def series_dd(coef, alpha, gamma, t, y0, y1, *, use_numba=None):
    """Double-double recurrence series; every argument is a ``(hi, lo)`` pair.

    Returns ``(hi, lo)`` arrays shaped like ``t[0]``.
    """
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    args = [_as1d(part) for pair in (coef, alpha, gamma, t, y0, y1) for part in pair]
    if len(args[0]) == 0:
        z = np.zeros_like(args[6])
        return z, z.copy()
    if use_numba:
        _accel.apply_thread_cap()
        return _series_dd_numba(*args)
    return _series_dd_numpy(*args)


def series_f64(coef, alpha, gamma, t, y0, y1, *, use_numba=None):
    """Float64 recurrence series with naive accumulation."""
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    args = [_as1d(v) for v in (coef, alpha, gamma, t, y0, y1)]
    if len(args[0]) == 0:
        return np.zeros_like(args[3])
    if use_numba:
        _accel.apply_thread_cap()
        return _series_f64_numba(*args)
    return _series_f64_numpy(*args)


_LEGENDRE_CACHE: dict[int, tuple] = {}


def legendre_recurrence(L: int):
    """Double-double ``alpha_l, gamma_l`` for Legendre polynomials, ``l < L``."""
    cached = _LEGENDRE_CACHE.get(L)
    if cached is not None:
        return cached
    l = np.arange(max(L, 1), dtype=np.float64)
    alpha = dd_div_exact(2.0 * l + 1.0, l + 1.0)
    gamma = dd_div_exact(l, l + 1.0)
    _LEGENDRE_CACHE[L] = (alpha, gamma)
    return alpha, gamma
