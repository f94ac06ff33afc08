"""Double-double arithmetic built from error-free transformations.

A value is carried as an unevaluated pair ``(hi, lo)`` with ``|lo| <= ulp(hi)/2``,
giving roughly 106 bits of significand. Every function works elementwise on
float64 scalars or numpy arrays, and is also compilable by numba.

No FMA is assumed: products use Dekker splitting. Inputs must stay below
~1e300 in magnitude for the split to be exact.
"""

from __future__ import annotations

import numpy as np

from ._accel import register_jitable

_SPLITTER = 134217729.0  # 2**27 + 1


@register_jitable
def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


@register_jitable
def quick_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    err = b - (s - a)
    return s, err


@register_jitable
def split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


@register_jitable
def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


@register_jitable
def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


@register_jitable
def dd_sub(ah, al, bh, bl):
    return dd_add(ah, al, -bh, -bl)


@register_jitable
def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


def dd_div_exact(a, b):
    """Quotient of two float64 arrays as a double-double pair."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    q = a / b
    p, e = two_prod(q, b)
    lo = ((a - p) - e) / b
    return quick_two_sum(q, lo)


def from_mpf(values) -> tuple[np.ndarray, np.ndarray]:
    """Round a sequence of mpmath numbers to double-double arrays."""
    hi = np.array([float(v) for v in values], dtype=np.float64)
    lo = np.array([float(v - h) for v, h in zip(values, hi)], dtype=np.float64)
    return hi, lo
