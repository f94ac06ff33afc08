"""Scalar special functions: Legendre and Hermite polynomials, the Mexican
weight family and the bi-infinite level sum.

Hermite polynomials follow the physicists' convention throughout,
``H_{n+1}(x) = 2x H_n(x) - 2n H_{n-1}(x)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError

_ENDPOINT_SLACK = 1e-12
LEGENDRE_MAX_DEGREE = 10**7
DEFAULT_HALF_WIDTH = 40


class WeightVariant(str, enum.Enum):
    SQUARED_ARGUMENT = "squared"
    EXACT_LAPLACIAN = "laplacian"


@dataclass(frozen=True)
class WeightParams:
    """Shape parameter ``s`` and which harmonic argument the weight uses.

    ``SQUARED_ARGUMENT`` evaluates ``f_s(l / B^j)`` with ``f_s(x) = x^{2s} e^{-x^2}``;
    ``EXACT_LAPLACIAN`` replaces ``(l/B^j)^2`` by the Laplacian eigenvalue
    ``l(l+1)/B^{2j}``.
    """

    s: int
    variant: WeightVariant = WeightVariant.SQUARED_ARGUMENT

    def __post_init__(self):
        if int(self.s) != self.s or self.s < 1:
            raise DomainError(f"shape parameter s must be a positive integer, got {self.s}")
        object.__setattr__(self, "variant", WeightVariant(self.variant))


def legendre_eval(l: int, x):
    """Legendre polynomial ``P_l(x)`` by the upward three-term recurrence.

    Parameters
    ----------
    l : int
        Degree, ``0 <= l <= 1e7``.
    x : float or ndarray
        Points in ``[-1, 1]``; values within 1e-12 outside are clamped.

    Returns
    -------
    float or ndarray
    """
    if l < 0 or int(l) != l:
        raise DomainError(f"degree must be a nonnegative integer, got {l}")
    if l > LEGENDRE_MAX_DEGREE:
        raise DomainError(f"degree {l} exceeds supported maximum {LEGENDRE_MAX_DEGREE}")
    xa = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(xa) > 1.0 + _ENDPOINT_SLACK):
        raise DomainError("Legendre argument outside [-1, 1]")
    xa = np.clip(xa, -1.0, 1.0)
    p0 = np.ones_like(xa)
    if l == 0:
        return _scalar_or_array(p0, x)
    p1 = xa.copy()
    for k in range(1, int(l)):
        p0, p1 = p1, ((2 * k + 1) * xa * p1 - k * p0) / (k + 1)
    return _scalar_or_array(p1, x)


def legendre_table(L: int, x) -> np.ndarray:
    """All of ``P_0 .. P_L`` at ``x``; shape ``(L + 1, *x.shape)``."""
    xa = np.clip(np.asarray(x, dtype=np.float64), -1.0, 1.0)
    out = np.empty((L + 1,) + xa.shape)
    out[0] = 1.0
    if L >= 1:
        out[1] = xa
    for k in range(1, L):
        out[k + 1] = ((2 * k + 1) * xa * out[k] - k * out[k - 1]) / (k + 1)
    return out


def hermite_eval(n: int, x):
    """Physicists' Hermite polynomial ``H_n(x)`` by recurrence.

    Float64 overflows once ``|H_n(x)|`` exceeds ~1.8e308; for moderate ``n``
    that happens near ``|2x|^n ~ 1e308`` (e.g. ``n = 15`` at ``|x| ~ 1.3e20``).
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"Hermite degree must be a nonnegative integer, got {n}")
    xa = np.asarray(x, dtype=np.float64)
    h0 = np.ones_like(xa)
    if n == 0:
        return _scalar_or_array(h0, x)
    h1 = 2.0 * xa
    for k in range(1, int(n)):
        h0, h1 = h1, 2.0 * xa * h1 - 2.0 * k * h0
    return _scalar_or_array(h1, x)


def hermite_odd_explicit(n: int, x):
    """Odd-degree Hermite polynomial from its finite power sum.

    ``H_n(x) = n! sum_r (-1)^{m-r} (2x)^{2r+1} / ((2r+1)! (m-r)!)``, ``m = (n-1)/2``.
    Kept independent of :func:`hermite_eval` so each can check the other.
    """
    if n < 1 or n % 2 == 0:
        raise DomainError(f"explicit sum needs odd n >= 1, got {n}")
    m = (n - 1) // 2
    xa = np.asarray(x, dtype=np.float64)
    terms = [
        (-1) ** (m - r) * math.factorial(n) / (math.factorial(2 * r + 1) * math.factorial(m - r)) * (2.0 * xa) ** (2 * r + 1)
        for r in range(m + 1)
    ]
    return _scalar_or_array(np.sum(terms, axis=0), x)


def hermite_bound_constant(n: int) -> float:
    """``C'_n = n! sum_k 2^{2k+1} / ((2k+1)! ((n-1)/2-k)!)`` for odd ``n``.

    Bounds ``|H_n(x)| <= C'_n |x|^n`` for ``|x| > 1`` and ``|H_n(x)| <= C'_n``
    for ``|x| <= 1``.
    """
    if n < 1 or n % 2 == 0:
        raise DomainError(f"bound constant defined for odd n >= 1, got {n}")
    m = (n - 1) // 2
    return float(
        math.factorial(n)
        * sum(2.0 ** (2 * k + 1) / (math.factorial(2 * k + 1) * math.factorial(m - k)) for k in range(m + 1))
    )


def mexican_f(s: int, x):
    """``f_s(x) = x^{2s} exp(-x^2)``."""
    xa = np.asarray(x, dtype=np.float64)
    return xa ** (2 * s) * np.exp(-xa * xa)


def weight_f(w: WeightParams, B: float, j: int, l):
    """Weight of the needlet at (possibly fractional) degree ``l`` on level ``j``."""
    if not B > 1.0:
        raise DomainError(f"scale factor B must exceed 1, got {B}")
    la = np.asarray(l, dtype=np.float64)
    if np.any(la < 0):
        raise DomainError("degree must be nonnegative")
    if w.variant is WeightVariant.SQUARED_ARGUMENT:
        out = mexican_f(w.s, la / float(B) ** j)
    else:
        lam = la * (la + 1.0) / float(B) ** (2 * j)
        out = lam**w.s * np.exp(-lam)
    return _scalar_or_array(out, l)


def eta(s: int) -> float:
    """``Gamma(2s) / 2^{2s}`` using the exact integer factorial."""
    if int(s) != s or s < 1:
        raise DomainError(f"s must be a positive integer, got {s}")
    return math.factorial(2 * s - 1) / 4.0**s


def eta_quadrature(s: int) -> float:
    """Independent quadrature value of ``2 * int_0^inf f_s(t)^2 dt / t``.

    The factor 2 is what makes ``eta`` the Riemann limit of
    ``2 log B * level_sum`` as ``B -> 1``; the bare integral is ``eta(s) / 2``.
    """
    if int(s) != s or s < 1:
        raise DomainError(f"s must be a positive integer, got {s}")

    def integrand(t):
        return t ** (4 * s - 1) * math.exp(-2.0 * t * t)

    peak = math.sqrt(s - 0.25)
    parts = [(0.0, peak), (peak, 4.0 * peak + 4.0), (4.0 * peak + 4.0, math.inf)]
    total = math.fsum(integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-13, limit=200)[0] for a, b in parts)
    return 2.0 * total


def default_half_width(s: int, B: float) -> int:
    """Truncation half-width making both tails of the level sum < 1e-22 relative.

    Toward fine levels the terms decay only geometrically, like ``B^{-4s k}``,
    so the width must grow like ``1 / (s log B)`` as ``B -> 1``.
    """
    fine_side = math.ceil(22.0 * math.log(10.0) / (4.0 * s * math.log(B))) + 1
    coarse_side = math.ceil(math.log(60.0) / (2.0 * math.log(B))) + 1
    return max(DEFAULT_HALF_WIDTH, fine_side, coarse_side)


def level_sum(s: int, B: float, x: float, j_half_width: int | None = None) -> float:
    """``sum_j f_s(x / B^j)^2`` truncated to ``|j - j*| <= j_half_width``.

    ``j* = round(log_B x)`` is the dominant level. ``None`` picks
    :func:`default_half_width`, which is never below 40.
    """
    if not B > 1.0:
        raise DomainError(f"scale factor B must exceed 1, got {B}")
    if not x > 0.0:
        raise DomainError(f"x must be positive, got {x}")
    if j_half_width is None:
        j_half_width = default_half_width(s, B)
    if j_half_width < 1:
        raise DomainError("j_half_width must be >= 1")
    j_star = round(math.log(x) / math.log(B))
    js = np.arange(j_star - j_half_width, j_star + j_half_width + 1, dtype=np.float64)
    vals = mexican_f(s, x / float(B) ** js) ** 2
    return math.fsum(vals.tolist())


def _scalar_or_array(result, like):
    if np.ndim(like) == 0:
        return float(result)
    return result
