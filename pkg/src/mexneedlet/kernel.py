"""The zonal needlet profile and its Fourier-side companions.

Two series normalisations are supported:

* ``HALF_INTEGER``: ``(1/2pi) sum_l f_s(eps(l+1/2)) (l+1/2) P_l(cos t)``
* ``INTEGER``:      ``(1/4pi) sum_l f_s(eps l) (2l+1) P_l(cos t)``

with ``eps = B^{-j}``. Profiles are summed in double-double by default because
the tail checks multiply values by ``exp((t/2eps)^2)``, up to ``e^64``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import _dd
from ._kernels import legendre_recurrence, series_dd, series_f64
from .errors import DomainError, ResourceLimitError
from .special import WeightVariant, hermite_eval

DEFAULT_TAIL_TOL = 1e-30
MAX_SERIES_DEGREE = 50_000_000
_MP_DPS = 40


class SeriesVariant(str, enum.Enum):
    HALF_INTEGER = "half"
    INTEGER = "integer"


class Summation(str, enum.Enum):
    """``COMPENSATED``: double-double recurrence and accumulation.
    ``PLAIN``: float64 recurrence, naive accumulation."""

    COMPENSATED = "compensated"
    PLAIN = "plain"


@dataclass(frozen=True)
class FilterParams:
    B: float
    j: int
    s: int
    series_variant: SeriesVariant = SeriesVariant.HALF_INTEGER
    weight_variant: WeightVariant = WeightVariant.SQUARED_ARGUMENT

    def __post_init__(self):
        if not self.B > 1.0:
            raise DomainError(f"scale factor B must exceed 1, got {self.B}")
        if int(self.s) != self.s or self.s < 1:
            raise DomainError(f"shape parameter s must be a positive integer, got {self.s}")
        if int(self.j) != self.j:
            raise DomainError(f"level j must be an integer, got {self.j}")
        object.__setattr__(self, "series_variant", SeriesVariant(self.series_variant))
        object.__setattr__(self, "weight_variant", WeightVariant(self.weight_variant))

    @property
    def eps(self) -> float:
        return float(self.B) ** (-int(self.j))

    def eps_mp(self):
        return mpmath.mpf(float(self.B)) ** (-int(self.j))

    def with_level(self, j: int) -> "FilterParams":
        return FilterParams(self.B, j, self.s, self.series_variant, self.weight_variant)


# -- series weights ---------------------------------------------------------


def _log_series_weight(eps, s, series_variant, weight_variant, l):
    """log of the (unnormalised) coefficient magnitude at degree ``l``."""
    l = np.asarray(l, dtype=np.float64)
    with np.errstate(divide="ignore"):
        if series_variant is SeriesVariant.HALF_INTEGER:
            u = l + 0.5
            mult = np.log(u)
        else:
            u = l
            mult = np.log(2.0 * l + 1.0)
        if weight_variant is WeightVariant.SQUARED_ARGUMENT:
            x = eps * u
            return 2 * s * np.log(x) - x * x + mult
        lam = u * (u + 1.0) * eps * eps
        return s * np.log(lam) - lam + mult


def _truncation(eps, s, series_variant, weight_variant, tail_tol):
    if not 0.0 < tail_tol < 1.0:
        raise DomainError(f"tail_tol must lie in (0, 1), got {tail_tol}")
    log_tol = math.log(tail_tol)
    n = 64
    while True:
        if n > MAX_SERIES_DEGREE:
            raise ResourceLimitError(f"series truncation degree exceeds {MAX_SERIES_DEGREE}")
        lw = _log_series_weight(eps, s, series_variant, weight_variant, np.arange(n))
        peak = int(np.argmax(lw))
        below = np.nonzero(lw[peak:] < lw[peak] + log_tol)[0]
        if below.size:
            return peak + int(below[0])
        n *= 2


def truncation_degree(params: FilterParams, tail_tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest ``L`` past which every series weight is below ``tail_tol`` of the peak.

    The weights are unimodal in ``l``, so the first sub-threshold degree after
    the peak bounds the whole tail.
    """
    return _truncation(params.eps, params.s, params.series_variant, params.weight_variant, tail_tol)


def degree_weight(params: FilterParams, l):
    """Harmonic weight ``w(l)`` with ``Psi = sum_l w(l) (2l+1)/(4pi) P_l``."""
    l = np.asarray(l, dtype=np.float64)
    u = l + 0.5 if params.series_variant is SeriesVariant.HALF_INTEGER else l
    eps = params.eps
    if params.weight_variant is WeightVariant.SQUARED_ARGUMENT:
        x = eps * u
        return x ** (2 * params.s) * np.exp(-x * x)
    lam = u * (u + 1.0) * eps * eps
    return lam**params.s * np.exp(-lam)


def series_coefficients(params: FilterParams, L: int) -> np.ndarray:
    """Float64 Legendre coefficients ``c_0 .. c_L`` of the profile."""
    l = np.arange(L + 1, dtype=np.float64)
    return degree_weight(params, l) * (2.0 * l + 1.0) / (4.0 * math.pi)


def series_coefficients_dd(params: FilterParams, L: int):
    """Legendre coefficients as double-double ``(hi, lo)`` arrays, computed in mpmath."""
    with mpmath.workdps(_MP_DPS):
        eps = params.eps_mp()
        half = mpmath.mpf(1) / 2
        s = params.s
        coeffs = []
        for l in range(L + 1):
            u = l + half if params.series_variant is SeriesVariant.HALF_INTEGER else mpmath.mpf(l)
            if params.weight_variant is WeightVariant.SQUARED_ARGUMENT:
                x = eps * u
                w = x ** (2 * s) * mpmath.exp(-x * x)
            else:
                lam = u * (u + 1) * eps * eps
                w = lam**s * mpmath.exp(-lam)
            coeffs.append(w * (2 * l + 1) / (4 * mpmath.pi))
        return _dd.from_mpf(coeffs)


# -- Legendre series evaluation ----------------------------------------------


def _cos_dd(thetas):
    with mpmath.workdps(_MP_DPS):
        return _dd.from_mpf([mpmath.cos(mpmath.mpf(float(t))) for t in thetas])


def legendre_series(coef, t, summation: Summation = Summation.PLAIN):
    """Evaluate ``sum_l coef[l] P_l(t)``.

    ``coef`` and ``t`` are float64 arrays for ``PLAIN``, or ``(hi, lo)`` pairs
    (plain arrays are promoted with a zero low part) for ``COMPENSATED``.
    Returns float64 values.
    """
    summation = Summation(summation)
    if summation is Summation.PLAIN:
        c = np.asarray(coef[0] if isinstance(coef, tuple) else coef, dtype=np.float64)
        tt = np.asarray(t[0] if isinstance(t, tuple) else t, dtype=np.float64)
        shape = tt.shape
        tt = np.clip(tt.ravel(), -1.0, 1.0)
        (a_hi, _), (g_hi, _) = legendre_recurrence(len(c))
        out = series_f64(c, a_hi, g_hi, tt, np.ones_like(tt), tt)
        return out.reshape(shape)
    c = coef if isinstance(coef, tuple) else (np.asarray(coef, float), np.zeros(len(coef)))
    if isinstance(t, tuple):
        t_hi, t_lo = (np.asarray(v, dtype=np.float64) for v in t)
    else:
        t_hi = np.clip(np.asarray(t, dtype=np.float64), -1.0, 1.0)
        t_lo = np.zeros_like(t_hi)
    shape = t_hi.shape
    t_hi, t_lo = t_hi.ravel(), t_lo.ravel()
    alpha, gamma = legendre_recurrence(len(c[0]))
    ones = np.ones_like(t_hi)
    hi, lo = series_dd(c, alpha, gamma, (t_hi, t_lo), (ones, np.zeros_like(t_hi)), (t_hi, t_lo))
    return (hi + lo).reshape(shape)


def needlet_profile(
    params: FilterParams,
    theta,
    *,
    summation: Summation = Summation.COMPENSATED,
    l_max: int | None = None,
    tail_tol: float = DEFAULT_TAIL_TOL,
):
    """The zonal profile ``Psi(theta)`` for ``theta`` in ``[0, pi]`` (radians)."""
    th = np.asarray(theta, dtype=np.float64)
    if np.any(~np.isfinite(th)) or np.any(th < 0.0) or np.any(th > math.pi):
        raise DomainError("theta must lie in [0, pi]")
    if l_max is None:
        l_max = truncation_degree(params, tail_tol)
    summation = Summation(summation)
    flat = np.atleast_1d(th).ravel()
    if summation is Summation.COMPENSATED:
        vals = legendre_series(series_coefficients_dd(params, l_max), _cos_dd(flat), summation)
    else:
        vals = legendre_series(series_coefficients(params, l_max), np.cos(flat), summation)
    if th.ndim == 0:
        return float(vals[0])
    return vals.reshape(th.shape)


def tail_envelope(params: FilterParams, theta, hermite_scale: float = 1.0):
    """``exp(-(t/2eps)^2) / eps^2 * (1 + |H_2s(hermite_scale * t / eps)|)``.

    ``hermite_scale=1`` gives ``H_2s(t/eps)``, the form gated by the tail check;
    ``0.5`` gives ``H_2s(t/2eps)``, which is reported alongside.
    """
    eps = params.eps
    th = np.asarray(theta, dtype=np.float64)
    y = th / (2.0 * eps)
    return np.exp(-y * y) / eps**2 * (1.0 + np.abs(hermite_eval(2 * params.s, hermite_scale * th / eps)))


def tail_ratio(params: FilterParams, theta, psi, hermite_scale: float = 1.0):
    """``|Psi| eps^2 exp((t/2eps)^2) / (1 + |H_2s(.)|)`` without forming the envelope.

    Computed in log space so the ratio stays finite where the envelope underflows.
    """
    eps = params.eps
    th = np.asarray(theta, dtype=np.float64)
    y = th / (2.0 * eps)
    h = np.abs(hermite_eval(2 * params.s, hermite_scale * th / eps))
    with np.errstate(divide="ignore", over="ignore"):
        log_r = np.log(np.abs(psi)) + 2.0 * math.log(eps) + y * y - np.log1p(h)
        # far past the certified range roundoff dominates and the ratio may overflow to inf
        return np.exp(log_r)


@dataclass
class KernelProfile:
    params: FilterParams
    thetas: np.ndarray
    values: np.ndarray
    l_max: int
    summation: Summation = Summation.COMPENSATED
    tail_tol: float = field(default=DEFAULT_TAIL_TOL)

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.thetas.shape != self.values.shape or self.thetas.ndim != 1:
            raise DomainError("thetas and values must be 1-d arrays of equal length")
        if self.thetas.size > 1 and np.any(np.diff(self.thetas) <= 0):
            raise DomainError("thetas must be strictly increasing")

    @property
    def envelope(self) -> np.ndarray:
        return tail_envelope(self.params, self.thetas)

    @property
    def ratio(self) -> np.ndarray:
        return tail_ratio(self.params, self.thetas, self.values)

    def truncation_certificate(self) -> float:
        """Max change, relative to ``max |value|``, when ``l_max`` is doubled."""
        doubled = needlet_profile(self.params, self.thetas, summation=self.summation, l_max=2 * self.l_max)
        scale = np.max(np.abs(self.values))
        return float(np.max(np.abs(doubled - self.values)) / scale)


def profile(
    params: FilterParams,
    thetas,
    *,
    summation: Summation = Summation.COMPENSATED,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> KernelProfile:
    """Sample the profile on an increasing grid of angles."""
    l_max = truncation_degree(params, tail_tol)
    th = np.asarray(thetas, dtype=np.float64)
    vals = needlet_profile(params, th, summation=summation, l_max=l_max)
    return KernelProfile(params, th, vals, l_max, Summation(summation), tail_tol)


# -- Fourier side -------------------------------------------------------------


def _check_eps(eps):
    if not eps > 0.0:
        raise DomainError(f"eps must be positive, got {eps}")


def _check_phi(phi):
    ph = np.asarray(phi, dtype=np.float64)
    if np.any(~np.isfinite(ph)) or np.any(ph < 0.0) or np.any(ph > math.pi):
        raise DomainError("phi must lie in [0, pi]")
    return ph


def kappa_direct(
    eps: float,
    s: int,
    phi,
    *,
    summation: Summation = Summation.COMPENSATED,
    l_max: int | None = None,
    tail_tol: float = DEFAULT_TAIL_TOL,
):
    """``K(phi) = sum_l f_s(eps(l+1/2)) (l+1/2) sin((l+1/2) phi)`` by direct summation."""
    _check_eps(eps)
    if int(s) != s or s < 1:
        raise DomainError(f"s must be a positive integer, got {s}")
    ph = _check_phi(phi)
    if l_max is None:
        l_max = _truncation(eps, s, SeriesVariant.HALF_INTEGER, WeightVariant.SQUARED_ARGUMENT, tail_tol)
    flat = np.atleast_1d(ph).ravel()
    L = l_max + 1
    summation = Summation(summation)
    if summation is Summation.COMPENSATED:
        with mpmath.workdps(_MP_DPS):
            e = mpmath.mpf(float(eps))
            half = mpmath.mpf(1) / 2
            coef = _dd.from_mpf(
                [(e * (l + half)) ** (2 * s) * mpmath.exp(-((e * (l + half)) ** 2)) * (l + half) for l in range(L)]
            )
            angles = [mpmath.mpf(float(p)) for p in flat]
            t = _dd.from_mpf([mpmath.cos(a) for a in angles])
            y0 = _dd.from_mpf([mpmath.sin(a / 2) for a in angles])
            y1 = _dd.from_mpf([mpmath.sin(3 * a / 2) for a in angles])
        two = (np.full(L, 2.0), np.zeros(L))
        one = (np.ones(L), np.zeros(L))
        hi, lo = series_dd(coef, two, one, t, y0, y1)
        vals = hi + lo
    else:
        u = np.arange(L) + 0.5
        x = eps * u
        coef = x ** (2 * s) * np.exp(-x * x) * u
        vals = series_f64(coef, np.full(L, 2.0), np.ones(L), np.cos(flat), np.sin(flat / 2), np.sin(1.5 * flat))
    if ph.ndim == 0:
        return float(vals[0])
    return vals.reshape(ph.shape)


def fourier_weight_transform(s: int, eps: float, omega):
    """Real amplitude ``Q`` with ``F[x f_s(eps x)](omega) = (-1)^{s+1} i Q(omega)``.

    ``Q(omega) = sqrt(pi) / (2^{2s+1} eps^2) H_{2s+1}(omega/2eps) exp(-(omega/2eps)^2)``,
    odd in ``omega``. ``s = 0`` (plain Gaussian times ``x``) is allowed.
    """
    _check_eps(eps)
    if int(s) != s or s < 0:
        raise DomainError(f"s must be a nonnegative integer, got {s}")
    y = np.asarray(omega, dtype=np.float64) / (2.0 * eps)
    out = math.sqrt(math.pi) / (2.0 ** (2 * s + 1) * eps * eps) * hermite_eval(2 * s + 1, y) * np.exp(-y * y)
    if np.ndim(omega) == 0:
        return float(out)
    return out


def fourier_weight_transform_magnitude(s: int, eps: float, omega):
    """``|F[x f_s(eps x)](omega)|`` in closed form."""
    out = np.abs(fourier_weight_transform(s, eps, omega))
    return float(out) if np.ndim(omega) == 0 else out


def kappa_psf(eps: float, s: int, phi, nu_max: int = 6):
    """``K(phi)`` from its Poisson-summation image series.

    ``K = (-1)^{s+1}/4 * sum_{|nu|<=nu_max} (-1)^nu [Q(2 pi nu - phi) - Q(2 pi nu + phi)]``
    where ``Q`` is :func:`fourier_weight_transform`. Images decay like
    ``exp(-(pi nu / eps)^2)``.
    """
    _check_eps(eps)
    if int(s) != s or s < 1:
        raise DomainError(f"s must be a positive integer, got {s}")
    if nu_max < 1:
        raise DomainError("nu_max must be >= 1")
    ph = _check_phi(phi)
    flat = np.atleast_1d(ph).ravel()
    sign = -1.0 if s % 2 == 0 else 1.0
    out = np.empty_like(flat)
    nus = np.arange(-nu_max, nu_max + 1)
    alt = np.where(nus % 2 == 0, 1.0, -1.0)
    for i, p in enumerate(flat):
        images = alt * (
            fourier_weight_transform(s, eps, 2.0 * math.pi * nus - p)
            - fourier_weight_transform(s, eps, 2.0 * math.pi * nus + p)
        )
        out[i] = sign * math.fsum(images.tolist()) / 4.0
    if ph.ndim == 0:
        return float(out[0])
    return out.reshape(ph.shape)
