"""Numerical certificates for localisation, frame energy and norm scaling of the needlets.

Every check returns a :class:`Report` carrying its raw measurements, the
thresholds it was judged against and a pass flag, so thresholds can be retuned
without recomputation. All thresholds live in :data:`THRESHOLDS`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy import integrate

from . import sphere
from .errors import DomainError, InsufficientRangeError, PreconditionError, VariantError
from .kernel import (
    FilterParams,
    SeriesVariant,
    Summation,
    degree_weight,
    fourier_weight_transform_magnitude,
    kappa_direct,
    kappa_psf,
    needlet_profile,
    profile,
    tail_ratio,
    truncation_degree,
)
from .special import (
    WeightParams,
    WeightVariant,
    eta,
    eta_quadrature,
    level_sum,
    mexican_f,
    weight_f,
)

SCHEMA_VERSION = 1
_MAX_EXP_ARG = -math.log(float(np.finfo(np.float64).tiny))

THRESHOLDS = {
    "eta_rel": 1e-10,
    "level_sum_bracket_rel": 0.01,
    "level_sum_periodicity_rel": 1e-12,
    "psf_rel": 1e-8,
    "fourier_rel": 1e-8,
    "tail_uniformity": 3.0,
    "tail_grid_points": 512,
    "tail_default_scaled_angle": 8.0,
    "tail_max_scaled_angle": 10.0,
    "theta_zero_rel": 0.01,
    "laplacian_dev": 1e-13,
    "lp_slope_tol": 0.1,
    "lp_l2_rel": 1e-9,
    "frame_slack": 0.05,
    "frame_leakage": 1e-10,
    "frame_exact_rel": 1e-10,
    "frame_cubature_rel": 1e-9,
    "partition_area_rel": 1e-12,
    "partition_constant_spread": 2.5,
    "partition_constant_drift": 0.10,
}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if hasattr(obj, "value"):  # enums
        return obj.value
    return obj


@dataclass
class Report:
    """Schema-1 verification record: ``{claim, params, measurements, threshold, pass}``."""

    claim: str
    params: dict
    measurements: list
    threshold: dict
    passed: bool

    def to_dict(self) -> dict:
        return _jsonable(
            {
                "schema": SCHEMA_VERSION,
                "claim": self.claim,
                "params": self.params,
                "measurements": self.measurements,
                "threshold": self.threshold,
                "pass": self.passed,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)


@dataclass
class TailReport(Report):
    sups: dict = field(default_factory=dict)
    uniformity_factor: float = math.nan
    constant: float = math.nan


@dataclass
class FrameReport(Report):
    level_energies: dict = field(default_factory=dict)
    total: float = math.nan
    norm2: float = math.nan
    bracket: tuple = (math.nan, math.nan)

    @property
    def ratio(self) -> float:
        return self.total / self.norm2


# -- scalar identities ------------------------------------------------------------


def eta_report(s_list=(1, 2, 3, 4, 5)) -> Report:
    rows = []
    for s in s_list:
        closed, quad = eta(s), eta_quadrature(s)
        rows.append({"s": s, "closed_form": closed, "quadrature": quad, "rel_err": abs(closed - quad) / closed})
    ok = all(r["rel_err"] <= THRESHOLDS["eta_rel"] for r in rows)
    if 1 in s_list:
        ok = ok and abs(eta(1) - 0.25) <= 1e-12
    return Report("eta_identity", {"s": list(s_list)}, rows, {"rel": THRESHOLDS["eta_rel"]}, ok)


def level_sum_report(B: float = 1.02, s_list=(1, 2), n_grid: int = 200) -> Report:
    """``2 log B * level_sum`` against ``eta_s`` on ``[1, B]`` plus periodicity in ``x -> Bx``."""
    xs = np.linspace(1.0, B, n_grid)
    rows = []
    for s in s_list:
        vals = np.array([level_sum(s, B, x) for x in xs])
        dev = np.abs(2.0 * math.log(B) * vals - eta(s)) / eta(s)
        shifted = np.array([level_sum(s, B, B * x) for x in xs])
        period = np.max(np.abs(shifted - vals) / vals)
        rows.append({"s": s, "max_bracket_dev": float(dev.max()), "max_periodicity_dev": float(period)})
    ok = all(
        r["max_bracket_dev"] <= THRESHOLDS["level_sum_bracket_rel"]
        and r["max_periodicity_dev"] <= THRESHOLDS["level_sum_periodicity_rel"]
        for r in rows
    )
    thr = {"bracket_rel": THRESHOLDS["level_sum_bracket_rel"], "periodicity_rel": THRESHOLDS["level_sum_periodicity_rel"]}
    return Report("level_sum_bracket", {"B": B, "s": list(s_list), "n_grid": n_grid}, rows, thr, ok)


# -- Fourier side ------------------------------------------------------------------


def psf_rel_errors(eps: float, s: int, phis, nu_max: int = 6):
    direct = kappa_direct(eps, s, phis)
    images = kappa_psf(eps, s, phis, nu_max=nu_max)
    scale = np.maximum(np.abs(direct), 1e-10 / eps**2)
    return direct, images, np.abs(direct - images) / scale


def psf_grid(n_points: int) -> np.ndarray:
    """Midpoint grid strictly inside ``(0, pi)``."""
    return math.pi * (np.arange(n_points) + 0.5) / n_points


def psf_report(eps_list=(1.0, 0.5, 0.25), s_list=(1, 2, 3), n_points: int = 64, nu_max: int = 6) -> Report:
    phis = psf_grid(n_points)
    rows = []
    for eps in eps_list:
        for s in s_list:
            _, _, rel = psf_rel_errors(eps, s, phis, nu_max)
            rows.append({"eps": eps, "s": s, "max_rel_err": float(rel.max())})
    ok = all(r["max_rel_err"] <= THRESHOLDS["psf_rel"] for r in rows)
    params = {"eps": list(eps_list), "s": list(s_list), "points": n_points, "nu_max": nu_max}
    return Report("poisson_summation_identity", params, rows, {"rel": THRESHOLDS["psf_rel"]}, ok)


def fourier_transform_quadrature(s: int, eps: float, omega: float, dps: int = 55) -> float:
    """``|2 int_0^inf x f_s(eps x) sin(omega x) dx|`` by high-precision quadrature.

    After ``x = u/eps`` the integrand is ``u^{2s+1} e^{-u^2} sin(omega u / eps) / eps^2``;
    it is integrated piecewise over pairs of half-periods up to where the
    Gaussian drops below ``10^-dps``. Precision must exceed the cancellation,
    roughly ``(omega/2eps)^2 / ln 10`` digits.
    """
    with mpmath.workdps(dps):
        k = mpmath.mpf(float(omega)) / mpmath.mpf(float(eps))
        n = 2 * s + 1

        def f(u):
            return u**n * mpmath.exp(-u * u) * mpmath.sin(k * u)

        top = mpmath.sqrt(dps * mpmath.log(10)) + 1
        step = 2 * mpmath.pi / abs(k) if k != 0 else top
        nodes = [mpmath.mpf(0)]
        while nodes[-1] + step < top:
            nodes.append(nodes[-1] + step)
        nodes.append(top)
        val = 2 * mpmath.quad(f, nodes, method="gauss-legendre") / mpmath.mpf(float(eps)) ** 2
        return float(abs(val))


def fourier_report(s_list=(0, 1, 2, 3), eps_list=(1.0, 0.5), scaled=(0.5, 2.0, 5.0, 8.0, 10.0)) -> Report:
    rows = []
    for s in s_list:
        for eps in eps_list:
            for y in scaled:
                omega = 2.0 * eps * y
                closed = fourier_weight_transform_magnitude(s, eps, omega)
                quad = fourier_transform_quadrature(s, eps, omega)
                rows.append({"s": s, "eps": eps, "scaled_omega": y, "closed_form": closed, "quadrature": quad,
                             "rel_err": abs(closed - quad) / closed})
    ok = all(r["rel_err"] <= THRESHOLDS["fourier_rel"] for r in rows)
    params = {"s": list(s_list), "eps": list(eps_list), "scaled_omega": list(scaled)}
    return Report("fourier_closed_form", params, rows, {"rel": THRESHOLDS["fourier_rel"]}, ok)


# -- localisation ------------------------------------------------------------------


def tail_bound_report(
    B: float,
    s: int,
    j_list,
    max_scaled_angle: float = THRESHOLDS["tail_default_scaled_angle"],
    *,
    n_points: int = THRESHOLDS["tail_grid_points"],
    series_variant: SeriesVariant = SeriesVariant.HALF_INTEGER,
    certify_truncation: bool = True,
) -> TailReport:
    """Sup over angle of ``|Psi| eps^2 exp((t/2eps)^2) / (1 + |H_2s(t/eps)|)`` per level.

    The grid is ``n_points`` angles on ``[0, min(pi, 2 eps max_scaled_angle)]``.
    Passes iff every sup is finite and ``max_j sup / min_j sup`` is at most
    the uniformity threshold. The same ratio with ``H_2s(t/2eps)`` is reported
    alongside but not gated.
    """
    cap = THRESHOLDS["tail_max_scaled_angle"]
    if not 0.0 < max_scaled_angle <= cap:
        raise PreconditionError(f"max_scaled_angle must lie in (0, {cap}], got {max_scaled_angle}")
    j_list = [int(j) for j in j_list]
    if not j_list or min(j_list) < 2:
        raise PreconditionError("tail check needs levels j >= 2")
    rows, sups = [], {}
    for j in j_list:
        params = FilterParams(B, j, s, series_variant=series_variant)
        eps = params.eps
        theta_max = min(math.pi, 2.0 * eps * max_scaled_angle)
        prof = profile(params, np.linspace(0.0, theta_max, n_points))
        ratio = prof.ratio
        half_arg = tail_ratio(params, prof.thetas, prof.values, hermite_scale=0.5)
        i = int(np.argmax(ratio))
        row = {
            "j": j,
            "eps": eps,
            "theta_max": theta_max,
            "l_max": prof.l_max,
            "sup_ratio": float(ratio[i]),
            "argmax_scaled_angle": float(prof.thetas[i] / (2.0 * eps)),
            "sup_ratio_half_argument": float(half_arg.max()),
            "ratio_at_zero": float(ratio[0]),
        }
        if certify_truncation:
            row["truncation_certificate"] = prof.truncation_certificate()
        rows.append(row)
        sups[j] = float(ratio[i])
    vals = np.array(list(sups.values()))
    finite = bool(np.all(np.isfinite(vals)) and np.all(vals > 0))
    factor = float(vals.max() / vals.min()) if finite else math.inf
    limit = THRESHOLDS["tail_uniformity"]
    params = {"B": B, "s": s, "j": j_list, "max_scaled_angle": max_scaled_angle, "points": n_points,
              "series_variant": SeriesVariant(series_variant).value}
    rows.append({"uniformity_factor": factor, "constant": float(vals.max())})
    return TailReport(
        "tail_envelope_uniform_in_level",
        params,
        rows,
        {"uniformity_factor": limit},
        finite and factor <= limit,
        sups=sups,
        uniformity_factor=factor,
        constant=float(vals.max()),
    )


def theta_zero_limit(s: int) -> float:
    """``(1/2pi) int_0^inf u^{2s+1} e^{-u^2} du = Gamma(s+1) / (4 pi)``."""
    return math.factorial(s) / (4.0 * math.pi)


def theta_zero_limit_quadrature(s: int) -> float:
    val, _ = integrate.quad(lambda u: u ** (2 * s + 1) * math.exp(-u * u), 0.0, math.inf, epsabs=0.0, epsrel=1e-13)
    return val / (2.0 * math.pi)


def theta_zero_bound(B: float, s: int, j_list) -> dict:
    """``|Psi(0)| eps^2`` per level for the half-integer profile."""
    out = {}
    for j in j_list:
        params = FilterParams(B, int(j), s)
        out[int(j)] = abs(profile(params, [0.0]).values[0]) * params.eps**2
    return out


def theta_zero_report(B: float, s_list=(1, 2), j_list=(2, 3, 4, 5, 6)) -> Report:
    rows = []
    ok = True
    for s in s_list:
        limit = theta_zero_limit(s)
        quad = theta_zero_limit_quadrature(s)
        vals = theta_zero_bound(B, s, j_list)
        j_top = max(vals)
        dev = abs(vals[j_top] - limit) / limit
        rows.append({"s": s, "values": {str(j): v for j, v in vals.items()}, "limit": limit,
                     "limit_quadrature": quad, "rel_dev_at_finest": dev})
        ok = ok and dev <= THRESHOLDS["theta_zero_rel"] and abs(quad - limit) <= 1e-12 * limit
    params = {"B": B, "s": list(s_list), "j": [int(j) for j in j_list]}
    return Report("theta_zero_limit", params, rows, {"rel": THRESHOLDS["theta_zero_rel"]}, ok)


# -- Laplacian recursion -----------------------------------------------------------


def laplacian_relation_check(
    B: float,
    j: int,
    s: int,
    l_max: int,
    weight_variant: WeightVariant = WeightVariant.EXACT_LAPLACIAN,
) -> float:
    """Max relative deviation between ``(l(l+1)/B^{2j})^{s-1} w_1(l)`` and ``w_s(l)``.

    ``w_s`` is the exact-Laplacian weight ``(l(l+1)/B^{2j})^s exp(-l(l+1)/B^{2j})``;
    the multiplier is applied ``s-1`` times in sequence, as the iterated
    operator ``-B^{-2j} Laplacian`` would. Degrees whose exponential factor
    ``exp(-l(l+1)/B^{2j})`` is subnormal (or zero) are skipped: subnormals carry
    too few bits for a relative comparison.
    """
    if WeightVariant(weight_variant) is not WeightVariant.EXACT_LAPLACIAN:
        raise VariantError("the Laplacian recursion holds only for the exact-Laplacian weight")
    if l_max < 0:
        raise DomainError("l_max must be >= 0")
    base = WeightParams(1, WeightVariant.EXACT_LAPLACIAN)
    target = WeightParams(s, WeightVariant.EXACT_LAPLACIAN)
    scale = float(B) ** (2 * j)
    worst = 0.0
    for l in range(l_max + 1):
        mult = l * (l + 1) / scale
        if mult > _MAX_EXP_ARG:
            break
        lhs = weight_f(base, B, j, l)
        for _ in range(s - 1):
            lhs *= mult
        rhs = weight_f(target, B, j, l)
        if rhs == 0.0 and lhs == 0.0:
            continue
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), abs(lhs)))
    return worst


def laplacian_report(B: float = 2.0, j_list=(0, 1, 2, 3, 4), s_list=(1, 2, 3, 4), l_max: int = 200) -> Report:
    rows = [
        {"j": j, "s": s, "max_rel_dev": laplacian_relation_check(B, j, s, l_max)}
        for j in j_list
        for s in s_list
    ]
    ok = all(r["max_rel_dev"] <= THRESHOLDS["laplacian_dev"] for r in rows)
    params = {"B": B, "j": list(j_list), "s": list(s_list), "l_max": l_max}
    return Report("laplacian_recursion", params, rows, {"max_rel_dev": THRESHOLDS["laplacian_dev"]}, ok)


# -- L^p scaling ---------------------------------------------------------------------


def expected_lp_slope(p: float) -> float:
    return 1.0 if math.isinf(p) else 2.0 * (0.5 - 1.0 / p)


def l2_closed_form(params: FilterParams, area: float) -> float:
    """``lambda sum_l w(l)^2 (2l+1)/4pi``: the squared L2 norm of one needlet."""
    L = truncation_degree(params)
    l = np.arange(L + 1, dtype=np.float64)
    w = degree_weight(params, l)
    return area * math.fsum((w * w * (2.0 * l + 1.0) / (4.0 * math.pi)).tolist())


def reference_cell(pix: sphere.Pixelization) -> int:
    """The cell holding the point on the equator at azimuth 0."""
    return int(pix.locate(np.array([[1.0, 0.0, 0.0]]))[0])


def lp_scaling_report(
    params_base: FilterParams,
    j_range,
    p_list=(1.0, 2.0, 4.0, math.inf),
    *,
    cubature_degree: int | None = None,
) -> Report:
    """``||psi_jk||_p`` for a reference cell near the equator and the fitted growth exponent.

    Finite ``p`` uses one cubature grid of degree at least twice the effective
    band limit at the finest level. ``p = inf`` uses ``sqrt(lambda) max |Psi|``
    on a dense angle grid that includes ``theta = 0``. The exponent is the
    least-squares slope of ``log ||psi||_p`` against ``j log B``.
    """
    j_list = [int(j) for j in j_range]
    if len(j_list) < 2:
        raise PreconditionError("slope fit needs at least two levels")
    B = float(params_base.B)
    need = 2 * truncation_degree(params_base.with_level(max(j_list)), sphere.BAND_LIMIT_TOL)
    if cubature_degree is None:
        cubature_degree = need
    if cubature_degree < need:
        raise PreconditionError(f"cubature degree {cubature_degree} below twice the band limit ({need})")
    grid = sphere.build_cubature(cubature_degree)
    norms = {p: [] for p in p_list}
    rows = []
    l2_dev = 0.0
    for j in j_list:
        params = params_base.with_level(j)
        pix = sphere.build_partition(B, j)
        k = reference_cell(pix)
        area = float(pix.areas[k])
        psi = math.sqrt(area) * sphere.needlet_on_points(params, pix.centers[k], grid.points)
        closed = l2_closed_form(params, area)
        for p in p_list:
            if math.isinf(p):
                near = min(math.pi, 20.0 * params.eps)
                th = np.unique(np.concatenate([np.linspace(0.0, near, 2001), np.linspace(near, math.pi, 2001)]))
                vals = needlet_profile(params, th, summation=Summation.PLAIN)
                val = math.sqrt(area) * float(np.max(np.abs(vals)))
            else:
                val = grid.integrate(np.abs(psi) ** p) ** (1.0 / p)
            norms[p].append(val)
            row = {"j": j, "p": p if math.isfinite(p) else "inf", "norm": val, "cell": k, "area": area}
            if p == 2.0:
                rel = abs(val * val - closed) / closed
                l2_dev = max(l2_dev, rel)
                row["closed_form_norm2"] = closed
                row["closed_form_rel_err"] = rel
                row["area_normalised_norm"] = val / math.sqrt(area * B ** (2 * j))
            rows.append(row)
    x = np.array(j_list, dtype=np.float64) * math.log(B)
    ok = l2_dev <= THRESHOLDS["lp_l2_rel"]
    slopes = {}
    for p in p_list:
        slope = float(np.polyfit(x, np.log(norms[p]), 1)[0])
        slopes[p] = slope
        ok = ok and abs(slope - expected_lp_slope(p)) <= THRESHOLDS["lp_slope_tol"]
    for row in rows:
        p = math.inf if row["p"] == "inf" else row["p"]
        row["fitted_slope"] = slopes[p]
        row["expected_slope"] = expected_lp_slope(p)
    params = {"B": B, "s": params_base.s, "j": j_list, "p": ["inf" if math.isinf(p) else p for p in p_list],
              "cubature_degree": cubature_degree, "series_variant": params_base.series_variant.value}
    thr = {"slope_tol": THRESHOLDS["lp_slope_tol"], "l2_rel": THRESHOLDS["lp_l2_rel"]}
    return Report("lp_norm_scaling", params, rows, thr, ok)


# -- frame energy -------------------------------------------------------------------


def frame_leakage(F: sphere.ZonalMixture, params_base: FilterParams, j_range) -> float:
    """Fraction of the bi-infinite frame energy outside ``j_range``."""
    s, B = params_base.s, float(params_base.B)
    js = np.arange(j_range[0], j_range[1] + 1, dtype=np.float64)
    inside = total = 0.0
    for l, n2 in F.degree_norms2().items():
        if l == 0 or n2 == 0.0:
            continue
        total += n2 * level_sum(s, B, float(l))
        inside += n2 * math.fsum((mexican_f(s, l / B**js) ** 2).tolist())
    return max(0.0, (total - inside) / total) if total > 0 else 0.0


def minimal_j_range(F: sphere.ZonalMixture, params_base: FilterParams, tol: float = THRESHOLDS["frame_leakage"]):
    """Smallest ``[0, j_max]`` whose leakage is below ``tol``."""
    j_max = 0
    while frame_leakage(F, params_base, (0, j_max)) > tol:
        j_max += 1
        if j_max > 10_000:
            raise InsufficientRangeError("no level range reaches the leakage tolerance", math.nan)
    return 0, j_max


def frame_energy_report(
    F: sphere.ZonalMixture,
    params_base: FilterParams,
    j_range,
    *,
    refine: float = 1.0,
    cubature_budget: int = 3_000_000,
) -> FrameReport:
    """Pixelised frame energy ``sum_j sum_k |beta_jk|^2`` against the level-sum bracket.

    Per-level energies use exact harmonic coefficients summed with the
    ring-wise shortcut of :func:`sphere.level_energy`; on every level whose
    cells x cubature nodes fit in ``cubature_budget`` they are recomputed from
    cubature coefficients (:func:`sphere.analyze`) as a cross-check.
    """
    if params_base.series_variant is not SeriesVariant.INTEGER or params_base.weight_variant is not WeightVariant.SQUARED_ARGUMENT:
        raise VariantError("frame energy is defined for the integer-degree squared-argument weight")
    degrees = [l for l, n2 in F.degree_norms2().items() if n2 != 0.0]
    if not degrees:
        raise DomainError("test function has zero norm")
    if 0 in degrees:
        raise DomainError("constants are annihilated by every level; remove degree-0 terms")
    j0, j1 = int(j_range[0]), int(j_range[1])
    if j0 < 0 or j1 < j0:
        raise DomainError(f"invalid level range [{j0}, {j1}]")
    leakage = frame_leakage(F, params_base, (j0, j1))
    if leakage > THRESHOLDS["frame_leakage"]:
        raise InsufficientRangeError(f"levels [{j0}, {j1}] miss {leakage:.3e} of the frame energy", leakage)
    s, B = params_base.s, float(params_base.B)
    norm2 = F.norm2()
    norms_by_degree = F.degree_norms2()

    energies, exact_energies, rows = {}, {}, []
    cub_pairs = []
    for j in range(j0, j1 + 1):
        params = params_base.with_level(j)
        e = sphere.level_energy(F, params, refine)
        G = F.filtered(lambda l: degree_weight(params, l))
        exact_energies[j] = sphere.zonal_inner_product(G, G)
        energies[j] = e
        row = {"j": j, "pixelised_energy": e, "harmonic_energy": exact_energies[j]}
        n_cells = int(sphere.ring_layout(B, j, refine)[1].sum())
        degree = sphere.required_cubature_degree(F, params)
        n_nodes = (degree + 1) * (2 * degree + 2)
        if n_cells * n_nodes <= cubature_budget:
            pix = sphere.build_partition(B, j, refine)
            cub = sphere.analyze(F, params, pix, sphere.build_cubature(degree)).energy
            cub_pairs.append((cub, e))
            row["cubature_energy"] = cub
        rows.append(row)

    total = math.fsum(energies.values())
    # cross-check error relative to the largest level energy; tiny far-off levels
    # would otherwise amplify the 1e-15 band-limit truncation
    peak = max(energies.values())
    cub_dev = max((abs(c - e) / peak for c, e in cub_pairs), default=0.0)
    harmonic_total = math.fsum(exact_energies.values())
    identity = math.fsum(
        n2 * math.fsum((mexican_f(s, l / B ** np.arange(j0, j1 + 1, dtype=np.float64)) ** 2).tolist())
        for l, n2 in norms_by_degree.items()
    )
    identity_dev = abs(harmonic_total - identity) / identity
    sums = [level_sum(s, B, float(l)) for l in degrees]
    lo, hi = min(sums), max(sums)
    slack = THRESHOLDS["frame_slack"]
    ratio = total / norm2
    ok = (
        (1.0 - slack) * lo <= ratio <= (1.0 + slack) * hi
        and identity_dev <= THRESHOLDS["frame_exact_rel"]
        and cub_dev <= THRESHOLDS["frame_cubature_rel"]
    )
    rows.append({
        "total": total,
        "norm2": norm2,
        "ratio": ratio,
        "harmonic_ratio": harmonic_total / norm2,
        "harmonic_identity_rel_dev": identity_dev,
        "cubature_max_rel_dev": cub_dev,
        "leakage": leakage,
        "bracket": [lo, hi],
        "ratio_times_2logB": ratio * 2.0 * math.log(B),
        "eta": eta(s),
    })
    params = {"B": B, "s": s, "j_range": [j0, j1], "degrees": sorted(degrees), "refine": refine,
              "terms": [{"degree": t.degree, "center": t.center.tolist(), "coeff": t.coeff} for t in F.terms]}
    thr = {"slack": slack, "leakage": THRESHOLDS["frame_leakage"], "harmonic_rel": THRESHOLDS["frame_exact_rel"],
           "cubature_rel": THRESHOLDS["frame_cubature_rel"]}
    return FrameReport("frame_energy_bracket", params, rows, thr, ok,
                       level_energies=energies, total=total, norm2=norm2, bracket=(lo, hi))


def default_test_function(degrees=(4, 9), seed: int = 7) -> sphere.ZonalMixture:
    """Reproducible mixture with one term per degree at pseudo-random centres."""
    rng = np.random.default_rng(seed)
    centers = sphere.random_points(len(degrees), rng)
    coeffs = rng.uniform(0.5, 1.5, size=len(degrees))
    return sphere.ZonalMixture.from_tuples(zip(degrees, centers, coeffs))


# -- partition -----------------------------------------------------------------------


def partition_report(B: float = 2.0, j_list=(0, 1, 2, 3, 4, 5), n_random: int = 100_000, seed: int = 0) -> Report:
    """Area sum, exact-once coverage by random points, and the diameter/area constants."""
    rng = np.random.default_rng(seed)
    pts = sphere.random_points(n_random, rng)
    rows = []
    ok = True
    for j in j_list:
        pix = sphere.build_partition(B, j)
        area_dev = abs(math.fsum(pix.areas.tolist()) - 4.0 * math.pi) / (4.0 * math.pi)
        counts = pix.containment_counts(pts)
        located = pix.locate(pts)
        lo, hi, az_lo, az_hi = pix.cell_bounds()
        th, ph = sphere.to_angles(pts)
        agree = bool(np.all((th >= lo[located]) & (th <= hi[located]) & (ph >= az_lo[located]) & (ph < az_hi[located])))
        rows.append({
            "j": j,
            "cells": len(pix),
            "area_sum_rel_dev": area_dev,
            "min_containment": int(counts.min()),
            "max_containment": int(counts.max()),
            "locate_consistent": agree,
            "diameter_constant": pix.diameter_constant,
            "area_constant": pix.area_constant,
        })
        ok = ok and area_dev <= THRESHOLDS["partition_area_rel"] and counts.min() == 1 and counts.max() == 1 and agree
    diam = np.array([r["diameter_constant"] for r in rows])
    area = np.array([r["area_constant"] for r in rows])
    spread = max(diam.max() / diam.min(), area.max() / area.min())
    drift = max(abs(diam[-1] / diam[-2] - 1.0), abs(area[-1] / area[-2] - 1.0)) if len(rows) > 1 else 0.0
    ok = ok and spread <= THRESHOLDS["partition_constant_spread"] and drift <= THRESHOLDS["partition_constant_drift"]
    rows.append({"diameter_constant": float(diam.max()), "area_constant": float(area.min()),
                 "constant_spread": float(spread), "constant_drift_last_levels": float(drift)})
    params = {"B": B, "j": list(j_list), "random_points": n_random, "seed": seed}
    thr = {"area_rel": THRESHOLDS["partition_area_rel"], "constant_spread": THRESHOLDS["partition_constant_spread"],
           "constant_drift": THRESHOLDS["partition_constant_drift"]}
    return Report("partition_integrity", params, rows, thr, ok)
