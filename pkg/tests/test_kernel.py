import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mexneedlet import _accel
from mexneedlet._kernels import legendre_recurrence, series_dd, series_f64
from mexneedlet.errors import DomainError
from mexneedlet.kernel import (
    FilterParams,
    KernelProfile,
    SeriesVariant,
    Summation,
    fourier_weight_transform,
    fourier_weight_transform_magnitude,
    kappa_direct,
    kappa_psf,
    needlet_profile,
    profile,
    tail_ratio,
    truncation_degree,
)
from mexneedlet.special import hermite_eval

# 50-digit mpmath direct sums
PSI0_B2_J0_S1 = 0.076942046306207579284
KAPPA_EPS05_S1_PHI1 = 0.65204933179982293207
KAPPA_EPS025_S2_PHI25 = 4.9600715263003856691e-7
# 2 int_0^inf x^3 exp(-x^2) sin(2x) dx by mpmath quadrature
FOURIER_S1_EPS1_OMEGA2 = 0.32602466608664609153
# first l past the peak with weight < 1e-30 * peak, by a linear scan
TRUNC_B2_J4_S1 = 140


def mp_profile(params, theta, L, dps=60):
    """Independent high-precision half-integer profile."""
    with mpmath.workdps(dps):
        eps = mpmath.mpf(2) ** (-params.j)
        t = mpmath.cos(mpmath.mpf(theta))
        p_prev, p = mpmath.mpf(1), t
        total = mpmath.mpf(0)
        for l in range(L + 1):
            u = l + mpmath.mpf(1) / 2
            x = eps * u
            pl = mpmath.mpf(1) if l == 0 else p
            total += x ** (2 * params.s) * mpmath.exp(-x * x) * u * pl
            if l >= 1:
                p_prev, p = p, ((2 * l + 1) * t * p - l * p_prev) / (l + 1)
        return total / (2 * mpmath.pi)


class TestFilterParams:
    def test_eps_derived(self):
        p = FilterParams(2.0, 3, 1)
        assert p.eps == 0.125
        assert p.with_level(5).eps == 2.0**-5

    @pytest.mark.parametrize("bad", [dict(B=1.0, j=0, s=1), dict(B=2.0, j=0, s=0), dict(B=2.0, j=0.5, s=1)])
    def test_invalid(self, bad):
        with pytest.raises(DomainError):
            FilterParams(**bad)


class TestTruncation:
    def test_linear_scan_oracle(self):
        assert truncation_degree(FilterParams(2, 4, 1), 1e-30) == TRUNC_B2_J4_S1

    def test_below_tolerance_at_returned_degree(self):
        p = FilterParams(2, 5, 2)
        L = truncation_degree(p, 1e-20)
        u = np.arange(4 * L) + 0.5
        w = (p.eps * u) ** 4 * np.exp(-((p.eps * u) ** 2)) * u
        assert np.all(w[L:] < 1e-20 * w.max())
        assert w[L - 1] >= 1e-20 * w.max()

    def test_monotone_and_linear_growth(self):
        Ls = [truncation_degree(FilterParams(2, j, 1)) for j in range(0, 10)]
        assert all(b >= a for a, b in zip(Ls, Ls[1:]))
        assert Ls[9] / Ls[8] == pytest.approx(2.0, rel=0.02)

    @pytest.mark.parametrize("tol", [0.0, 1.0, -1e-3])
    def test_domain(self, tol):
        with pytest.raises(DomainError):
            truncation_degree(FilterParams(2, 2, 1), tol)


class TestProfile:
    def test_theta_zero_oracle(self):
        assert needlet_profile(FilterParams(2, 0, 1), 0.0) == pytest.approx(PSI0_B2_J0_S1, rel=1e-14)

    @pytest.mark.parametrize("variant", list(SeriesVariant))
    def test_positive_at_zero(self, variant):
        for s in (1, 2, 3):
            assert needlet_profile(FilterParams(1.5, 4, s, series_variant=variant), 0.0) > 0

    def test_domain(self):
        with pytest.raises(DomainError):
            needlet_profile(FilterParams(2, 2, 1), -1e-3)
        with pytest.raises(DomainError):
            needlet_profile(FilterParams(2, 2, 1), math.pi + 1e-9)

    def test_truncation_certificate(self):
        p = FilterParams(2, 3, 1)
        a = needlet_profile(p, math.pi / 2)
        L = truncation_degree(p)
        b = needlet_profile(p, math.pi / 2, l_max=2 * L)
        peak = needlet_profile(p, 0.0)
        assert abs(a - b) < 1e-12 * peak
        prof = profile(p, np.linspace(0, math.pi, 64))
        assert prof.truncation_certificate() < 1e-12

    @pytest.mark.parametrize("s,scaled", [(1, 2.0), (1, 8.0), (3, 8.0), (2, 6.5)])
    def test_deep_tail_matches_high_precision(self, s, scaled):
        # the tail-check regime: values ~e^{-64} below the peak
        p = FilterParams(2, 6, s)
        theta = 2 * scaled * p.eps
        L = truncation_degree(p)
        ref = float(mp_profile(p, theta, L))
        got = needlet_profile(p, theta)
        assert got == pytest.approx(ref, rel=1e-6)

    def test_plain_summation_loses_the_tail(self):
        p = FilterParams(2, 6, 1)
        theta = 16 * p.eps
        plain = needlet_profile(p, theta, summation=Summation.PLAIN)
        comp = needlet_profile(p, theta)
        assert abs(plain - comp) > 100 * abs(comp)

    @given(st.floats(0.0, math.pi), st.integers(0, 5), st.integers(1, 3))
    @settings(max_examples=40, deadline=None)
    def test_plain_and_compensated_agree_at_bulk_scale(self, theta, j, s):
        p = FilterParams(2, j, s)
        peak = needlet_profile(p, 0.0)
        a = needlet_profile(p, theta)
        b = needlet_profile(p, theta, summation=Summation.PLAIN)
        assert abs(a - b) <= 1e-12 * peak

    def test_variants_converge(self):
        # same profile up to O(eps): the integer form shifts the weight argument by eps/2
        for s in (1, 2, 3):
            h, i = FilterParams(2, 6, s), FilterParams(2, 6, s, series_variant=SeriesVariant.INTEGER)
            th = np.linspace(0.0, 8 * h.eps, 40)
            a, b = needlet_profile(h, th), needlet_profile(i, th)
            assert np.max(np.abs(a - b)) / a[0] < 0.01
        for s in (2, 3):
            h, i = FilterParams(2, 6, s), FilterParams(2, 6, s, series_variant=SeriesVariant.INTEGER)
            assert needlet_profile(h, 2 * h.eps) / needlet_profile(i, 2 * h.eps) == pytest.approx(1.0, abs=0.02)

    def test_s1_profile_vanishes_near_twice_eps(self):
        # the planar limit (1 - y^2) exp(-y^2), y = theta / 2eps, has its zero at theta = 2 eps
        p = FilterParams(2, 7, 1)
        assert abs(needlet_profile(p, 2 * p.eps)) < 2e-3 * needlet_profile(p, 0.0)

    def test_integer_variant_lacks_gaussian_tail(self):
        p = FilterParams(2, 5, 1, series_variant=SeriesVariant.INTEGER)
        th = 16 * p.eps
        r = tail_ratio(p, th, needlet_profile(p, th))
        assert r > 1e6

    def test_kernel_profile_invariants(self):
        p = FilterParams(2, 2, 1)
        with pytest.raises(DomainError):
            KernelProfile(p, [0.0, 0.0], [1.0, 1.0], 10)
        with pytest.raises(DomainError):
            KernelProfile(p, [0.0, 0.1], [1.0], 10)

    def test_ratio_at_zero(self):
        p = FilterParams(2, 4, 2)
        prof = profile(p, [0.0, 0.01])
        h0 = abs(hermite_eval(4, 0.0))
        assert prof.ratio[0] == pytest.approx(prof.values[0] * p.eps**2 / (1 + h0), rel=1e-15)


class TestBackends:
    @pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")
    def test_numba_and_numpy_bitwise_equal(self):
        rng = np.random.default_rng(3)
        t = rng.uniform(-1, 1, 257)
        c = rng.normal(size=90)
        (a, al), (g, gl) = legendre_recurrence(90)
        z, o = np.zeros_like(t), np.ones_like(t)
        for nb in (True,):
            f_np = series_f64(c, a, g, t, o, t, use_numba=False)
            f_nb = series_f64(c, a, g, t, o, t, use_numba=nb)
            assert np.array_equal(f_np, f_nb)
            d_np = series_dd((c, np.zeros_like(c)), (a, al), (g, gl), (t, z), (o, z), (t, z), use_numba=False)
            d_nb = series_dd((c, np.zeros_like(c)), (a, al), (g, gl), (t, z), (o, z), (t, z), use_numba=nb)
            assert np.array_equal(d_np[0], d_nb[0]) and np.array_equal(d_np[1], d_nb[1])

    def test_thread_cap_parsing(self, monkeypatch):
        monkeypatch.setenv("NEEDLET_THREADS", "2")
        assert _accel.thread_cap() == 2
        monkeypatch.setenv("NEEDLET_THREADS", "zero")
        with pytest.raises(ValueError):
            _accel.thread_cap()
        monkeypatch.setenv("NEEDLET_THREADS", "0")
        with pytest.raises(ValueError):
            _accel.thread_cap()
        monkeypatch.delenv("NEEDLET_THREADS")
        assert _accel.thread_cap() is None


class TestKappa:
    def test_zero_angle(self):
        assert kappa_direct(0.5, 2, 0.0) == 0.0

    def test_direct_oracles(self):
        assert kappa_direct(0.5, 1, 1.0) == pytest.approx(KAPPA_EPS05_S1_PHI1, rel=1e-14)
        assert kappa_direct(0.25, 2, 2.5) == pytest.approx(KAPPA_EPS025_S2_PHI25, rel=1e-12)

    def test_psf_examples(self):
        assert kappa_psf(0.5, 1, 1.0) == pytest.approx(KAPPA_EPS05_S1_PHI1, rel=1e-8)
        assert kappa_psf(0.25, 2, 2.5) == pytest.approx(KAPPA_EPS025_S2_PHI25, rel=1e-8)

    def test_image_count_converged(self):
        phi = np.linspace(0.05, math.pi - 0.05, 30)
        for eps in (1.0, 0.5, 0.25):
            a = kappa_psf(eps, 2, phi, nu_max=3)
            b = kappa_psf(eps, 2, phi, nu_max=6)
            assert np.max(np.abs(a - b) / np.max(np.abs(b))) < 1e-14

    def test_envelope_bounded_across_eps(self):
        sups = []
        for j in range(2, 7):
            eps = 2.0**-j
            phi = np.linspace(1e-3, min(math.pi, 16 * eps), 400)
            y = phi / (2 * eps)
            r = np.abs(kappa_direct(eps, 1, phi)) * eps**2 * np.exp(y * y) / np.maximum(1, np.abs(hermite_eval(3, y)))
            sups.append(r.max())
        assert np.all(np.isfinite(sups))
        assert max(sups) / min(sups) <= 3.0

    def test_domain(self):
        with pytest.raises(DomainError):
            kappa_direct(0.0, 1, 1.0)
        with pytest.raises(DomainError):
            kappa_psf(0.5, 1, 1.0, nu_max=0)
        with pytest.raises(DomainError):
            kappa_direct(0.5, 1, 4.0)


class TestFourier:
    def test_zero_frequency(self):
        for s in range(4):
            assert fourier_weight_transform_magnitude(s, 0.7, 0.0) == 0.0

    def test_quadrature_oracle(self):
        assert fourier_weight_transform_magnitude(1, 1.0, 2.0) == pytest.approx(FOURIER_S1_EPS1_OMEGA2, rel=1e-13)

    def test_sign_convention(self):
        # F[x f_s(eps x)](w) = -2i int_0^inf x f sin(wx) dx = (-1)^{s+1} i Q(w)
        for s in (1, 2):
            with mpmath.workdps(30):
                sine = 2 * mpmath.quad(lambda x: x ** (2 * s + 1) * mpmath.exp(-x * x) * mpmath.sin(1.3 * x), [0, mpmath.inf])
            assert fourier_weight_transform(s, 1.0, 1.3) == pytest.approx((-1) ** s * float(sine), rel=1e-12)

    @given(st.integers(0, 3), st.floats(0.05, 2.0), st.floats(-30.0, 30.0))
    @settings(max_examples=50, deadline=None)
    def test_magnitude_even(self, s, eps, omega):
        assert fourier_weight_transform_magnitude(s, eps, omega) == fourier_weight_transform_magnitude(s, eps, -omega)

    def test_domain(self):
        with pytest.raises(DomainError):
            fourier_weight_transform_magnitude(1, 0.0, 1.0)
