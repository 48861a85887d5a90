import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelscope import FactorDomain, ProductDomain, basis_norm, kernel_eval, moment
from hankelscope.domains import (kernel_diagonal, log_moment, series_cutoffs,
                                 weighted_geometric_tail)
from hankelscope.errors import DomainError, SeriesCapError

from oracles import annulus_kernel_sum, quad_moment

DISK = FactorDomain.disk()
ANN = FactorDomain.annulus(0.5)


class TestMoment:
    def test_disk_values(self):
        assert moment(DISK, 0, 0) == pytest.approx(math.pi, rel=1e-15)
        assert moment(DISK, 1, 0) == 0
        assert moment(DISK, 1, 1) == pytest.approx(math.pi / 2, rel=1e-15)

    def test_annulus_log_moment(self):
        assert moment(ANN, -1, -1) == pytest.approx(2 * math.pi * math.log(2), rel=1e-14)
        assert moment(ANN, -1, -1) == pytest.approx(4.3551721, abs=1e-7)

    def test_rejects_negative_power_on_disk(self):
        with pytest.raises(DomainError):
            moment(DISK, -1, 0)

    @pytest.mark.parametrize("factor", [DISK, ANN, FactorDomain.annulus(0.2)], ids=str)
    def test_matches_polar_quadrature(self, factor):
        rho = 0.0 if factor.is_disk else factor.rho
        lo = 0 if factor.is_disk else -6
        for p in range(lo, 7):
            for q in range(lo, 7):
                exact = moment(factor, p, q)
                approx = quad_moment(rho, p, q)
                scale = max(abs(exact), quad_moment(rho, p, p).real if p == q else 1.0)
                assert abs(approx - exact) <= 1e-10 * scale, (p, q, exact, approx)

    @given(st.integers(-30, 30), st.integers(-30, 30))
    def test_unequal_exponents_vanish_exactly(self, p, q):
        if p != q:
            assert moment(ANN, p, q) == 0.0

    def test_log_moment_is_stable_for_large_powers(self):
        p = np.array([-400, -1, 0, 1, 400])
        lm = log_moment(ANN, p)
        direct = [math.log(moment(ANN, int(k), int(k))) for k in (-1, 0, 1)]
        assert np.allclose(lm[1:4], direct, rtol=0, atol=1e-13)
        assert np.all(np.isfinite(lm))


class TestBasisNorm:
    def test_examples(self):
        assert basis_norm(DISK, 0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
        assert basis_norm(DISK, 1) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-15)
        assert basis_norm(ANN, -1) == pytest.approx(1 / math.sqrt(2 * math.pi * math.log(2)), rel=1e-14)

    def test_rejects_disk_negative_index(self):
        with pytest.raises(DomainError):
            basis_norm(DISK, -2)


class TestKernel:
    def test_disk_values(self):
        assert kernel_eval(DISK, 0, 0) == pytest.approx(1 / math.pi, rel=1e-15)
        assert kernel_eval(DISK, 0.5, 0.5) == pytest.approx(16 / (9 * math.pi), rel=1e-14)
        assert abs(kernel_eval(DISK, 0.5, 0.5) - 0.565884) < 1e-6

    def test_annulus_matches_bruteforce_sum(self):
        val = kernel_eval(ANN, 0.7, 0.7, tol=1e-12)
        assert abs(val - annulus_kernel_sum(0.5, 0.7, 0.7)) < 1e-10

    @pytest.mark.parametrize("z,w", [(0.6 + 0.2j, -0.55j), (-0.9, 0.75 + 0.1j), (0.52, 0.99)])
    def test_annulus_off_diagonal(self, z, w):
        val = kernel_eval(ANN, z, w, tol=1e-12)
        assert abs(val - annulus_kernel_sum(0.5, z, w, 400)) < 1e-10

    @given(st.complex_numbers(max_magnitude=0.9), st.complex_numbers(max_magnitude=0.9))
    @settings(max_examples=50)
    def test_disk_closed_form_matches_series(self, z, w):
        n = np.arange(0, 2000)
        series = np.sum((n + 1) * (z * np.conj(w)) ** n) / math.pi
        assert abs(kernel_eval(DISK, z, w) - series) < 1e-9

    def test_rejects_boundary_and_exterior(self):
        with pytest.raises(DomainError):
            kernel_eval(DISK, 1.0, 0)
        with pytest.raises(DomainError):
            kernel_eval(ANN, 0.3, 0.7)
        with pytest.raises(DomainError):
            kernel_eval(ANN, 0.7, 1.2)

    def test_term_cap_fails_loudly(self):
        with pytest.raises(SeriesCapError) as info:
            kernel_eval(ANN, 0.999999, 0.999999, tol=1e-14, max_terms=50)
        assert info.value.achievable > 1e-14

    def test_disk_diagonal_increases(self):
        r = np.linspace(0.1, 0.95, 30)
        vals = [kernel_diagonal(DISK, x) for x in r]
        assert np.all(np.diff(vals) > 0)

    def test_annulus_diagonal_is_unimodal_in_log_radius(self):
        # K(r, r) = sum_n r^{2n} / mu_n is a positive sum of exponentials in log r,
        # hence convex there: one interior minimum, increasing toward both circles.
        r = np.exp(np.linspace(math.log(0.501), math.log(0.995), 400))
        vals = np.array([kernel_diagonal(ANN, x) for x in r])
        assert np.all(vals > 0)
        assert np.all(np.diff(vals, 2) > 0)
        k = int(np.argmin(vals))
        assert 0 < k < len(r) - 1
        assert np.all(np.diff(vals[k:]) > 0) and np.all(np.diff(vals[:k + 1]) < 0)

    def test_annulus_diagonal_minimum_is_not_at_geometric_mean(self):
        g = math.sqrt(0.5)
        assert kernel_diagonal(ANN, 0.74) < kernel_diagonal(ANN, g)


class TestTails:
    @given(st.integers(0, 40), st.floats(0.0, 0.95))
    def test_weighted_tail_matches_sum(self, start, x):
        n = np.arange(start, start + 4000)
        assert weighted_geometric_tail(start, x) == pytest.approx(float(np.sum(n * x**n)), rel=1e-9, abs=1e-300)

    def test_cutoffs_cover_requested_tolerance(self):
        lo, hi, tail, capped = series_cutoffs(ANN, 0.9**2, 1e-10, 10**6)
        assert not capped and tail <= 1e-10 and lo < 0 < hi


class TestDomains:
    def test_validation(self):
        with pytest.raises(DomainError):
            FactorDomain.annulus(1.0)
        with pytest.raises(DomainError):
            FactorDomain.annulus(0.0)
        with pytest.raises(DomainError):
            ProductDomain.of()

    def test_json_round_trip(self):
        dom = ProductDomain.of(DISK, ANN)
        assert ProductDomain.from_json(dom.to_json()) == dom
        assert dom.to_json() == {"factors": [{"type": "disk"}, {"type": "annulus", "rho": 0.5}]}

    def test_contains(self):
        dom = ProductDomain.of(DISK, ANN)
        assert dom.contains((0, 0.7))
        assert not dom.contains((0, 0.3))
        assert not dom.contains((1, 0.7))

    def test_drop(self):
        dom = ProductDomain.of(DISK, ANN)
        assert dom.drop(0) == ProductDomain.of(ANN)
        assert ProductDomain.polydisk(1).drop(0) is None
