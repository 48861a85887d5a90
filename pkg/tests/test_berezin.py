import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelscope import (FactorDomain, LaurentSymbol, PathSpec, ProductDomain, berezin_function,
                         berezin_operator, boundary_profile, kernel_vector)
from hankelscope.berezin import WINDOW_CAP, berezin_sample
from hankelscope.errors import KernelWindowCapError

from oracles import quad_berezin_function
from strategies import ANNULUS, BIDISK, DISK, DISK_ANNULUS, holomorphic_symbols, symbols

zb1 = LaurentSymbol.zbar(BIDISK, 1)
points = st.tuples(st.complex_numbers(max_magnitude=0.8), st.complex_numbers(max_magnitude=0.8))


class TestKernelVector:
    def test_origin(self):
        kv = kernel_vector(ProductDomain.polydisk(1), [0])
        assert kv.window.ranges == ((0, 0),)
        assert np.allclose(kv.coeffs, [1]) and kv.tail_bound == 0
        kv2 = kernel_vector(BIDISK, [0, 0])
        assert np.allclose(kv2.coeffs, [1])

    def test_mass_near_boundary(self):
        kv = kernel_vector(DISK, [0.9], tol=1e-8)
        mass = float(np.sum(np.abs(kv.coeffs) ** 2))
        assert 1 - 1e-8 <= mass <= 1
        assert kv.tail_bound <= 1e-8

    def test_coefficients_reproduce_kernel(self):
        z = 0.6 + 0.3j
        kv = kernel_vector(DISK, [z], tol=1e-14)
        m = kv.window.axis(0)
        # c_m = e_m(z)bar / sqrt(K(z,z)) with e_m = sqrt((m+1)/pi) z^m
        expect = np.sqrt((m + 1) / math.pi) * np.conj(z) ** m * math.sqrt(math.pi) * (1 - abs(z) ** 2)
        assert np.allclose(np.abs(kv.coeffs), np.abs(expect), atol=1e-12)

    def test_annulus_mass(self):
        kv = kernel_vector(ANNULUS, [0.52j], tol=1e-10)
        assert 1 - 1e-10 <= float(np.sum(np.abs(kv.coeffs) ** 2)) <= 1 + 1e-14

    def test_cap_reports_achievable_bound(self):
        with pytest.raises(KernelWindowCapError) as info:
            kernel_vector(DISK, [0.999], tol=1e-12, cap=50)
        assert info.value.achievable > 1e-12


class TestBerezinOperator:
    @given(holomorphic_symbols(BIDISK), symbols(BIDISK), points)
    @settings(max_examples=20, deadline=None)
    def test_holomorphic_phi_gives_zero(self, phi, psi, z):
        assert abs(berezin_operator(phi, psi, z)) < 1e-12

    @pytest.mark.parametrize("r", [0.0, 0.3, 0.7, 0.95, 0.999])
    def test_conjugate_z1_is_one_half(self, r):
        assert berezin_operator(zb1, zb1, (0, r)) == pytest.approx(0.5, abs=1e-8)

    def test_single_disk(self):
        zb = LaurentSymbol.zbar(DISK, 1)
        assert berezin_operator(zb, zb, [0]) == pytest.approx(0.5, abs=1e-15)

    @given(symbols(DISK_ANNULUS, max_terms=3), symbols(DISK_ANNULUS, max_terms=3),
           st.complex_numbers(max_magnitude=0.8), st.floats(0.45, 0.9))
    @settings(max_examples=20, deadline=None)
    def test_bounded_by_sup_norms(self, phi, psi, a, r):
        val = berezin_operator(phi, psi, (a, r * 1j))
        assert abs(val) <= phi.sup_bound() * psi.sup_bound() + 1e-9

    @given(symbols(BIDISK), points)
    @settings(max_examples=25, deadline=None)
    def test_positive(self, phi, z):
        val = berezin_operator(phi, phi, z)
        assert val.real >= -1e-12 and abs(val.imag) < 1e-10

    @given(symbols(DISK_ANNULUS, max_terms=3), symbols(DISK_ANNULUS, max_terms=3),
           st.complex_numbers(max_magnitude=0.8), st.floats(0.45, 0.9))
    @settings(max_examples=20, deadline=None)
    def test_hermitian_symmetry(self, phi, psi, a, r):
        z = (a, -r)
        assert abs(berezin_operator(phi, psi, z) - np.conj(berezin_operator(psi, phi, z))) < 1e-10

    @given(symbols(BIDISK, max_terms=3), symbols(BIDISK, max_terms=3), points)
    @settings(max_examples=15, deadline=None)
    def test_dense_route_agrees(self, phi, psi, z):
        a = berezin_operator(phi, psi, z, tol=1e-10)
        b = berezin_operator(phi, psi, z, tol=1e-10, method="dense")
        assert abs(a - b) < 1e-9

    def test_error_bound_is_reported(self):
        res = berezin_sample(zb1, zb1, (0, 0.99))
        assert res.conclusive and res.error_bound >= 0 and res.tail_bound <= 1e-8

    def test_cap_marks_sample_inconclusive(self):
        res = berezin_sample(zb1, zb1, (0, 0.9999), cap=40)
        assert not res.conclusive
        with pytest.raises(KernelWindowCapError):
            berezin_operator(zb1, zb1, (0, 0.9999), cap=40)


class TestBerezinFunction:
    def test_reproduces_holomorphic(self):
        z = LaurentSymbol.z(DISK, 1)
        assert abs(berezin_function(z, [0.3 + 0.4j], tol=1e-12) - (0.3 + 0.4j)) < 1e-10

    def test_modulus_squared_at_origin(self):
        z = LaurentSymbol.z(DISK, 1)
        assert berezin_function(z * z.conjugate(), [0]) == pytest.approx(0.5, abs=1e-15)

    def test_bidisk_against_integral(self):
        rng = np.random.default_rng(11)
        f = (LaurentSymbol.monomial(BIDISK, [1, 0], [1, 1], 2 - 1j)
             + LaurentSymbol.monomial(BIDISK, [0, 2], [1, 0], 0.5)
             + LaurentSymbol.constant(BIDISK, 1j))
        for _ in range(5):
            z = tuple(0.6 * rng.uniform() * np.exp(2j * np.pi * rng.uniform()) for _ in range(2))
            got = berezin_function(f, z, tol=1e-12)
            assert abs(got - quad_berezin_function(f, z)) < 1e-6

    def test_annulus_against_integral(self):
        rng = np.random.default_rng(5)
        f = LaurentSymbol.monomial(ANNULUS, [1], [2], 1.0) + LaurentSymbol.z(ANNULUS, 1, -1)
        for _ in range(5):
            z = ((0.6 + 0.25 * rng.uniform()) * np.exp(2j * np.pi * rng.uniform()),)
            got = berezin_function(f, z, tol=1e-12)
            assert abs(got - quad_berezin_function(f, z, 128, 96)) < 1e-6


class TestProfiles:
    def test_zero_operator(self):
        phi = LaurentSymbol.z(BIDISK, 1) * LaurentSymbol.z(BIDISK, 2)
        prof = boundary_profile(phi, zb1, PathSpec.distinguished(BIDISK, [1, 1]))
        assert all(abs(s.value) < 1e-14 for s in prof.samples)

    def test_constant_profile(self):
        prof = boundary_profile(zb1, zb1, PathSpec.face(BIDISK, 2, [0, 0]))
        assert len(prof.samples) == 10
        assert all(abs(s.value - 0.5) < 1e-8 for s in prof.conclusive())
        assert len(prof.conclusive()) == 10

    def test_swapped_mixed_pair_is_zero(self):
        # conj(psi) = phi here, and the semicommutator of a one-variable
        # antiholomorphic square vanishes, so the whole product is zero.
        phi = LaurentSymbol.monomial(BIDISK, [1, 0], [0, 1])
        psi = LaurentSymbol.monomial(BIDISK, [0, 1], [1, 0])
        prof = boundary_profile(phi, psi, PathSpec.distinguished(BIDISK, [1, 1]))
        assert np.max(np.abs(prof.values())) < 1e-13

    def test_dependence_on_first_factor_only(self):
        phi = zb1 + LaurentSymbol.monomial(BIDISK, [2, 0], [1, 0])
        psi = zb1 * zb1 - 1j
        prof = boundary_profile(phi, psi, PathSpec.face(BIDISK, 2, [0.3 - 0.2j, 0], 1j))
        vals = prof.values()
        assert np.max(np.abs(vals - vals[0])) < 1e-9

    def test_compact_bump_decays_strictly(self):
        chi = (1 - LaurentSymbol.z(BIDISK, 1) * zb1) * (1 - LaurentSymbol.z(BIDISK, 2)
                                                        * LaurentSymbol.zbar(BIDISK, 2))
        phi = chi + LaurentSymbol.monomial(BIDISK, [1, 0], [0, 1])
        psi = chi + LaurentSymbol.monomial(BIDISK, [0, 1], [1, 0])
        prof = boundary_profile(phi, psi, PathSpec.distinguished(BIDISK, [1, 1]))
        vals = np.abs(prof.values())
        assert len(vals) == 10
        assert np.all(np.diff(vals) < 0) and vals[-1] < 1e-3

    def test_annulus_paths(self):
        dom = ProductDomain.of(FactorDomain.annulus(0.5))
        outer = PathSpec.face(dom, 1, [0])
        inner = PathSpec(outer.anchor, outer.direction, (True,))
        assert outer.point(dom, 10)[0].real == pytest.approx(1 - 0.25 * 2**-10)
        assert inner.point(dom, 10)[0].real == pytest.approx(0.5 + 0.25 * 2**-10)

    def test_csv_columns(self):
        prof = boundary_profile(zb1, zb1, PathSpec.face(BIDISK, 2, [0, 0]), steps=2)
        lines = prof.to_csv().splitlines()
        assert lines[0] == "t,re,im,tail_bound,window,conclusive"
        assert lines[1].startswith("1,0.5,0,") and lines[1].endswith(",1")

    def test_cap_limits_conclusive_samples(self):
        prof = boundary_profile(zb1, zb1, PathSpec.face(BIDISK, 2, [0, 0]), cap=100)
        flags = [s.conclusive for s in prof.samples]
        assert flags[0] and not flags[-1]
        assert WINDOW_CAP > 100
