import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from momentops import (ConfigurationError, DomainError, RadialGrid,
                       TaylorPolynomial, Weight, growth_witness, lp_norm,
                       weighted_sup_norm)
from momentops.spaces import R_MAX

coeff_arrays = st.lists(st.floats(-5, 5), min_size=1, max_size=24).map(np.array)


class TestWeight:
    def test_standard_values(self):
        v = Weight.standard(0.7)
        assert v.value(0.0) == 1.0
        assert Weight.standard(1.0).value(0.5) == pytest.approx(0.5)
        assert v.value(0.5) == pytest.approx(0.5 ** 0.7)

    def test_constant(self):
        w = Weight.constant_one()
        assert w.value(0.9) == 1.0
        assert not Weight.standard(1.0).value(0.9) == 1.0

    def test_gap_form_deep(self):
        v = Weight.standard(2.0)
        assert v.value_from_gap(2.0 ** -40) == pytest.approx(2.0 ** -80)

    def test_domain(self):
        with pytest.raises(DomainError):
            Weight.standard(1.0).value(1.0)
        with pytest.raises(ConfigurationError):
            Weight.standard(0.0)

    def test_tabulated(self):
        v = Weight.tabulated([(0.0, 1.0), (0.5, 0.5), (0.9, 0.01)])
        assert v.value(0.25) == pytest.approx(0.75)
        assert not v.is_essential
        assert Weight.standard(1.0).is_essential

    def test_tabulated_rejects_non_vanishing(self):
        with pytest.raises(ConfigurationError):
            Weight.tabulated([(0.0, 1.0), (0.9, 0.9)])
        with pytest.raises(ConfigurationError):
            Weight.tabulated([(0.0, 0.5), (0.9, 1.0)])

    def test_reciprocal_kernel(self):
        fn = Weight.standard(0.5).reciprocal_kernel()
        t = np.array([0.75])
        assert fn(t, 1 - t)[0] == pytest.approx(2.0)


class TestTaylorPolynomial:
    def test_eval_examples(self):
        ones = TaylorPolynomial(np.ones(9))
        assert ones.eval(0.0) == 1.0
        assert ones.eval(0.5) == pytest.approx(2 * (1 - 0.5 ** 9))
        z = TaylorPolynomial([0.0, 1.0])
        for x in (0.25, -0.5, 0.3 + 0.2j):
            assert z.eval(x) == pytest.approx(x)

    def test_eval_cutoff(self):
        f = TaylorPolynomial([1.0, 1.0])
        f.eval(R_MAX)
        with pytest.raises(DomainError):
            f.eval(0.5 + 0.9j)

    def test_nonneg_detection(self):
        assert TaylorPolynomial([1.0, 0.0, 2.0]).nonneg
        assert not TaylorPolynomial([1.0, -0.5]).nonneg
        assert not TaylorPolynomial([1.0 + 0j, 2.0 + 0j]).nonneg

    def test_lp_norms(self):
        assert lp_norm([1.0, 0.0, 0.0], 2) == 1.0
        assert lp_norm(np.ones(4), 1) == 4.0
        assert lp_norm([3.0, 4.0], 2) == pytest.approx(5.0)
        assert lp_norm([1.0, -7.0, 2.0], np.inf) == 7.0
        with pytest.raises(DomainError):
            lp_norm([1.0], 0.5)


class TestWeightedSupNorm:
    def test_constant_function(self):
        assert weighted_sup_norm([1.0], Weight.standard(0.7)) == 1.0

    def test_monomial_v1(self):
        # (1-r) r is maximized at r = 1/2, a grid point
        assert weighted_sup_norm([0.0, 1.0], Weight.standard(1.0)) == 0.25

    def test_zero(self):
        assert weighted_sup_norm(np.zeros(5), Weight.standard(2.0)) == 0.0

    @settings(max_examples=30, deadline=None)
    @given(coeff_arrays, coeff_arrays)
    def test_homogeneous_and_subadditive(self, a, b):
        n = max(len(a), len(b))
        a = np.pad(a, (0, n - len(a)))
        b = np.pad(b, (0, n - len(b)))
        v = Weight.standard(0.5)
        grid = RadialGrid(levels=10, angles=16)
        na = weighted_sup_norm(a, v, grid)
        assert weighted_sup_norm(3.0 * a, v, grid) == pytest.approx(3 * na, rel=1e-12)
        nsum = weighted_sup_norm(a + b, v, grid)
        assert nsum <= na + weighted_sup_norm(b, v, grid) + 1e-12

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(0, 3), min_size=1, max_size=16))
    def test_nonneg_theta_zero_is_the_max(self, coeffs):
        # for non-negative coefficients the full angle scan never beats theta=0
        f_flagged = TaylorPolynomial(np.asarray(coeffs), nonneg=True)
        f_scanned = TaylorPolynomial(np.asarray(coeffs), nonneg=False)
        v = Weight.standard(0.8)
        grid = RadialGrid(levels=12, angles=32)
        on_axis = weighted_sup_norm(f_flagged, v, grid)
        scanned = weighted_sup_norm(f_scanned, v, grid)
        assert scanned <= on_axis * (1 + 1e-12) + 1e-15


class TestGrowthWitness:
    def test_gamma_one_is_geometric(self):
        assert_allclose(growth_witness(1.0, 16).coeffs, np.ones(17))

    def test_gamma_two_binomial(self):
        assert_allclose(growth_witness(2.0, 10).coeffs, np.arange(1.0, 12.0))

    def test_gamma_half_asymptotics(self):
        w = growth_witness(0.5, 10000)
        n = np.arange(10, 10001)
        ratio = w.coeffs[10:] * np.sqrt(n)
        assert ratio.min() >= 0.5 and ratio.max() <= 1.2

    @pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
    def test_norm_bounded_in_truncation(self, gamma):
        # regression value: the grid norm of every truncation equals 1.0
        # (the weighted tail of (1-z)^-gamma never exceeds its r=0 value)
        v = Weight.standard(gamma)
        norms = [weighted_sup_norm(growth_witness(gamma, n), v)
                 for n in (64, 256, 1024, 4096)]
        assert_allclose(norms, 1.0, rtol=1e-12)

    def test_rejects_bad_gamma(self):
        with pytest.raises(ConfigurationError):
            growth_witness(-1.0, 10)


class TestRadialGrid:
    def test_geometry(self):
        g = RadialGrid(levels=4, angles=8)
        assert_allclose(g.radii, [0.0, 0.5, 0.75, 0.875, 0.9375])
        assert np.all(np.diff(g.radii) > 0) and g.radii[-1] < 1
        assert len(g.thetas) == 8

    def test_level_cap(self):
        with pytest.raises(ConfigurationError):
            RadialGrid(levels=40)
