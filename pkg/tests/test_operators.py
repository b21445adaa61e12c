import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp
from numpy.testing import assert_allclose

from momentops import (ConfigurationError, HankelSection, Measure,
                       abel_sum, cesaro_apply, hankel_section, hilbert_apply,
                       hilbert_apply_fast, hilbert_coeff_via_abel,
                       integral_apply, taylor_from_disc_samples)


def loop_oracle(mu, a):
    """Plain double loop, independent of the numpy correlation kernel."""
    return np.array([sum(mu[n + k] * a[k] for k in range(len(a)))
                     for n in range(len(a))])


@pytest.fixture(scope="module")
def beta2_moments():
    return Measure.beta(2).moments(2 * 4096)


random_vectors = hnp.arrays(np.float64, st.integers(1, 48),
                            elements=st.floats(-10, 10, width=32))


class TestHilbertApply:
    def test_against_loop_oracle(self):
        rng = np.random.default_rng(7)
        mu = Measure.atomic([(0.3, 0.5), (0.8, 1.2), (0.95, 0.1)]).moments(63).values
        a = rng.standard_normal(32)
        assert_allclose(hilbert_apply(mu, a), loop_oracle(mu, a), rtol=1e-13)

    def test_complex_against_loop_oracle(self):
        rng = np.random.default_rng(8)
        mu = Measure.beta(2).moments(31).values
        a = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        assert_allclose(hilbert_apply(mu, a), loop_oracle(mu, a), rtol=1e-13)

    def test_origin_atom_keeps_only_the_constant(self):
        mu = Measure.atomic([(0.0, 1.0)]).moments(14).values
        a = np.arange(1.0, 8.0)
        out = hilbert_apply(mu, a)
        assert out[0] == a[0] and np.all(out[1:] == 0.0)

    def test_lebesgue_unit_coefficient(self):
        mu = Measure.lebesgue().moments(63).values
        e0 = np.zeros(32)
        e0[0] = 1.0
        assert_allclose(hilbert_apply(mu, e0), 1.0 / (np.arange(32) + 1),
                        rtol=1e-12)

    def test_beta2_all_ones_telescopes(self, beta2_moments):
        k = 4096
        out = hilbert_apply_fast(beta2_moments, np.ones(k))
        # sum_{j<k} 2/((j+1)(j+2)) = 2 - 2/(k+1)
        assert out[0] == pytest.approx(2.0 - 2.0 / (k + 1), rel=1e-9)
        assert out[0] == pytest.approx(2.0, abs=1e-3)

    def test_insufficient_moments(self):
        with pytest.raises(ConfigurationError):
            hilbert_apply(np.ones(10), np.ones(8))

    @settings(max_examples=50, deadline=None)
    @given(random_vectors)
    def test_fast_path_agrees(self, a):
        mu = Measure.atomic([(0.7, 1.0), (0.2, 2.0)]).moments(2 * len(a)).values
        direct = hilbert_apply(mu, a)
        fast = hilbert_apply_fast(mu, a)
        # relative to the data scale: outputs may be tiny by moment decay
        scale = max(np.max(np.abs(direct)), np.max(np.abs(a)) * mu[0], 1e-12)
        assert np.max(np.abs(fast - direct)) <= 1e-10 * scale

    def test_fast_path_complex_and_batch(self):
        rng = np.random.default_rng(9)
        mu = Measure.beta(1.5).moments(255).values
        batch = rng.standard_normal((5, 128)) + 1j * rng.standard_normal((5, 128))
        fast = hilbert_apply_fast(mu, batch)
        for row, out in zip(batch, fast):
            assert_allclose(out, hilbert_apply(mu, row), rtol=1e-10)

    def test_zero_vector(self):
        mu = Measure.lebesgue().moments(64).values
        assert_allclose(hilbert_apply_fast(mu, np.zeros(32)), 0.0, atol=0)

    def test_linearity(self):
        rng = np.random.default_rng(10)
        mu = Measure.beta(2).moments(127).values
        a, b = rng.standard_normal((2, 64))
        lhs = hilbert_apply(mu, 2.5 * a - 1.5 * b)
        rhs = 2.5 * hilbert_apply(mu, a) - 1.5 * hilbert_apply(mu, b)
        assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-14)


class TestCesaro:
    def test_unit_coefficient_reads_moments(self):
        mu = Measure.beta(0.5).moments(20).values
        e0 = np.zeros(16)
        e0[0] = 1.0
        assert_allclose(cesaro_apply(mu, e0), mu[:16])

    def test_lebesgue_all_ones(self):
        mu = Measure.lebesgue().moments(32).values
        assert_allclose(cesaro_apply(mu, np.ones(32)), 1.0, rtol=1e-12)

    def test_zero(self):
        mu = Measure.lebesgue().moments(8).values
        assert_allclose(cesaro_apply(mu, np.zeros(8)), 0.0, atol=0)

    def test_length_check(self):
        with pytest.raises(ConfigurationError):
            cesaro_apply(np.ones(4), np.ones(8))


class TestHankelSectionMatrix:
    @pytest.mark.parametrize("m", [
        Measure.lebesgue(), Measure.beta(0.5),
        Measure.atomic([(0.4, 1.0), (0.9, 0.5)]),
    ], ids=["lebesgue", "beta05", "atomic"])
    def test_positive_semidefinite(self, m):
        eigs = HankelSection(m.moments(255), 128).eigenvalues()
        norm = eigs[0]
        assert eigs[-1] >= -1e-8 * norm

    def test_symmetry_and_entries(self):
        mu = Measure.lebesgue().moments(9).values
        h = hankel_section(mu, 5)
        assert_allclose(h, h.T)
        assert h[2, 3] == mu[5] and h[0, 0] == mu[0]

    def test_top_eigenvalue_monotone_in_size(self):
        ms = Measure.beta(2).moments(1023)
        tops = [HankelSection(ms, n).eigenvalues()[0] for n in (16, 64, 256)]
        assert tops[0] <= tops[1] + 1e-12 and tops[1] <= tops[2] + 1e-12

    def test_monotone_shadow_of_monomial_images(self):
        # max over |z|=r of the image of z^k is sum_n mu_{n+k} r^n,
        # non-increasing in k
        mu = Measure.beta(1.0).moments(255).values
        length = 128
        rs = 1.0 - 2.0 ** -np.arange(1, 13)
        for r in rs:
            pw = r ** np.arange(length)
            vals = [np.dot(mu[k:k + length], pw) for k in range(64)]
            assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


class TestAbel:
    def test_geometric(self):
        res = abel_sum(0.5 ** np.arange(64))
        assert res.converged and res.estimate == pytest.approx(2.0, rel=1e-12)

    def test_alternating_signs(self):
        res = abel_sum((-1.0) ** np.arange(2 ** 16))
        assert res.converged
        assert res.estimate == pytest.approx(0.5, abs=1e-5)

    def test_beta2_moment_terms(self, beta2_moments):
        res = abel_sum(beta2_moments.values[:4096])
        assert res.converged
        assert res.estimate == pytest.approx(2.0, abs=1e-3)

    def test_divergent_flagged(self):
        mu = Measure.lebesgue().moments(4096).values
        res = abel_sum(mu)
        assert not res.converged
        assert len(res.values) == 20

    @settings(max_examples=40, deadline=None)
    @given(hnp.arrays(np.float64, st.integers(24, 64),
                      elements=st.floats(-3, 3, width=32)),
           st.floats(0.05, 0.6))
    def test_agrees_with_direct_sum_when_absolutely_convergent(self, c, decay):
        terms = c * decay ** np.arange(len(c))
        res = abel_sum(terms)
        assert res.converged
        assert res.estimate == pytest.approx(float(terms.sum()), abs=1e-6)

    def test_short_sequences_cannot_converge(self):
        # four terms of a slowly decaying sequence determine no limit
        res = abel_sum(np.array([1.0, 0.5, 0.25, 0.125]))
        assert not res.converged

    def test_custom_grid_validation(self):
        with pytest.raises(ConfigurationError):
            abel_sum(np.ones(4), r_grid=[0.5, 1.0])


class TestCoeffViaAbel:
    def test_matches_hilbert_apply_on_polynomials(self, beta2_moments):
        rng = np.random.default_rng(11)
        a = rng.standard_normal(33)
        direct = hilbert_apply(beta2_moments.values[:65], a)
        for n in (0, 3, 17):
            res = hilbert_coeff_via_abel(beta2_moments, a, n)
            assert res.converged
            assert res.estimate == pytest.approx(direct[n], abs=1e-12)

    def test_zero_input(self):
        res = hilbert_coeff_via_abel(np.ones(32), np.zeros(8), 2)
        assert res.estimate == 0.0

    def test_beta2_ones_leading_coefficient(self, beta2_moments):
        res = hilbert_coeff_via_abel(beta2_moments, np.ones(4096), 0)
        assert res.converged
        assert res.estimate == pytest.approx(2.0, abs=1e-3)

    def test_needs_enough_moments(self):
        with pytest.raises(ConfigurationError):
            hilbert_coeff_via_abel(np.ones(8), np.ones(8), 4)


class TestIntegralApply:
    def test_single_atom(self):
        m = Measure.atomic([(0.5, 1.0)])
        f = np.array([1.0, 2.0, 3.0])
        z = 0.3 + 0.1j
        expected = (1 + 2 * 0.5 + 3 * 0.25) / (1 - 0.5 * z)
        assert integral_apply(m, f, z) == pytest.approx(expected, rel=1e-13)

    def test_origin_atom_evaluates_at_zero(self):
        m = Measure.atomic([(0.0, 1.0)])
        f = np.array([4.0, 2.0, 3.0])
        assert integral_apply(m, f, 0.7j) == pytest.approx(4.0)

    def test_vectorized_z(self):
        m = Measure.beta(2)
        f = np.array([1.0, 1.0])
        zs = np.array([0.0, 0.3, 0.2 + 0.4j])
        out = integral_apply(m, f, zs)
        assert out.shape == zs.shape
        assert out[0] == pytest.approx(
            integral_apply(m, f, 0.0), rel=1e-13)

    def test_rejects_points_outside_disc(self):
        with pytest.raises(ConfigurationError):
            integral_apply(Measure.lebesgue(), np.ones(3), 1.0)


class TestCauchyRecovery:
    def test_exact_on_polynomial_samples(self):
        coeffs = np.array([1.0, -2.0, 0.0, 0.5, 3.0])

        def fn(z):
            return np.polynomial.polynomial.polyval(z, coeffs)

        rec = taylor_from_disc_samples(fn, 4)
        assert_allclose(rec.real, coeffs, atol=1e-13)
        assert_allclose(rec.imag, 0.0, atol=1e-13)

    def test_coincidence_with_hankel_form(self, beta2_moments):
        rng = np.random.default_rng(12)
        m = Measure.beta(2)
        a = rng.standard_normal(33)
        rec = taylor_from_disc_samples(
            lambda z: integral_apply(m, a, z), 32)
        direct = hilbert_apply(beta2_moments.values[:65], a)
        assert np.max(np.abs(rec - direct[:33])) < 1e-8

    def test_radius_validation(self):
        with pytest.raises(ConfigurationError):
            taylor_from_disc_samples(lambda z: z, 4, radius=1.5)
