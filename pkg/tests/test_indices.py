"""Tests for the polarization measure and the cubic index family."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import polflow as pf
from polflow.errors import UnsupportedDimension

from conftest import random_interior_eta, random_simplex_probs
from oracles import cubic_index_on_probs, enumeration_pol, fd_gradient


class TestPol:
    def test_concentration_is_zero(self):
        assert pf.pol([1.0, 0.0, 0.0]) == 0.0

    def test_maximum_at_two_equal_classes(self):
        assert abs(pf.pol([0.0, 0.5, 0.5]) - 0.25) <= 1e-15

    def test_uniform_three_classes(self):
        assert abs(pf.pol(pf.SimplexPoint([1 / 3, 1 / 3, 1 / 3])) - 2 / 9) <= 1e-15

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_enumeration_oracle(self, rng, n):
        for _ in range(20):
            probs = random_simplex_probs(rng, n)
            assert abs(pf.pol(probs) - enumeration_pol(probs)) <= 1e-12

    def test_permutation_invariance(self, rng):
        for _ in range(50):
            probs = random_simplex_probs(rng, 3)
            value = pf.pol(probs)
            assert abs(pf.pol(rng.permutation(probs)) - value) <= 1e-15

    def test_range_and_argmax_grid(self):
        """0 <= POL <= 1/4 on the closed 2-simplex; max at two-equal-mass."""
        step = 1e-3
        e1 = np.arange(0.0, 1.0 + step / 2, step)
        grid1, grid2 = np.meshgrid(e1, e1, indexing="ij")
        mask = grid1 + grid2 <= 1.0 + 1e-12
        values = pf.pol_eta(np.stack([grid1[mask], grid2[mask]], axis=-1))
        assert values.min() >= -1e-12
        assert values.max() <= 0.25 + 1e-12
        best = np.stack([grid1[mask], grid2[mask]], axis=-1)[np.argmax(values)]
        midpoints = np.array([[0.5, 0.5], [0.5, 0.0], [0.0, 0.5]])
        assert min(np.linalg.norm(best - m) for m in midpoints) <= 2 * step


class TestPolEta:
    def test_edge_midpoint(self):
        assert abs(pf.pol_eta([0.5, 0.5]) - 0.25) <= 1e-15

    def test_vertex(self):
        assert pf.pol_eta([0.0, 0.0]) == 0.0

    def test_agrees_with_pol_on_interior(self, rng):
        for _ in range(1000):
            eta = random_interior_eta(rng, 2)
            assert abs(pf.pol_eta(eta) - pf.pol(pf.eta_to_point(eta))) <= 1e-14


class TestGradPolEta:
    def test_uniform_is_critical(self):
        np.testing.assert_allclose(pf.grad_pol_eta([1 / 3, 1 / 3]), 0.0, atol=1e-15)

    def test_vertex_value(self):
        np.testing.assert_allclose(pf.grad_pol_eta([0.0, 0.0]), [1.0, 1.0], atol=1e-15)

    def test_displayed_pair_n2(self, rng):
        for _ in range(100):
            e1, e2 = rng.uniform(-0.2, 1.2, size=2)
            expected = np.array([
                6 * e1 * e2 + 3 * e2**2 - 2 * e1 - 4 * e2 + 1,
                6 * e2 * e1 + 3 * e1**2 - 2 * e2 - 4 * e1 + 1,
            ])
            np.testing.assert_allclose(pf.grad_pol_eta([e1, e2]), expected, atol=1e-13)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_finite_difference_agreement(self, rng, n):
        for _ in range(1000 // n):
            eta = rng.uniform(0.0, 1.0, size=n)
            fd = fd_gradient(pf.pol_eta, eta, h=1e-6)
            np.testing.assert_allclose(pf.grad_pol_eta(eta), fd, atol=1e-7)


class TestCubicIndex:
    def test_pol_specialization(self, rng):
        for _ in range(1000):
            eta = rng.uniform(-0.2, 1.2, size=2)
            assert abs(pf.cubic_index_eta(pf.POL_COEFFS, eta) - pf.pol_eta(eta)) <= 1e-14

    def test_zero_coeffs(self, rng):
        zero = pf.CubicIndexCoeffs(0, 0, 0, 0, 0)
        for _ in range(10):
            assert pf.cubic_index_eta(zero, rng.uniform(size=2)) == 0.0

    @given(st.tuples(*[st.floats(-2.0, 2.0) for _ in range(5)]),
           st.tuples(st.floats(0.05, 0.45), st.floats(0.05, 0.45)))
    @settings(max_examples=100, deadline=None)
    def test_symmetry_under_swap(self, coeff_values, eta):
        coeffs = pf.CubicIndexCoeffs(*coeff_values)
        a = pf.cubic_index_eta(coeffs, np.array(eta))
        b = pf.cubic_index_eta(coeffs, np.array(eta)[::-1])
        assert abs(a - b) <= 1e-12

    def test_matches_probability_form(self, rng):
        for _ in range(100):
            coeffs = rng.normal(size=5)
            eta = random_interior_eta(rng, 2)
            probs = np.concatenate([[1.0 - eta.sum()], eta])
            direct = cubic_index_on_probs(coeffs, probs)
            via_eta = pf.cubic_index_eta(pf.CubicIndexCoeffs(*coeffs), eta)
            assert abs(direct - via_eta) <= 1e-12

    def test_dimension_guard(self):
        with pytest.raises(UnsupportedDimension):
            pf.cubic_index_eta(pf.POL_COEFFS, [0.2, 0.3, 0.1])


class TestCubicConditions:
    def test_pol_coeffs_admissible(self):
        report = pf.cubic_conditions(pf.POL_COEFFS)
        assert report.sum_condition and report.sum_residual == 0.0
        assert report.stability_condition and report.stability_value == -1.0
        assert report.admissible

    def test_condition_one_without_two(self):
        report = pf.cubic_conditions(pf.CubicIndexCoeffs(1, 0, 6, 0, 0))
        assert report.sum_condition
        assert not report.stability_condition
        assert report.stability_value == 3.0
        assert not report.admissible

    def test_scaled_pol_admissible(self):
        report = pf.cubic_conditions(pf.CubicIndexCoeffs(0, 2, 0, 0, 0))
        assert report.admissible

    def test_classify_method(self):
        assert pf.POL_COEFFS.classify().admissible
