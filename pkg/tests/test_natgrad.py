"""Tests for the natural-gradient fields and their Jacobians."""

import numpy as np
import pytest

import polflow as pf
from polflow.errors import UnsupportedDimension

from conftest import random_interior_eta
from oracles import fd_gradient

MIDPOINT_JACOBIANS = {
    (0.0, 0.5): -np.array([[2.0, 0.0], [1.0, 4.0]]) / 8.0,
    (0.5, 0.0): -np.array([[4.0, 1.0], [0.0, 2.0]]) / 8.0,
    (0.5, 0.5): -np.array([[3.0, -1.0], [-1.0, 3.0]]) / 8.0,
}


class TestNaturalGradient:
    def test_zero_gradient(self):
        np.testing.assert_allclose(pf.natural_gradient([0.0, 0.0], [0.3, 0.3]), 0.0,
                                   atol=1e-15)

    def test_vertex_kills_any_gradient(self, rng):
        for vertex in ([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]):
            g = rng.normal(size=2)
            np.testing.assert_allclose(pf.natural_gradient(g, vertex), 0.0, atol=1e-12)

    def test_quarter_point_value(self):
        eta = np.array([0.25, 0.25])
        composed = pf.natural_gradient(pf.grad_pol_eta(eta), eta)
        assert abs(composed[0] - 1.0 / 128.0) <= 1e-15
        direct = pf.grad_pol_eta(eta) @ pf.fisher_inverse_eta(eta).entries
        np.testing.assert_allclose(composed, direct, atol=1e-15)


class TestNatgradPolN2:
    def test_interior_critical_point(self):
        np.testing.assert_allclose(pf.natgrad_pol_n2([1 / 3, 1 / 3]), 0.0, atol=1e-15)

    def test_midpoint_zero(self):
        np.testing.assert_allclose(pf.natgrad_pol_n2([0.5, 0.5]), 0.0, atol=1e-15)

    def test_quarter_point(self):
        np.testing.assert_allclose(pf.natgrad_pol_n2([0.25, 0.25]),
                                   [0.0078125, 0.0078125], atol=1e-15)

    def test_equals_composition_on_grid(self):
        ticks = np.linspace(0.0, 1.0, 50)
        g1, g2 = np.meshgrid(ticks, ticks, indexing="ij")
        batch = np.stack([g1.ravel(), g2.ravel()], axis=-1)
        closed = pf.natgrad_pol_n2(batch)
        composed = pf.natural_gradient(pf.grad_pol_eta(batch), batch)
        assert np.max(np.abs(closed - composed)) <= 1e-12


class TestJacobianClosedForm:
    def test_identity_at_vertices(self):
        for vertex in ([0.0, 0.0], [0.0, 1.0], [1.0, 0.0]):
            np.testing.assert_allclose(pf.jacobian_natgrad_pol_n2(vertex), np.eye(2),
                                       atol=1e-15)

    @pytest.mark.parametrize("point,expected", list(MIDPOINT_JACOBIANS.items()))
    def test_midpoint_values(self, point, expected):
        np.testing.assert_allclose(pf.jacobian_natgrad_pol_n2(np.array(point)),
                                   expected, atol=1e-15)

    def test_finite_difference_agreement(self, rng):
        for _ in range(200):
            eta = rng.uniform(-0.1, 1.1, size=2)
            fd = pf.jacobian_fd(pf.natgrad_pol_n2, eta)
            np.testing.assert_allclose(pf.jacobian_natgrad_pol_n2(eta), fd, atol=1e-7)


class TestJacobianFD:
    def test_linear_field_exact(self):
        a = np.array([[1.5, -0.3], [0.2, 0.8]])
        fd = pf.jacobian_fd(lambda eta: eta @ a.T, np.array([0.3, 0.4]))
        np.testing.assert_allclose(fd, a, atol=1e-9)

    def test_on_closed_form_midpoint(self):
        fd = pf.jacobian_fd(pf.natgrad_pol_n2, np.array([0.5, 0.5]), h=1e-5)
        np.testing.assert_allclose(fd, MIDPOINT_JACOBIANS[(0.5, 0.5)], atol=1e-7)

    def test_cubic_field_with_pol_coeffs(self, rng):
        field = pf.cubic_field(pf.POL_COEFFS)
        for _ in range(20):
            eta = rng.uniform(0.0, 1.0, size=2)
            fd = pf.jacobian_fd(field, eta, h=1e-5)
            np.testing.assert_allclose(fd, pf.jacobian_natgrad_pol_n2(eta), atol=1e-7)


class TestCubicNatgrad:
    def test_pol_specialization(self, rng):
        for _ in range(200):
            eta = rng.uniform(-0.2, 1.2, size=2)
            np.testing.assert_allclose(pf.cubic_natgrad_n2(pf.POL_COEFFS, eta),
                                       pf.natgrad_pol_n2(eta), atol=1e-14)

    def test_zero_at_vertices(self, rng):
        for _ in range(20):
            coeffs = pf.CubicIndexCoeffs(*rng.normal(size=5))
            for vertex in ([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]):
                np.testing.assert_allclose(pf.cubic_natgrad_n2(coeffs, vertex), 0.0,
                                           atol=1e-12)

    def test_zero_at_uniform(self, rng):
        for _ in range(20):
            coeffs = pf.CubicIndexCoeffs(*rng.normal(size=5))
            np.testing.assert_allclose(pf.cubic_natgrad_n2(coeffs, [1 / 3, 1 / 3]), 0.0,
                                       atol=1e-13)

    def test_matches_metric_corrected_fd_gradient(self, rng):
        for _ in range(100):
            coeffs = pf.CubicIndexCoeffs(*rng.normal(size=5))
            eta = rng.uniform(0.05, 0.8, size=2)
            fd_grad = fd_gradient(lambda x: pf.cubic_index_eta(coeffs, x), eta)
            expected = pf.natural_gradient(fd_grad, eta)
            got = pf.cubic_natgrad_n2(coeffs, eta)
            assert np.max(np.abs(got - expected)) <= 1e-6 * max(1.0, np.max(np.abs(got)))

    def test_dimension_guard(self):
        with pytest.raises(UnsupportedDimension):
            pf.cubic_natgrad_n2(pf.POL_COEFFS, [0.1, 0.2, 0.3])


class TestFacetTangency:
    def test_zero_facets(self, rng):
        for _ in range(100):
            t = rng.uniform(0.01, 0.99)
            assert abs(pf.natgrad_pol_n2([0.0, t])[0]) <= 1e-15
            assert abs(pf.natgrad_pol_n2([t, 0.0])[1]) <= 1e-15

    def test_sum_facet_parallel(self, rng):
        for _ in range(100):
            t = rng.uniform(0.01, 0.99)
            g = pf.natgrad_pol_n2([t, 1.0 - t])
            assert abs(g[0] + g[1]) <= 1e-14

    def test_euclidean_gradient_not_parallel(self):
        """The uncorrected gradient exits the simplex at facet points."""
        euclid = pf.pol_euclidean_field()(np.array([0.7, 0.0]))
        assert abs(euclid[1]) > 0.1
        natural = pf.natgrad_pol_n2([0.7, 0.0])
        assert abs(natural[1]) <= 1e-15


class TestAscentProperties:
    def test_euler_step_increases_index(self, rng):
        for _ in range(100):
            eta = random_interior_eta(rng, 2, margin=0.02)
            g = pf.natgrad_pol_n2(eta)
            if np.linalg.norm(g) < 1e-8:
                continue
            stepped = eta + 1e-4 * g
            assert pf.pol_eta(stepped) > pf.pol_eta(eta)

    def test_chain_rule_along_flow(self):
        """d/dt of the index along the flow equals the Fisher pairing."""
        field = pf.pol_field(2)
        rec = pf.integrate(field, [0.4, 0.2], dt=0.01, t_max=5.0, stop_tol=1e-12)
        h = 0.01
        for k in range(1, len(rec.times) - 1, 25):
            eta = rec.states[k]
            g = pf.natgrad_pol_n2(eta)
            pairing = g @ pf.fisher_eta(eta).entries @ g
            deriv = (rec.values[k + 1] - rec.values[k - 1]) / (2.0 * h)
            assert abs(deriv - pairing) <= 1e-6 * max(1.0, abs(pairing)) + 1e-6
