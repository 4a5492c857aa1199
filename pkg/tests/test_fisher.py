"""Tests for the Fisher matrix closed forms."""

import numpy as np
import pytest

import polflow as pf
from polflow.errors import NotInterior, NotOnFacet

from conftest import random_interior_eta
from oracles import fd_hessian


def fisher_n3_display(eta):
    """The 3x3 metric written with the (1 - sum)^-1 prefactor."""
    e1, e2, e3 = eta
    pref = 1.0 / (1.0 - e1 - e2 - e3)
    return pref * np.array([
        [(1.0 - e2 - e3) / e1, 1.0, 1.0],
        [1.0, (1.0 - e1 - e3) / e2, 1.0],
        [1.0, 1.0, (1.0 - e1 - e2) / e3],
    ])


def inverse_n3_display(eta):
    e1, e2, e3 = eta
    return np.array([
        [(1.0 - e1) * e1, -e1 * e2, -e1 * e3],
        [-e1 * e2, (1.0 - e2) * e2, -e2 * e3],
        [-e1 * e3, -e2 * e3, (1.0 - e3) * e3],
    ])


class TestFisherEta:
    def test_uniform_n2(self):
        m = pf.fisher_eta([1 / 3, 1 / 3]).entries
        np.testing.assert_allclose(m, [[6.0, 3.0], [3.0, 6.0]], atol=1e-12)

    def test_n3_display(self, rng):
        for _ in range(100):
            eta = random_interior_eta(rng, 3)
            np.testing.assert_allclose(pf.fisher_eta(eta).entries,
                                       fisher_n3_display(eta), atol=1e-12)

    def test_pole_on_border(self):
        with pytest.raises(NotInterior):
            pf.fisher_eta([0.0, 0.5])

    @pytest.mark.parametrize("n", [2, 5, 8])
    def test_product_is_identity(self, rng, n):
        for _ in range(200):
            eta = random_interior_eta(rng, n)
            product = pf.fisher_eta(eta).entries @ pf.fisher_inverse_eta(eta).entries
            assert np.max(np.abs(product - np.eye(n))) <= 1e-9


class TestFisherInverse:
    def test_n3_display(self, rng):
        for _ in range(100):
            eta = random_interior_eta(rng, 3)
            np.testing.assert_allclose(pf.fisher_inverse_eta(eta).entries,
                                       inverse_n3_display(eta), atol=1e-12)

    def test_zero_exactly_at_vertices(self):
        for vertex in ([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]):
            np.testing.assert_allclose(pf.fisher_inverse_eta(vertex).entries, 0.0,
                                       atol=1e-15)

    def test_nonzero_off_vertices(self, rng):
        for _ in range(50):
            eta = random_interior_eta(rng, 2)
            assert np.max(np.abs(pf.fisher_inverse_eta(eta).entries)) > 1e-6
        # border non-vertex points are nonzero too
        assert np.max(np.abs(pf.fisher_inverse_eta([0.0, 0.5]).entries)) > 1e-6

    def test_edge_midpoint_value(self):
        np.testing.assert_allclose(pf.fisher_inverse_eta([0.5, 0.5]).entries,
                                   [[0.25, -0.25], [-0.25, 0.25]], atol=1e-15)


class TestDeterminant:
    def test_uniform(self):
        assert abs(pf.fisher_inverse_det([1 / 3, 1 / 3]) - 1 / 27) <= 1e-15

    def test_zero_on_borders_only(self, rng):
        assert pf.fisher_inverse_det([0.0, 0.4]) == 0.0
        assert pf.fisher_inverse_det([0.6, 0.4]) == 0.0
        for _ in range(50):
            eta = random_interior_eta(rng, 2)
            assert pf.fisher_inverse_det(eta) > 0.0

    def test_n3_formula(self, rng):
        for _ in range(50):
            eta = random_interior_eta(rng, 3)
            expected = (1.0 - eta.sum()) * np.prod(eta)
            assert abs(pf.fisher_inverse_det(eta) - expected) <= 1e-15

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_matches_lu_determinant(self, rng, n):
        for _ in range(100):
            eta = random_interior_eta(rng, n)
            closed = pf.fisher_inverse_det(eta)
            numeric = np.linalg.det(pf.fisher_inverse_eta(eta).entries)
            assert abs(closed - numeric) <= 1e-10 * max(1.0, abs(closed))


class TestFacetRank:
    def test_zero_facet_n2(self):
        rank, basis = pf.facet_rank([0.0, 0.5])
        assert rank == 1
        direction = basis[:, 0] / np.linalg.norm(basis[:, 0])
        np.testing.assert_allclose(np.abs(direction), [0.0, 1.0], atol=1e-12)

    def test_sum_facet_n2(self):
        rank, basis = pf.facet_rank([0.25, 0.75])
        assert rank == 1
        direction = basis[:, 0] / np.linalg.norm(basis[:, 0])
        np.testing.assert_allclose(np.abs(direction), [1 / np.sqrt(2)] * 2, atol=1e-12)

    def test_zero_facet_n3(self):
        rank, basis = pf.facet_rank([0.0, 0.3, 0.4])
        assert rank == 2
        np.testing.assert_allclose(basis[0, :], 0.0, atol=1e-12)

    def test_sum_facet_basis_orthogonal_to_ones(self):
        rank, basis = pf.facet_rank([0.2, 0.3, 0.5])
        assert rank == 2
        np.testing.assert_allclose(np.ones(3) @ basis, 0.0, atol=1e-10)

    def test_rejections(self):
        with pytest.raises(NotOnFacet):
            pf.facet_rank([0.2, 0.3])  # interior
        with pytest.raises(NotOnFacet):
            pf.facet_rank([0.0, 0.0])  # vertex: two facet equations
        with pytest.raises(NotOnFacet):
            pf.facet_rank([0.0, 1.0])  # vertex on zero and sum facets


class TestPrecisionIdentity:
    def test_uniform(self):
        assert pf.precision_identity_check([1 / 3, 1 / 3]) <= 1e-12

    @pytest.mark.parametrize("n", list(range(2, 9)))
    def test_random_interior(self, rng, n):
        for _ in range(1000 // n):
            eta = random_interior_eta(rng, n)
            assert pf.precision_identity_check(eta) <= 1e-9

    def test_near_border_conditioning(self):
        eta = np.array([1e-6, 0.4])
        assert pf.precision_identity_check(eta) <= 1e-6


class TestDIDTheta:
    def test_finite_difference_agreement(self):
        theta = np.array([0.0, 0.0])
        h = 1e-5
        for axis in range(2):
            step = np.zeros(2)
            step[axis] = h
            fd = (pf.fisher_inverse_entries(pf.theta_to_eta(theta + step).eta)
                  - pf.fisher_inverse_entries(pf.theta_to_eta(theta - step).eta)) / (2 * h)
            np.testing.assert_allclose(pf.dI_dtheta(theta, axis), fd, atol=1e-8)

    def test_random_theta_n3(self, rng):
        for _ in range(20):
            theta = rng.normal(size=3)
            for axis in range(3):
                step = np.zeros(3)
                step[axis] = 1e-5
                fd = (pf.fisher_inverse_entries(pf.theta_to_eta(theta + step).eta)
                      - pf.fisher_inverse_entries(pf.theta_to_eta(theta - step).eta)) / 2e-5
                np.testing.assert_allclose(pf.dI_dtheta(theta, axis), fd, atol=1e-7)

    def test_symmetry(self, rng):
        theta = rng.normal(size=2)
        for axis in range(2):
            m = pf.dI_dtheta(theta, axis)
            np.testing.assert_allclose(m, m.T, atol=1e-15)

    def test_axis_range(self):
        with pytest.raises(IndexError):
            pf.dI_dtheta([0.0, 0.0], 2)


class TestThetaPullback:
    def test_covariance_equals_psi_hessian(self, rng):
        """diag(eta) - eta eta^T is the Hessian of the cumulant function."""
        for _ in range(10):
            theta = rng.normal(size=2)
            eta = pf.theta_to_eta(theta).eta
            cov = pf.fisher_inverse_entries(eta)
            hess = fd_hessian(pf.psi, theta, h=1e-4)
            np.testing.assert_allclose(cov, hess, atol=1e-6)


class TestPrecisionDIProduct:
    def test_matches_direct_solve(self, rng):
        for _ in range(20):
            theta = rng.normal(size=2)
            eta = pf.theta_to_eta(theta).eta
            for axis in range(2):
                product = pf.precision_dI_product(theta, axis)
                direct = np.linalg.solve(pf.fisher_inverse_entries(eta),
                                         pf.dI_dtheta(theta, axis))
                np.testing.assert_allclose(product, direct, atol=1e-9)
