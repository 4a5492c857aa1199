"""Fisher information matrix in solid coordinates and its closed forms.

At an interior point the metric is I(eta) = diag(eta)^-1 + (1-sum(eta))^-1 * J
with J the all-ones matrix.  Its inverse diag(eta) - eta eta^T is a
polynomial, so it extends to the closed simplex and beyond; the extension
vanishes exactly at the vertices and drops rank on the facets.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotOnFacet
from .simplex import EtaCoords, ThetaCoords, as_eta_array, require_interior, theta_to_eta

# A coordinate within this distance of a facet equation counts as on it.
FACET_TOL = 1e-10


@dataclass(frozen=True)
class FisherMatrix:
    """Symmetric matrix together with the coordinates it was evaluated at."""

    entries: np.ndarray
    coords: EtaCoords

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if not np.allclose(entries, entries.T, atol=1e-12):
            raise ValueError("Fisher matrix must be symmetric")
        entries = 0.5 * (entries + entries.T)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)


def fisher_entries(eta) -> np.ndarray:
    """Raw metric matrix diag(eta)^-1 + (1-sum)^-1 at an interior point."""
    arr = require_interior(eta)
    return np.diag(1.0 / arr) + 1.0 / (1.0 - arr.sum())


def fisher_eta(eta) -> FisherMatrix:
    """Fisher information matrix in solid coordinates (interior only)."""
    arr = require_interior(eta)
    return FisherMatrix(fisher_entries(arr), EtaCoords(arr))


def fisher_inverse_entries(eta) -> np.ndarray:
    """Raw inverse metric diag(eta) - eta eta^T, valid for any real eta."""
    arr = as_eta_array(eta)
    return np.diag(arr) - np.outer(arr, arr)


def fisher_inverse_eta(eta) -> FisherMatrix:
    """Inverse Fisher matrix; polynomial, defined on all of R^n."""
    arr = as_eta_array(eta)
    return FisherMatrix(fisher_inverse_entries(arr), EtaCoords(arr, extended=True))


def fisher_inverse_det(eta) -> float:
    """det(diag(eta) - eta eta^T) = (1 - sum(eta)) * prod(eta)."""
    arr = as_eta_array(eta)
    return float((1.0 - arr.sum()) * np.prod(arr))


def precision_entries(eta) -> np.ndarray:
    """Closed-form precision matrix diag(eta)^-1 + (1-sum)^-1 ones."""
    arr = require_interior(eta)
    return np.diag(1.0 / arr) + 1.0 / (1.0 - arr.sum()) * np.ones((arr.size, arr.size))


def precision_identity_check(eta) -> float:
    """Max-norm residual of (diag(eta)-eta eta^T) @ precision - identity."""
    arr = require_interior(eta)
    product = fisher_inverse_entries(arr) @ precision_entries(arr)
    return float(np.max(np.abs(product - np.eye(arr.size))))


def facet_rank(eta) -> tuple[int, np.ndarray]:
    """Numerical rank and column basis of the inverse metric on a facet.

    The point must lie on the interior of exactly one facet: a single
    eta_i = 0 with the rest strictly between the remaining constraints,
    or sum(eta) = 1 with every coordinate in (0, 1).  Returns the rank
    (n-1 there) and an orthonormal basis of the column span, which is
    parallel to the facet.
    """
    arr = as_eta_array(eta)
    n = arr.size
    zero_hits = [i for i in range(n) if abs(arr[i]) <= FACET_TOL]
    sum_hit = abs(1.0 - arr.sum()) <= FACET_TOL
    hits = len(zero_hits) + (1 if sum_hit else 0)
    if hits != 1:
        raise NotOnFacet(f"{arr!r} lies on {hits} facet equations, need exactly 1")
    if zero_hits:
        others = np.delete(arr, zero_hits[0])
        if np.any(others <= FACET_TOL) or others.sum() >= 1.0 - FACET_TOL:
            raise NotOnFacet("remaining coordinates must be interior to the facet")
    else:
        if np.any(arr <= FACET_TOL) or np.any(arr >= 1.0 - FACET_TOL):
            raise NotOnFacet("coordinates must be strictly inside (0, 1) on this facet")

    m = fisher_inverse_entries(arr)
    u, s, _ = np.linalg.svd(m)
    cutoff = n * np.finfo(float).eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return rank, u[:, :rank]


def dI_dtheta(theta, axis: int) -> np.ndarray:
    """Partial derivative of the covariance matrix diag(eta)-eta eta^T in theta.

    ``axis`` is the 0-based coordinate index.  Closed form:
    eta_i * (diag(e_i - eta) - (e_i - eta) eta^T - eta (e_i - eta)^T).
    """
    arr = theta.theta if isinstance(theta, ThetaCoords) else np.asarray(theta, dtype=float)
    n = arr.size
    if not 0 <= axis < n:
        raise IndexError(f"axis {axis} out of range for dimension {n}")
    eta = theta_to_eta(arr).eta
    ei = np.zeros(n)
    ei[axis] = 1.0
    diff = ei - eta
    return eta[axis] * (np.diag(diff) - np.outer(diff, eta) - np.outer(eta, diff))


def precision_dI_product(theta, axis: int) -> np.ndarray:
    """Numerical product precision(eta(theta)) @ dI_dtheta(theta, axis).

    Both factors have verified closed forms; no closed form is claimed
    for the product itself.
    """
    arr = theta.theta if isinstance(theta, ThetaCoords) else np.asarray(theta, dtype=float)
    eta = theta_to_eta(arr).eta
    return precision_entries(eta) @ dI_dtheta(arr, axis)
