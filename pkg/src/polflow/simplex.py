"""Points on the open probability simplex and its three coordinate charts.

A distribution on the categories {0, 1, ..., n} is stored as the full
vector pi of length n+1.  Three parametrizations of the interior are
supported, all dropping category 0:

* solid coordinates  eta_j = pi_j            (j = 1..n),
* exponential coordinates  theta_j = log(pi_j / pi_0),
* projective coordinates  xi_j = pi_j / pi_0.

Tangent vectors are represented as centered random variables at the base
point, with inner product <u, v> = E_pi[u v].
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidDistribution, NotInterior

# A coordinate counts as interior when it clears this floor; border work
# must go through the explicitly extended polynomial paths instead.
INTERIOR_TOL = 1e-12

# Constructors absorb ingestion round-off up to this deviation of the sum
# from 1 and reject anything larger.
SUM_TOL = 1e-9


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SimplexPoint:
    """Strictly positive probability vector on n+1 categories."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size < 2:
            raise InvalidDistribution("need a 1-d vector with at least two categories")
        if not np.all(np.isfinite(probs)):
            raise InvalidDistribution("probabilities must be finite")
        if np.any(probs <= 0.0):
            raise InvalidDistribution("probabilities must be strictly positive")
        total = probs.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise InvalidDistribution(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", _freeze(probs / total))

    @property
    def n(self) -> int:
        """Category count minus one (the simplex dimension)."""
        return self.probs.size - 1

    def expectation(self, values) -> float:
        return float(self.probs @ np.asarray(values, dtype=float))


@dataclass(frozen=True)
class EtaCoords:
    """Solid-simplex coordinates (eta_1..eta_n).

    Interior points satisfy eta_j > 0 and sum(eta) < 1.  With
    ``extended=True`` arbitrary finite values are allowed; the polynomial
    fields and the inverse Fisher matrix remain well defined there.
    """

    eta: np.ndarray
    extended: bool = False

    def __post_init__(self):
        eta = np.asarray(self.eta, dtype=float)
        if eta.ndim != 1 or eta.size < 1:
            raise NotInterior("need a 1-d coordinate vector")
        if not np.all(np.isfinite(eta)):
            raise NotInterior("coordinates must be finite")
        if not self.extended and not _is_interior(eta):
            raise NotInterior(f"{eta!r} is not interior; pass extended=True to allow")
        object.__setattr__(self, "eta", _freeze(eta))

    @property
    def n(self) -> int:
        return self.eta.size

    @property
    def interior(self) -> bool:
        return _is_interior(self.eta)


@dataclass(frozen=True)
class ThetaCoords:
    """Exponential-family natural parameters (theta_1..theta_n)."""

    theta: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        if theta.ndim != 1 or theta.size < 1:
            raise NotInterior("need a 1-d coordinate vector")
        if not np.all(np.isfinite(theta)):
            raise NotInterior("natural parameters must be finite")
        object.__setattr__(self, "theta", _freeze(theta))

    @property
    def n(self) -> int:
        return self.theta.size


@dataclass(frozen=True)
class TangentVector:
    """Centered random variable at a base point (element of the tangent space)."""

    values: np.ndarray
    base: SimplexPoint
    _mean_tol: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.base.probs.shape:
            raise DimensionMismatch("tangent values must match the base category count")
        mean = float(self.base.probs @ values)
        if abs(mean) > self._mean_tol:
            raise InvalidDistribution(f"tangent vector has base mean {mean!r}, not 0")
        object.__setattr__(self, "values", _freeze(values))

    @classmethod
    def centered(cls, values, base: SimplexPoint) -> "TangentVector":
        """Subtract the base mean so the result is exactly centered."""
        values = np.asarray(values, dtype=float)
        return cls(values - float(base.probs @ values), base)

    def norm(self) -> float:
        """Fisher norm sqrt(E_base[values^2])."""
        return float(np.sqrt(self.base.probs @ (self.values**2)))


def _is_interior(eta: np.ndarray) -> bool:
    return bool(np.min(eta) >= INTERIOR_TOL and 1.0 - eta.sum() >= INTERIOR_TOL)


def as_eta_array(eta) -> np.ndarray:
    """Coerce EtaCoords or array-like to a plain coordinate vector."""
    if isinstance(eta, EtaCoords):
        return eta.eta
    return np.asarray(eta, dtype=float)


def require_interior(eta) -> np.ndarray:
    arr = as_eta_array(eta)
    if not _is_interior(arr):
        raise NotInterior(f"{arr!r} is not in the open solid simplex")
    return arr


def eta_to_point(eta) -> SimplexPoint:
    """Map solid coordinates to the full probability vector (1-sum, eta...)."""
    arr = require_interior(eta)
    return SimplexPoint(np.concatenate([[1.0 - arr.sum()], arr]))


def point_to_eta(p: SimplexPoint) -> EtaCoords:
    """Drop category 0; inverse of eta_to_point."""
    return EtaCoords(p.probs[1:])


def theta_to_eta(theta) -> EtaCoords:
    """eta_j = exp(theta_j) / (1 + sum_k exp(theta_k)).

    The image is interior for every finite theta; in float64 it saturates
    to the border once some |theta_j| exceeds about 27, in which case the
    result is returned as extended coordinates.
    """
    arr = theta.theta if isinstance(theta, ThetaCoords) else np.asarray(theta, dtype=float)
    # Shift by the max exponent so large thetas cannot overflow.
    m = max(0.0, float(arr.max()))
    w = np.exp(arr - m)
    eta = w / (np.exp(-m) + w.sum())
    return EtaCoords(eta, extended=not _is_interior(eta))


def theta_to_point(theta) -> SimplexPoint:
    return eta_to_point(theta_to_eta(theta))


def eta_to_theta(eta) -> ThetaCoords:
    """theta_j = log(eta_j / (1 - sum(eta)))."""
    arr = require_interior(eta)
    return ThetaCoords(np.log(arr) - np.log(1.0 - arr.sum()))


def point_to_theta(p: SimplexPoint) -> ThetaCoords:
    return ThetaCoords(np.log(p.probs[1:] / p.probs[0]))


def projective_to_eta(xi) -> EtaCoords:
    """eta_j = xi_j / (1 + sum(xi)) for strictly positive xi."""
    arr = np.asarray(xi, dtype=float)
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise NotInterior("projective coordinates must be finite and strictly positive")
    return EtaCoords(arr / (1.0 + arr.sum()))


def eta_to_projective(eta) -> np.ndarray:
    """xi_j = eta_j / (1 - sum(eta)), the odds against category 0."""
    arr = require_interior(eta)
    return arr / (1.0 - arr.sum())


def projective_to_point(xi) -> SimplexPoint:
    return eta_to_point(projective_to_eta(xi))


def point_to_projective(p: SimplexPoint) -> np.ndarray:
    return p.probs[1:] / p.probs[0]


def score_of_path(p_from: SimplexPoint, p_to: SimplexPoint, dt: float,
                  base: SimplexPoint | None = None) -> TangentVector:
    """Finite-difference estimate of the score dp/dt / p along a path.

    The difference quotient is taken between the two samples and divided
    by the base probabilities (default: the first sample, giving a
    forward estimate; pass the midpoint sample for a central one).  The
    result is recentered so it is exactly base-centered.
    """
    if p_from.n != p_to.n:
        raise DimensionMismatch("path samples must share the category count")
    if base is None:
        base = p_from
    raw = (p_to.probs - p_from.probs) / (dt * base.probs)
    return TangentVector.centered(raw, base)
