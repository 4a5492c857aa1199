"""The polarization measure and the symmetric cubic index family.

POL(pi) = sum_x pi_x^2 (1 - pi_x) is one third of the probability that
exactly two of three i.i.d. draws coincide.  In solid coordinates it is
a cubic polynomial, so every formula here extends to all of R^n.
"""

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedDimension
from .simplex import SimplexPoint, as_eta_array

# Tolerances making the coefficient classification deterministic: the
# equality condition within 1e-12 absolute, the strict inequality with a
# margin larger than 1e-12.
CONDITION_TOL = 1e-12


def pol(p) -> float:
    """Polarization measure of a distribution (SimplexPoint or raw vector).

    Raw vectors may carry border values (zeros); the polynomial is
    evaluated as-is.
    """
    probs = p.probs if isinstance(p, SimplexPoint) else np.asarray(p, dtype=float)
    return float(np.sum(probs**2 * (1.0 - probs)))


def pol_eta(eta) -> float:
    """Polarization in solid coordinates: (1-S)^2 S + sum eta_j^2 (1-eta_j).

    Polynomial form, valid on all of R^n; broadcasts over leading axes.
    """
    arr = as_eta_array(eta)
    s = arr.sum(axis=-1)
    val = (1.0 - s) ** 2 * s + np.sum(arr**2 * (1.0 - arr), axis=-1)
    return float(val) if arr.ndim == 1 else val


def grad_pol_eta(eta) -> np.ndarray:
    """Euclidean gradient of pol_eta, any dimension.

    Each partial is -2(1-S)S + (1-S)^2 + 2 eta_j - 3 eta_j^2 with
    S = sum(eta); for n=2 this reduces to
    (6 eta1 eta2 + 3 eta2^2 - 2 eta1 - 4 eta2 + 1, and symmetrically).
    """
    arr = as_eta_array(eta)
    s = arr.sum(axis=-1, keepdims=True)
    return -2.0 * (1.0 - s) * s + (1.0 - s) ** 2 + 2.0 * arr - 3.0 * arr**2


@dataclass(frozen=True)
class CubicIndexCoeffs:
    """Coefficients (a, b, c, d, e) of the symmetric cubic index on 3 categories.

    The index is a*sum(pi^3) + b*sum_{i!=j} pi_i^2 pi_j + c*pi0*pi1*pi2
    + d*sum(pi^2) + e*sum_{i<j} pi_i pi_j.  The polarization measure is
    (a, b, c, d, e) = (0, 1, 0, 0, 0).
    """

    a: float
    b: float
    c: float
    d: float
    e: float

    def astuple(self) -> tuple[float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.e)

    def classify(self) -> "CubicConditionReport":
        return cubic_conditions(self)


POL_COEFFS = CubicIndexCoeffs(0.0, 1.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class CubicConditionReport:
    """Outcome of the two coefficient conditions for a polarization-like index."""

    # 6a - c + 6d - 3e = 0: necessary for a non-definite linearization at
    # the uniform distribution.
    sum_residual: float
    sum_condition: bool
    # 3a - b + 2d - e < 0: vertices repel and edge midpoints attract.
    stability_value: float
    stability_condition: bool

    @property
    def admissible(self) -> bool:
        return self.sum_condition and self.stability_condition


def cubic_conditions(coeffs: CubicIndexCoeffs) -> CubicConditionReport:
    """Check the coefficient conditions defining an admissible cubic index."""
    a, b, c, d, e = coeffs.astuple()
    sum_residual = 6.0 * a - c + 6.0 * d - 3.0 * e
    stability_value = 3.0 * a - b + 2.0 * d - e
    return CubicConditionReport(
        sum_residual=sum_residual,
        sum_condition=abs(sum_residual) <= CONDITION_TOL,
        stability_value=stability_value,
        stability_condition=stability_value < -CONDITION_TOL,
    )


def cubic_index_eta(coeffs: CubicIndexCoeffs, eta) -> float:
    """Symmetric cubic index in solid coordinates (n=2 only)."""
    arr = as_eta_array(eta)
    if arr.shape[-1] != 2:
        raise UnsupportedDimension("the cubic index family is defined for n=2")
    a, b, c, d, e = coeffs.astuple()
    e1, e2 = arr[..., 0], arr[..., 1]
    val = (
        (-3 * a + 3 * b - c) * (e1**2 * e2 + e1 * e2**2)
        + (3 * a - b + 2 * d - e) * (e1**2 + e2**2)
        + (6 * a - 4 * b + c + 2 * d - e) * e1 * e2
        + (-3 * a + b - 2 * d + e) * (e1 + e2)
        + a + d
    )
    return float(val) if arr.ndim == 1 else val
