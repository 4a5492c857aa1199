"""Natural-gradient vector fields in solid coordinates.

The natural gradient multiplies the Euclidean parameter gradient by the
inverse Fisher matrix, grad . (diag(eta) - eta eta^T).  Being polynomial,
the resulting fields extend continuously to all of R^n; evaluation here
uses the extended form by default.  All evaluators broadcast over leading
axes, so grids can be sampled in one call.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import UnsupportedDimension
from .indices import CubicIndexCoeffs, cubic_index_eta, grad_pol_eta, pol_eta
from .simplex import as_eta_array


@dataclass(frozen=True)
class VectorField:
    """A field on solid coordinates, with optional extras used by the flow tools.

    ``jacobian`` is a closed-form Jacobian evaluator when one exists;
    ``value_fn`` is the scalar index the field ascends, recorded along
    trajectories.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    label: str
    dimension: int
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    value_fn: Optional[Callable[[np.ndarray], float]] = None

    def __call__(self, eta) -> np.ndarray:
        return self.evaluator(as_eta_array(eta))


def natural_gradient(grad, eta) -> np.ndarray:
    """Multiply a Euclidean gradient row vector by diag(eta) - eta eta^T."""
    g = np.asarray(grad, dtype=float)
    arr = as_eta_array(eta)
    dot = np.sum(g * arr, axis=-1, keepdims=True)
    return arr * (g - dot)


def natgrad_pol_n2(eta) -> np.ndarray:
    """Closed-form natural gradient of the polarization index, n=2.

    Degree-4 polynomial pair; agrees with
    natural_gradient(grad_pol_eta(eta), eta) everywhere.
    """
    arr = as_eta_array(eta)
    e1, e2 = arr[..., 0], arr[..., 1]
    g1 = (-9 * e1**3 * e2 - 9 * e1**2 * e2**2 + 2 * e1**3 + 14 * e1**2 * e2
          + 5 * e1 * e2**2 - 3 * e1**2 - 5 * e1 * e2 + e1)
    g2 = (-9 * e1**2 * e2**2 - 9 * e1 * e2**3 + 5 * e1**2 * e2
          + 14 * e1 * e2**2 + 2 * e2**3 - 5 * e1 * e2 - 3 * e2**2 + e2)
    return np.stack([g1, g2], axis=-1)


def jacobian_natgrad_pol_n2(eta) -> np.ndarray:
    """Closed-form Jacobian of natgrad_pol_n2 (entry ij = dF_i/deta_j)."""
    arr = as_eta_array(eta)
    e1, e2 = arr[..., 0], arr[..., 1]
    j11 = (-27 * e1**2 * e2 - 18 * e1 * e2**2 + 6 * e1**2 + 28 * e1 * e2
           + 5 * e2**2 - 6 * e1 - 5 * e2 + 1)
    j12 = -9 * e1**3 - 18 * e1**2 * e2 + 14 * e1**2 + 10 * e1 * e2 - 5 * e1
    j21 = -9 * e2**3 - 18 * e2**2 * e1 + 14 * e2**2 + 10 * e2 * e1 - 5 * e2
    j22 = (-27 * e2**2 * e1 - 18 * e2 * e1**2 + 6 * e2**2 + 28 * e2 * e1
           + 5 * e1**2 - 6 * e2 - 5 * e1 + 1)
    return np.stack([np.stack([j11, j12], axis=-1),
                     np.stack([j21, j22], axis=-1)], axis=-2)


def cubic_natgrad_n2(coeffs: CubicIndexCoeffs, eta) -> np.ndarray:
    """Natural gradient of the symmetric cubic index (n=2 only)."""
    arr = as_eta_array(eta)
    if arr.shape[-1] != 2:
        raise UnsupportedDimension("the cubic index family is defined for n=2")
    a, b, c, d, e = coeffs.astuple()
    k43 = 9 * a - 9 * b + 3 * c
    k30 = -6 * a + 2 * b - 4 * d + 2 * e
    k21 = -18 * a + 14 * b - 4 * c - 4 * d + 2 * e
    k12 = -9 * a + 5 * b - c - 4 * d + 2 * e
    k20 = 9 * a - 3 * b + 6 * d - 3 * e
    k11 = 9 * a - 5 * b + c + 4 * d - 2 * e
    k10 = -3 * a + b - 2 * d + e

    def component(x, y):
        return (k43 * (x**3 * y + x**2 * y**2) + k30 * x**3 + k21 * x**2 * y
                + k12 * x * y**2 + k20 * x**2 + k11 * x * y + k10 * x)

    e1, e2 = arr[..., 0], arr[..., 1]
    return np.stack([component(e1, e2), component(e2, e1)], axis=-1)


def jacobian_fd(field, eta, h: float | None = None) -> np.ndarray:
    """Central-difference Jacobian of a vector field, O(h^2) accurate.

    Default step is cbrt(machine eps) * max(1, |eta|_inf), the standard
    scaling for central differences.
    """
    arr = np.array(as_eta_array(eta), dtype=float)
    if h is None:
        h = np.finfo(float).eps ** (1.0 / 3.0) * max(1.0, float(np.max(np.abs(arr))))
    n = arr.size
    cols = []
    for j in range(n):
        step = np.zeros(n)
        step[j] = h
        cols.append((np.asarray(field(arr + step)) - np.asarray(field(arr - step))) / (2.0 * h))
    return np.stack(cols, axis=-1)


def pol_field(n: int = 2) -> VectorField:
    """Natural-gradient field of the polarization index.

    Uses the closed-form polynomials for n=2 and the grad . I^-1
    composition otherwise.
    """
    if n == 2:
        return VectorField(natgrad_pol_n2, "pol-natgrad", 2,
                           jacobian=jacobian_natgrad_pol_n2, value_fn=pol_eta)

    def evaluator(arr):
        return natural_gradient(grad_pol_eta(arr), arr)

    return VectorField(evaluator, "pol-natgrad", n, value_fn=pol_eta)


def pol_euclidean_field() -> VectorField:
    """Uncorrected Euclidean gradient field of the polarization index (n=2).

    Not metric-corrected: on the facets it is generally not parallel to
    them, which is what the natural gradient fixes.
    """
    return VectorField(grad_pol_eta, "pol-euclidean", 2, value_fn=pol_eta)


def cubic_field(coeffs: CubicIndexCoeffs) -> VectorField:
    """Natural-gradient field of a symmetric cubic index (n=2)."""

    def evaluator(arr):
        return cubic_natgrad_n2(coeffs, arr)

    def value_fn(arr):
        return cubic_index_eta(coeffs, arr)

    label = "cubic-natgrad:" + ",".join(f"{v:g}" for v in coeffs.astuple())
    return VectorField(evaluator, label, 2, value_fn=value_fn)
