"""Metric derivative of vector fields along a curve of distributions.

For fields F, G given by their coordinates in the score basis along a
path eta(t), the covariance <F, G> = F^T I(eta(t)) G varies as
d/dt <F, G> = <DF, G> + <F, DG> with the metric derivative
DF = dF/dt + (1/2) I^-1 (dI/dt) F.  Everything here is a verification
tool built on central finite differences.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fisher import fisher_entries
from .simplex import as_eta_array


@dataclass(frozen=True)
class FramedField:
    """Coordinates of a field along a path, both as functions of time."""

    components: Callable[[float], np.ndarray]
    path: Callable[[float], np.ndarray]


def _metric_at(field: FramedField, t: float) -> np.ndarray:
    return fisher_entries(as_eta_array(field.path(t)))


def covariance_along_path(F: FramedField, G: FramedField, t: float) -> float:
    """<F, G> at time t, i.e. F^T I(eta(t)) G (paths must coincide)."""
    f = np.asarray(F.components(t), dtype=float)
    g = np.asarray(G.components(t), dtype=float)
    return float(f @ _metric_at(F, t) @ g)


def metric_derivative(F: FramedField, t: float, h: float = 1e-5) -> np.ndarray:
    """dF/dt + (1/2) I^-1 (dI/dt) F with central differences of step h."""
    f_plus = np.asarray(F.components(t + h), dtype=float)
    f_minus = np.asarray(F.components(t - h), dtype=float)
    df = (f_plus - f_minus) / (2.0 * h)
    di = (_metric_at(F, t + h) - _metric_at(F, t - h)) / (2.0 * h)
    f = np.asarray(F.components(t), dtype=float)
    correction = 0.5 * np.linalg.solve(_metric_at(F, t), di @ f)
    return df + correction


def geodesic(*args, **kwargs):
    """Extension point: Fisher-Rao geodesics are not implemented.

    Computing the initial velocity of the geodesic joining two
    distributions would give a better retraction for the time-series
    velocity index; the connection machinery above is the building
    block, but no geodesic solver is provided.
    """
    raise NotImplementedError("Fisher-Rao geodesics are a documented extension point")
