"""Velocity index for time series of distributions.

The change of an index between consecutive distributions can be
misleading on its own: an increase may come from drifting toward a
different attractor.  Comparing the estimated velocity
v = pi_next / pi_curr - 1 against the index gradient at pi_curr, in the
Fisher inner product, gives the local picture: the alignment score is
the first-order index change, the cosine the directional agreement.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DimensionMismatch
from .indices import CubicIndexCoeffs, cubic_index_eta, grad_pol_eta, pol
from .natgrad import cubic_natgrad_n2, natural_gradient
from .simplex import SimplexPoint, TangentVector, point_to_eta

# Ingested rows with vanishing categories are floored here and
# renormalized; the ratio retraction divides by pi_curr.
ZERO_FLOOR = 1e-9

IndexSpec = Union[str, CubicIndexCoeffs]


@dataclass(frozen=True)
class DistributionSeries:
    """Time-ordered distributions, all on the same categories."""

    times: np.ndarray
    points: tuple[SimplexPoint, ...]
    floored: tuple[bool, ...] = ()

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        points = tuple(self.points)
        if len(points) < 2:
            raise DimensionMismatch("a series needs at least two distributions")
        if times.shape != (len(points),):
            raise DimensionMismatch("one time label per distribution required")
        n = points[0].n
        if any(p.n != n for p in points):
            raise DimensionMismatch("all distributions must share the category count")
        floored = tuple(self.floored) if self.floored else (False,) * len(points)
        if len(floored) != len(points):
            raise DimensionMismatch("one floored flag per distribution required")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "floored", floored)

    @classmethod
    def from_arrays(cls, times, rows) -> "DistributionSeries":
        """Build a series from raw probability rows.

        Rows containing zeros are floored at 1e-9 and renormalized; the
        affected rows are flagged so downstream steps can carry a warning.
        """
        points = []
        floored = []
        for row in np.asarray(rows, dtype=float):
            hit = bool(np.any(row < ZERO_FLOOR))
            if hit:
                row = np.maximum(row, ZERO_FLOOR)
                row = row / row.sum()
            points.append(SimplexPoint(row))
            floored.append(hit)
        return cls(np.asarray(times, dtype=float), tuple(points), tuple(floored))


@dataclass(frozen=True)
class VelocityStepRecord:
    """Local comparison of one movement against the index gradient."""

    t_from: float
    t_to: float
    value_from: float
    value_to: float
    delta_value: float
    velocity: np.ndarray
    score: float
    cosine: Optional[float]
    floored: bool = False


@dataclass(frozen=True)
class VelocityIndexReport:
    """Per-step velocity-index records for a whole series."""

    index_label: str
    steps: tuple[VelocityStepRecord, ...] = field(default_factory=tuple)


def estimate_velocity(p_from: SimplexPoint, p_to: SimplexPoint) -> TangentVector:
    """Ratio retraction v = p_to / p_from - 1, a tangent vector at p_from.

    Already centered: E_from[v] = sum(p_to) - sum(p_from) = 0.
    """
    if p_from.n != p_to.n:
        raise DimensionMismatch("distributions must share the category count")
    return TangentVector.centered(p_to.probs / p_from.probs - 1.0, p_from)


def alignment(p: SimplexPoint, v: TangentVector,
              grad: TangentVector) -> tuple[float, Optional[float]]:
    """Fisher pairing and cosine of two tangent vectors at p.

    Returns (E_p[v grad], score / (|v|_p |grad|_p)); the cosine is None
    when either vector vanishes.
    """
    score = float(p.probs @ (v.values * grad.values))
    nv, ng = v.norm(), grad.norm()
    if nv == 0.0 or ng == 0.0:
        return score, None
    return score, float(np.clip(score / (nv * ng), -1.0, 1.0))


def index_functions(index: IndexSpec):
    """Resolve an index spec to (value on point, natural gradient on eta)."""
    if isinstance(index, CubicIndexCoeffs):
        return (lambda p: cubic_index_eta(index, point_to_eta(p).eta),
                lambda eta: cubic_natgrad_n2(index, eta),
                f"cubic:{','.join(f'{x:g}' for x in index.astuple())}")
    if index == "pol":
        return (pol,
                lambda eta: natural_gradient(grad_pol_eta(eta), eta),
                "pol")
    raise ValueError(f"unknown index spec {index!r}")


def index_gradient_tangent(p: SimplexPoint, index: IndexSpec = "pol") -> TangentVector:
    """Index gradient as a centered random variable at p.

    The natural-gradient coordinates g in the solid chart are pushed to
    the score basis: G = sum_j g_j ((X=j) - (X=0)) / pi.
    """
    _, natgrad_fn, _ = index_functions(index)
    g = np.asarray(natgrad_fn(point_to_eta(p).eta), dtype=float)
    values = np.concatenate([[-g.sum()], g]) / p.probs
    return TangentVector.centered(values, p)


def analyze_series(series: DistributionSeries,
                   index: IndexSpec = "pol") -> VelocityIndexReport:
    """Velocity-index report over every consecutive pair of the series."""
    value_fn, _, label = index_functions(index)
    records = []
    for k in range(len(series.points) - 1):
        p, q = series.points[k], series.points[k + 1]
        v = estimate_velocity(p, q)
        grad = index_gradient_tangent(p, index)
        score, cosine = alignment(p, v, grad)
        value_from = float(value_fn(p))
        value_to = float(value_fn(q))
        records.append(VelocityStepRecord(
            t_from=float(series.times[k]),
            t_to=float(series.times[k + 1]),
            value_from=value_from,
            value_to=value_to,
            delta_value=value_to - value_from,
            velocity=v.values,
            score=score,
            cosine=cosine,
            floored=series.floored[k] or series.floored[k + 1],
        ))
    return VelocityIndexReport(label, tuple(records))
