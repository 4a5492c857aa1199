"""Lotka-Volterra dynamics, their uplift to the 2-simplex, and replicator flows.

The planar predator-prey system, rescaled so its stationary point sits at
(1, 1), lifts to the open 2-simplex by adjoining a constant unit
population; the lifted system is a replicator equation
pi_i' = pi_i (f_i(pi) - pi . f).  The same flow can be integrated in the
solid, exponential, or projective chart, and the three trajectories must
project to the same curve of distributions.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BoundaryState, NonPositiveState
from .flow import LEFT_DOMAIN, MAX_STEPS, TrajectoryRecord, rk4_step
from .simplex import (SimplexPoint, TangentVector, eta_to_point, point_to_eta,
                      point_to_projective, point_to_theta, projective_to_point,
                      theta_to_point)

SOLID = "solid"
EXPONENTIAL = "exponential"
PROJECTIVE = "projective"
CHARTS = (SOLID, EXPONENTIAL, PROJECTIVE)

# Interior floor for replicator states: integration aborts (left_domain)
# instead of clamping, since clamping would fabricate dynamics on a face.
STATE_FLOOR = 1e-12


@dataclass(frozen=True)
class LVParams:
    """Rates of the planar Lotka-Volterra system, all strictly positive."""

    alpha1: float
    alpha2: float
    lambda1: float = 1.0
    lambda2: float = 1.0

    def __post_init__(self):
        if min(self.alpha1, self.alpha2, self.lambda1, self.lambda2) <= 0.0:
            raise NonPositiveState("all Lotka-Volterra rates must be positive")

    @property
    def stationary_n(self) -> np.ndarray:
        """Stationary point in the original population variables."""
        return np.array([self.alpha2 / self.lambda2, self.alpha1 / self.lambda1])


@dataclass(frozen=True)
class FitnessSpec:
    """Per-category fitness function pi -> (f_0, ..., f_n)."""

    f: Callable[[SimplexPoint], np.ndarray]
    label: str = "fitness"


def _positive_pair(z) -> np.ndarray:
    arr = np.asarray(z, dtype=float)
    if arr.shape != (2,):
        raise NonPositiveState("state must be a pair")
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise NonPositiveState(f"state {arr!r} must be strictly positive")
    return arr


def lv_field(params: LVParams, z) -> np.ndarray:
    """Rescaled Lotka-Volterra field (z1' = a1 z1 (1-z2), z2' = a2 z2 (z1-1))."""
    arr = _positive_pair(z)
    return np.array([params.alpha1 * arr[0] * (1.0 - arr[1]),
                     params.alpha2 * arr[1] * (arr[0] - 1.0)])


def lv_field_n(params: LVParams, n_state) -> np.ndarray:
    """Field in the original population variables (thin wrapper)."""
    arr = _positive_pair(n_state)
    return np.array([
        params.alpha1 * arr[0] - params.lambda1 * arr[0] * arr[1],
        -params.alpha2 * arr[1] + params.lambda2 * arr[0] * arr[1],
    ])


def n_to_z(params: LVParams, n_state) -> np.ndarray:
    """Rescale populations by the stationary point."""
    return _positive_pair(n_state) / params.stationary_n


def z_to_n(params: LVParams, z) -> np.ndarray:
    return _positive_pair(z) * params.stationary_n


def lv_conserved(params: LVParams, z) -> float:
    """Conserved quantity a2 (log z1 - z1) + a1 (log z2 - z2)."""
    arr = _positive_pair(z)
    return float(params.alpha2 * (np.log(arr[0]) - arr[0])
                 + params.alpha1 * (np.log(arr[1]) - arr[1]))


def lv_uplift(z) -> SimplexPoint:
    """Adjoin a constant unit population: pi = (1, z1, z2) / (1 + z1 + z2)."""
    arr = _positive_pair(z)
    total = 1.0 + arr.sum()
    return SimplexPoint(np.array([1.0, arr[0], arr[1]]) / total)


def uplift_inverse(p: SimplexPoint) -> np.ndarray:
    """Recover z_j = pi_j / pi_0."""
    return p.probs[1:] / p.probs[0]


def lv_fitness(params: LVParams) -> FitnessSpec:
    """Fitness whose replicator flow reproduces the uplifted LV dynamics."""

    def f(p: SimplexPoint) -> np.ndarray:
        probs = p.probs
        if probs[0] <= STATE_FLOOR:
            raise BoundaryState("fitness undefined when category 0 vanishes")
        return np.array([
            0.0,
            params.alpha1 * (1.0 - probs[2] / probs[0]),
            params.alpha2 * (probs[1] / probs[0] - 1.0),
        ])

    return FitnessSpec(f, label=f"lv:{params.alpha1:g},{params.alpha2:g}")


def replicator_velocity(fit: FitnessSpec, p: SimplexPoint) -> np.ndarray:
    """Raw replicator velocity pi_i (f_i - pi . f), summing to zero."""
    fvals = np.asarray(fit.f(p), dtype=float)
    if fvals.shape != p.probs.shape:
        raise BoundaryState("fitness must return one value per category")
    mean = float(p.probs @ fvals)
    return p.probs * (fvals - mean)


def replicator_field(fit: FitnessSpec, p: SimplexPoint) -> TangentVector:
    """Replicator velocity as a tangent vector (score form f - pi.f) at p."""
    velocity = replicator_velocity(fit, p)
    return TangentVector.centered(velocity / p.probs, p)


def _chart_jacobian(chart: str, p: SimplexPoint) -> np.ndarray:
    """Jacobian of the chart-to-simplex map, rows = (pi0, pi1, pi2).

    Internal: used to verify the chart velocity formulas below.
    """
    pi0, pi1, pi2 = p.probs
    if chart == SOLID:
        return np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])
    if chart == EXPONENTIAL:
        return np.array([
            [-pi0 * pi1, -pi0 * pi2],
            [pi1 * (1.0 - pi1), -pi1 * pi2],
            [-pi1 * pi2, pi2 * (1.0 - pi2)],
        ])
    if chart == PROJECTIVE:
        return np.array([
            [-pi0**2, -pi0**2],
            [pi0 * (pi0 + pi2), -pi0 * pi1],
            [-pi0 * pi2, pi0 * (pi0 + pi1)],
        ])
    raise ValueError(f"unknown chart {chart!r}")


def chart_velocity(chart: str, p: SimplexPoint, simplex_velocity) -> np.ndarray:
    """Velocity of the chart coordinates given (F1, F2) on the simplex.

    ``simplex_velocity`` is the pair (pi1', pi2'); pi0' = -(pi1' + pi2')
    by the zero-sum constraint.  Using that constraint, the exponential
    transform (1/pi_j + 1/pi_0) F_j + F_h / pi_0 collapses to
    F_j / pi_j - F_0 / pi_0, and similarly for the projective chart;
    these forms avoid the cancellation of the raw matrix products.
    """
    f1, f2 = np.asarray(simplex_velocity, dtype=float)
    f0 = -(f1 + f2)
    pi0, pi1, pi2 = p.probs
    if chart == SOLID:
        return np.array([f1, f2])
    if chart == EXPONENTIAL:
        return np.array([f1 / pi1 - f0 / pi0, f2 / pi2 - f0 / pi0])
    if chart == PROJECTIVE:
        return np.array([(f1 - pi1 / pi0 * f0) / pi0, (f2 - pi2 / pi0 * f0) / pi0])
    raise ValueError(f"unknown chart {chart!r}")


def chart_to_point(chart: str, state) -> SimplexPoint:
    arr = np.asarray(state, dtype=float)
    if chart == SOLID:
        return eta_to_point(arr)
    if chart == EXPONENTIAL:
        return theta_to_point(arr)
    if chart == PROJECTIVE:
        return projective_to_point(arr)
    raise ValueError(f"unknown chart {chart!r}")


def point_to_chart(chart: str, p: SimplexPoint) -> np.ndarray:
    if chart == SOLID:
        return point_to_eta(p).eta
    if chart == EXPONENTIAL:
        return point_to_theta(p).theta
    if chart == PROJECTIVE:
        return point_to_projective(p)
    raise ValueError(f"unknown chart {chart!r}")


def replicator_in_parametrization(fit: FitnessSpec, chart: str, state) -> np.ndarray:
    """Replicator velocity expressed in the chosen chart."""
    p = chart_to_point(chart, state)
    velocity = replicator_velocity(fit, p)
    return chart_velocity(chart, p, velocity[1:])


@dataclass(frozen=True)
class ReplicatorTrajectory:
    """Chart trajectory of a replicator flow with its simplex projection."""

    times: np.ndarray
    chart: str
    chart_states: np.ndarray
    pi_states: np.ndarray
    terminal_reason: str


def integrate_replicator(fit: FitnessSpec, chart: str, state0, dt: float,
                         t_max: float) -> ReplicatorTrajectory:
    """Fixed-step RK4 for the replicator flow in one chart.

    Aborts with left_domain as soon as the projected distribution hits
    the interior floor; the replicator fixes the faces, so clamping
    would be wrong.
    """
    if chart not in CHARTS:
        raise ValueError(f"unknown chart {chart!r}")

    def rhs(y):
        return replicator_in_parametrization(fit, chart, y)

    y = np.asarray(state0, dtype=float).copy()
    times = [0.0]
    chart_states = [y.copy()]
    pi_states = [chart_to_point(chart, y).probs.copy()]
    reason = MAX_STEPS
    budget = int(np.floor(t_max / dt + 1e-9))
    for k in range(budget):
        y = rk4_step(rhs, y, dt)
        try:
            probs = chart_to_point(chart, y).probs
        except Exception:
            reason = LEFT_DOMAIN
            break
        if np.min(probs) < STATE_FLOOR:
            reason = LEFT_DOMAIN
            break
        times.append((k + 1) * dt)
        chart_states.append(y.copy())
        pi_states.append(probs.copy())
    return ReplicatorTrajectory(np.asarray(times), chart,
                                np.asarray(chart_states), np.asarray(pi_states),
                                reason)


def integrate_lv(params: LVParams, z0, dt: float, t_max: float) -> TrajectoryRecord:
    """Fixed-step RK4 for the rescaled Lotka-Volterra system.

    The recorded values column holds the conserved quantity per sample.
    """
    y = _positive_pair(z0).copy()
    times = [0.0]
    states = [y.copy()]
    budget = int(np.floor(t_max / dt + 1e-9))
    reason = MAX_STEPS

    def rhs(state):
        return np.array([params.alpha1 * state[0] * (1.0 - state[1]),
                         params.alpha2 * state[1] * (state[0] - 1.0)])

    for k in range(budget):
        y = rk4_step(rhs, y, dt)
        if np.any(y <= STATE_FLOOR):
            reason = LEFT_DOMAIN
            break
        times.append((k + 1) * dt)
        states.append(y.copy())
    values = np.asarray([lv_conserved(params, s) for s in states])
    return TrajectoryRecord(np.asarray(times), np.asarray(states), values, reason)
