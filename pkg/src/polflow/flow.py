"""Gradient-flow integration and fixed-point classification.

Fields are smooth polynomials here, so a fixed-step classical Runge-Kutta
scheme is used throughout; determinism of the emitted data matters more
than adaptivity.  Trajectories follow the extended field and may leave
the closed simplex; a guard box, not the simplex, bounds integration.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidStep, NoConvergence, NotAFixedPoint
from .natgrad import VectorField, jacobian_fd
from .simplex import as_eta_array

CONVERGED = "converged"
MAX_STEPS = "max_steps"
LEFT_DOMAIN = "left_domain"

# Integration aborts once any coordinate leaves this box around the
# solid simplex.
GUARD_LO = -0.5
GUARD_HI = 1.5

# Eigenvalue real parts within this of zero make a fixed point degenerate.
DEGENERACY_TOL = 1e-8

# Newton roots closer than this are reported once.
DEDUP_TOL = 1e-6

ATTRACTOR = "attractor"
REPELLER = "repeller"
SADDLE = "saddle"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class TrajectoryRecord:
    """Sampled solution of a flow: times, states, index values, stop reason."""

    times: np.ndarray
    states: np.ndarray
    values: Optional[np.ndarray]
    terminal_reason: str


@dataclass(frozen=True)
class FixedPointReport:
    """A zero of the field with its local linearization."""

    location: np.ndarray
    residual: float
    eigenvalues: np.ndarray
    classification: str


def rk4_step(f, y: np.ndarray, dt: float) -> np.ndarray:
    """One classical 4th-order Runge-Kutta step of y' = f(y)."""
    k1 = np.asarray(f(y))
    k2 = np.asarray(f(y + 0.5 * dt * k1))
    k3 = np.asarray(f(y + 0.5 * dt * k2))
    k4 = np.asarray(f(y + dt * k3))
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(field: VectorField, eta0, dt: float, t_max: float,
              stop_tol: float) -> TrajectoryRecord:
    """Integrate eta' = field(eta) with fixed-step RK4.

    Stops when the field norm drops below stop_tol (converged), the time
    budget is exhausted (max_steps), or the state escapes the guard box
    (left_domain).  Index values along the way are recorded when the
    field carries a value function.
    """
    if dt <= 0.0:
        raise InvalidStep(f"dt must be positive, got {dt!r}")
    if stop_tol <= 0.0:
        raise InvalidStep(f"stop_tol must be positive, got {stop_tol!r}")
    y = np.array(as_eta_array(eta0), dtype=float)
    times = [0.0]
    states = [y.copy()]
    reason = MAX_STEPS
    budget = int(np.floor(t_max / dt + 1e-9))
    k = 0
    while True:
        k1 = np.asarray(field(y))
        if np.linalg.norm(k1) < stop_tol:
            reason = CONVERGED
            break
        if k >= budget:
            reason = MAX_STEPS
            break
        # Reuse k1 as the first Runge-Kutta stage.
        k2 = np.asarray(field(y + 0.5 * dt * k1))
        k3 = np.asarray(field(y + 0.5 * dt * k2))
        k4 = np.asarray(field(y + dt * k3))
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        k += 1
        times.append(k * dt)
        states.append(y.copy())
        if np.any(y < GUARD_LO) or np.any(y > GUARD_HI):
            reason = LEFT_DOMAIN
            break
    states_arr = np.asarray(states)
    values = None
    if field.value_fn is not None:
        values = np.asarray([field.value_fn(s) for s in states])
    return TrajectoryRecord(np.asarray(times), states_arr, values, reason)


def _eigenvalues(matrix: np.ndarray) -> np.ndarray:
    if matrix.shape == (2, 2):
        # Quadratic formula on trace and determinant; keeps conjugate
        # pairs exact for the closed-form 2x2 Jacobians.
        tr = matrix[0, 0] + matrix[1, 1]
        det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
        disc = complex(tr * tr - 4.0 * det) ** 0.5
        return np.array([(tr - disc) / 2.0, (tr + disc) / 2.0])
    return np.linalg.eigvals(matrix)


def _classify_eigenvalues(eig: np.ndarray, tol: float = DEGENERACY_TOL) -> str:
    re = eig.real
    if np.any(np.abs(re) <= tol):
        return DEGENERATE
    if np.all(re < 0.0):
        return ATTRACTOR
    if np.all(re > 0.0):
        return REPELLER
    return SADDLE


def classify(field: VectorField, location, tol: float = 1e-8) -> FixedPointReport:
    """Classify a fixed point by the eigenvalues of the field Jacobian.

    Uses the field's closed-form Jacobian when available, otherwise a
    central-difference one.  Raises NotAFixedPoint when the residual at
    the location exceeds tol.
    """
    loc = np.array(as_eta_array(location), dtype=float)
    residual = float(np.linalg.norm(field(loc)))
    if residual >= tol:
        raise NotAFixedPoint(f"field norm {residual!r} at {loc!r} exceeds {tol!r}")
    jac = field.jacobian(loc) if field.jacobian is not None else jacobian_fd(field, loc)
    eig = _eigenvalues(np.asarray(jac, dtype=float))
    return FixedPointReport(loc, residual, eig, _classify_eigenvalues(eig))


def newton_fixed_point(field: VectorField, seed, newton_tol: float,
                       max_iter: int = 60) -> np.ndarray:
    """Damped Newton iteration on field(eta) = 0 from one seed.

    The step is halved (up to 20 times) whenever the residual fails to
    decrease.  Raises NoConvergence when the tolerance is not reached.
    """
    y = np.array(as_eta_array(seed), dtype=float)
    res = float(np.linalg.norm(field(y)))
    converged = res < newton_tol
    for _ in range(max_iter):
        if converged:
            break
        jac = field.jacobian(y) if field.jacobian is not None else jacobian_fd(field, y)
        try:
            step = np.linalg.solve(np.asarray(jac, dtype=float), -np.asarray(field(y)))
        except np.linalg.LinAlgError:
            raise NoConvergence(f"singular Jacobian at {y!r}")
        damp = 1.0
        for _ in range(20):
            candidate = y + damp * step
            cand_res = float(np.linalg.norm(field(candidate)))
            if cand_res < res and np.all(np.abs(candidate) < 10.0):
                y, res = candidate, cand_res
                break
            damp *= 0.5
        else:
            raise NoConvergence(f"damping stalled at {y!r} with residual {res!r}")
        converged = res < newton_tol
    if not converged:
        raise NoConvergence(f"no root within {max_iter} iterations from {seed!r}")
    # Polish with full Newton steps while the residual keeps dropping.
    # Around a root with a vanishing Jacobian the accepted approximations
    # scatter over a sqrt(newton_tol)-sized disc; polishing collapses the
    # scatter so deduplication can merge them.
    for _ in range(10):
        jac = field.jacobian(y) if field.jacobian is not None else jacobian_fd(field, y)
        try:
            step = np.linalg.solve(np.asarray(jac, dtype=float), -np.asarray(field(y)))
        except np.linalg.LinAlgError:
            break
        candidate = y + step
        cand_res = float(np.linalg.norm(field(candidate)))
        if cand_res < res:
            y, res = candidate, cand_res
        else:
            break
    return y


def find_fixed_points(field: VectorField, seeds: Sequence,
                      newton_tol: float = 1e-12) -> list[FixedPointReport]:
    """Find and classify the zeros of a field reachable from the seeds.

    Seeds whose Newton iteration fails are skipped; roots closer than
    the dedup tolerance are reported once.
    """
    roots: list[np.ndarray] = []
    for seed in seeds:
        try:
            root = newton_fixed_point(field, seed, newton_tol)
        except NoConvergence:
            continue
        if not any(np.linalg.norm(root - r) < DEDUP_TOL for r in roots):
            roots.append(root)
    roots.sort(key=lambda r: tuple(r))
    tol = max(1e-8, 10.0 * newton_tol)
    return [classify(field, r, tol=tol) for r in roots]


@dataclass(frozen=True)
class BasinMap:
    """Attractor labels over an interior grid of the solid simplex (n=2).

    ``labels[k]`` indexes into ``attractors`` or is -1 for points whose
    trajectory did not settle near any attractor.
    """

    grid: np.ndarray
    labels: np.ndarray
    attractors: np.ndarray


def basin_map(field: VectorField, grid_resolution: int, dt: float = 0.05,
              t_max: float = 200.0, stop_tol: float = 1e-9,
              match_tol: float = 1e-4) -> BasinMap:
    """Label interior grid points of the solid 2-simplex by their attractor.

    Grid points are k/(resolution+1) in each coordinate with sum < 1.
    All cells are advanced together (vectorized RK4); a cell freezes once
    its field norm is below stop_tol or it leaves the guard box.
    """
    if field.dimension != 2:
        raise InvalidStep("basin maps are implemented for n=2 fields")
    if grid_resolution < 2:
        raise InvalidStep("grid resolution must be at least 2")
    ticks = np.arange(1, grid_resolution + 1) / (grid_resolution + 1.0)
    pts = [(x, y) for x in ticks for y in ticks if x + y < 1.0 - 1e-12]
    grid = np.asarray(pts)

    seeds = [(x, y) for x in np.linspace(0.0, 1.0, 7) for y in np.linspace(0.0, 1.0, 7)]
    reports = find_fixed_points(field, seeds)
    attractors = np.asarray([r.location for r in reports if r.classification == ATTRACTOR])

    y = grid.copy()
    active = np.ones(len(y), dtype=bool)
    steps = int(np.ceil(t_max / dt))
    for _ in range(steps):
        if not active.any():
            break
        norms = np.linalg.norm(field(y[active]), axis=-1)
        inside = np.all((y[active] >= GUARD_LO) & (y[active] <= GUARD_HI), axis=-1)
        still = (norms >= stop_tol) & inside
        idx = np.flatnonzero(active)
        active[idx[~still]] = False
        moving = idx[still]
        if moving.size:
            y[moving] = rk4_step(field, y[moving], dt)

    labels = np.full(len(y), -1, dtype=int)
    if attractors.size:
        dists = np.linalg.norm(y[:, None, :] - attractors[None, :, :], axis=-1)
        nearest = np.argmin(dists, axis=1)
        hit = dists[np.arange(len(y)), nearest] <= match_tol
        labels[hit] = nearest[hit]
    return BasinMap(grid, labels, attractors)
