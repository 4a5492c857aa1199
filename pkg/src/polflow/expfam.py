"""Exponential family of three i.i.d. draws on {0, 1, 2}.

With indicator codings X1 = (X=1), X2 = (X=2), the joint law of three
draws is an exponential family with sufficient statistics
T_j = X_j + Y_j + Z_j.  Three times the polarization measure equals the
expectation of the indicator that (T1, T2) falls on one of the six
"exactly two equal" cells, and the toric (monomial) form of the family
makes that expectation computable on the closed simplex, border included.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import OutOfPolytope
from .simplex import ThetaCoords, as_eta_array, theta_to_eta

SAMPLE_SIZE = 3
CATEGORIES = 3


@dataclass(frozen=True)
class TripleSampleTable:
    """All 27 outcomes (x, y, z) with indicator codings and statistics.

    Rows hold (x, y, z, x1, y1, z1, x2, y2, z2, t1, t2); the mask flags
    the outcomes where exactly two of the three draws coincide.
    """

    rows: np.ndarray
    polarization_mask: np.ndarray


@dataclass(frozen=True)
class CountTable:
    """Joint counts of (T1, T2) over the 27 outcomes, indexed t1, t2 = 0..3."""

    f: np.ndarray


def _exactly_two_equal(x: int, y: int, z: int) -> bool:
    return len({x, y, z}) == 2


@lru_cache(maxsize=1)
def build_triple_table() -> TripleSampleTable:
    """Enumerate the 27 triples; x varies fastest, then y, then z."""
    rows = []
    mask = []
    for z, y, x in product(range(CATEGORIES), repeat=3):
        x1, y1, z1 = int(x == 1), int(y == 1), int(z == 1)
        x2, y2, z2 = int(x == 2), int(y == 2), int(z == 2)
        rows.append((x, y, z, x1, y1, z1, x2, y2, z2,
                     x1 + y1 + z1, x2 + y2 + z2))
        mask.append(_exactly_two_equal(x, y, z))
    rows_arr = np.asarray(rows, dtype=int)
    mask_arr = np.asarray(mask, dtype=bool)
    rows_arr.setflags(write=False)
    mask_arr.setflags(write=False)
    return TripleSampleTable(rows_arr, mask_arr)


@lru_cache(maxsize=1)
def count_table() -> CountTable:
    """Aggregate the triple table into the 4x4 joint count table."""
    table = build_triple_table()
    f = np.zeros((SAMPLE_SIZE + 1, SAMPLE_SIZE + 1), dtype=int)
    for t1, t2 in table.rows[:, 9:11]:
        f[t1, t2] += 1
    f.setflags(write=False)
    return CountTable(f)


@lru_cache(maxsize=1)
def polarization_cells() -> frozenset[tuple[int, int]]:
    """(t1, t2) cells carrying the exactly-two-equal outcomes."""
    table = build_triple_table()
    return frozenset((int(t1), int(t2))
                     for t1, t2 in table.rows[table.polarization_mask, 9:11])


def _theta_array(theta) -> np.ndarray:
    if isinstance(theta, ThetaCoords):
        return theta.theta
    return np.asarray(theta, dtype=float)


def psi(theta) -> float:
    """Cumulant function log(1 + sum_j exp(theta_j)); gradient is eta."""
    arr = _theta_array(theta)
    return float(np.logaddexp.reduce(np.concatenate([[0.0], arr])))


def psi_uniform_ref(theta) -> float:
    """Cumulant function relative to the uniform base measure.

    Subtracts log(n+1); paired with the 1/(n+1) base weight it induces
    the same probabilities as psi.
    """
    arr = _theta_array(theta)
    return psi(arr) - float(np.log(arr.size + 1))


def _polytope_points():
    return [(t1, t2) for t1 in range(SAMPLE_SIZE + 1) for t2 in range(SAMPLE_SIZE + 1)
            if t1 + t2 <= SAMPLE_SIZE]


def pol_expectation_theta(theta) -> float:
    """E_theta of the polarization indicator of (T1, T2); equals 3*POL."""
    arr = _theta_array(theta)
    if arr.size != 2:
        raise OutOfPolytope("the three-draw family has two natural parameters")
    log_norm = SAMPLE_SIZE * psi(arr)
    f = count_table().f
    cells = polarization_cells()
    return float(sum(np.exp(arr[0] * t1 + arr[1] * t2 - log_norm) * f[t1, t2]
                     for t1, t2 in cells))


def toric_probability(eta, t1: int, t2: int) -> float:
    """Monomial probability eta1^t1 eta2^t2 (1-eta1-eta2)^(3-t1-t2) f(t1,t2).

    Valid on the closed solid simplex with the 0**0 = 1 convention, which
    is what makes the border cases evaluable.
    """
    if t1 < 0 or t2 < 0 or t1 + t2 > SAMPLE_SIZE:
        raise OutOfPolytope(f"({t1}, {t2}) is outside the marginal polytope")
    arr = as_eta_array(eta)
    if arr.size != 2:
        raise OutOfPolytope("toric probabilities are defined for n=2")
    e1, e2 = float(arr[0]), float(arr[1])
    e0 = 1.0 - e1 - e2
    if e1 < -1e-12 or e2 < -1e-12 or e0 < -1e-12:
        raise ValueError(f"{arr!r} is outside the closed solid simplex")
    e0, e1, e2 = max(e0, 0.0), max(e1, 0.0), max(e2, 0.0)
    f = count_table().f
    # Python's float power gives 0.0 ** 0 == 1.0, exactly the border rule.
    return float(e1**t1 * e2**t2 * e0 ** (SAMPLE_SIZE - t1 - t2) * f[t1, t2])


def border_pol_expectation(eta) -> float:
    """Expectation of the polarization indicator under the toric form.

    Works anywhere on the closed solid simplex; equals 3/4 at each of
    the three edge midpoints and 0 at the vertices.
    """
    cells = polarization_cells()
    return float(sum(toric_probability(eta, t1, t2) for t1, t2 in cells))


def expectation_params(theta) -> np.ndarray:
    """Expectations (E[T1], E[T2]) = 3 * grad psi = 3 * eta(theta)."""
    arr = _theta_array(theta)
    return SAMPLE_SIZE * theta_to_eta(arr).eta
