import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_interior_eta(rng, n, margin=0.0):
    """Dirichlet draw, category 0 dropped; optional floor on every prob."""
    while True:
        probs = rng.dirichlet(np.ones(n + 1))
        if probs.min() > max(margin, 1e-9):
            return probs[1:]


def random_simplex_probs(rng, n, margin=0.0):
    while True:
        probs = rng.dirichlet(np.ones(n + 1))
        if probs.min() > max(margin, 1e-9):
            return probs
