"""Shared builders for the test suite."""

import numpy as np

from otalign import CostMatrix, FeatureSequence, uniform_marginal


def rand_features(rng, rows, dim=5) -> FeatureSequence:
    return FeatureSequence(rng.standard_normal((rows, dim)))


def rand_cost(rng, rows, cols, dim=5) -> CostMatrix:
    from otalign import cross_modal_cost

    return cross_modal_cost(rand_features(rng, rows, dim), rand_features(rng, cols, dim))


def rand_plan(rng, rows, cols) -> np.ndarray:
    """Feasible plan for uniform marginals built by Sinkhorn-scaling a
    random positive matrix (plain scaling: accurate enough for tests)."""
    plan = rng.uniform(0.1, 1.0, (rows, cols))
    a = np.full(rows, 1.0 / rows)
    b = np.full(cols, 1.0 / cols)
    for _ in range(200):
        plan *= (a / plan.sum(axis=1))[:, None]
        plan *= (b / plan.sum(axis=0))[None, :]
    return plan


def uniform_pair(rows, cols):
    return uniform_marginal(rows), uniform_marginal(cols)
