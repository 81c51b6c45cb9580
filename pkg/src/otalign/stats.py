"""Scalar summaries of a coupling used by diagnostics and trend checks:
band concentration near the temporal diagonal, and the spread of
per-token transported-mass durations.
"""

from __future__ import annotations

import numpy as np
from scipy.special import xlogy

from .core import DomainError, as_matrix

__all__ = [
    "band_mass",
    "hard_segmentation",
    "token_durations",
    "token_duration_variance",
]


def band_mass(coupling, width: float = 2.0) -> float:
    """Total plan mass within `width` grid steps of the normalized
    diagonal: cells with |i/l_a - j/l_t| <= width / max(l_a, l_t),
    1-based positions.  Concentrated (monotone) alignments score high.
    """
    plan = as_matrix(coupling)
    if width <= 0.0:
        raise DomainError(f"band_mass: width must be > 0, got {width!r}")
    l_a, l_t = plan.shape
    rows = np.arange(1, l_a + 1) / l_a
    cols = np.arange(1, l_t + 1) / l_t
    inside = np.abs(rows[:, None] - cols[None, :]) <= width / max(l_a, l_t)
    return float(plan[inside].sum())


def hard_segmentation(coupling) -> np.ndarray:
    """Token index claiming each source row (argmax over the plan row;
    ties resolve to the lowest index)."""
    plan = as_matrix(coupling)
    return plan.argmax(axis=1)


def token_durations(coupling) -> np.ndarray:
    """Effective number of source rows carrying each token's mass.

    Column j's mass profile is normalized to a distribution over rows
    and its perplexity exp(H) taken as that token's duration: a token
    fed equally by k rows scores exactly k, a sharply peaked one close
    to 1.  Requires every column to carry mass.
    """
    plan = as_matrix(coupling)
    col_mass = plan.sum(axis=0)
    if np.any(col_mass <= 0.0):
        bad = int(np.flatnonzero(col_mass <= 0.0)[0])
        raise DomainError(f"token_durations: column {bad} carries no mass")
    profile = plan / col_mass[None, :]
    return np.exp(-xlogy(profile, profile).sum(axis=0))


def token_duration_variance(coupling) -> float:
    """Population variance of the per-token durations; uniform
    segmentations score 0."""
    return float(np.var(token_durations(coupling)))
