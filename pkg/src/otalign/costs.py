"""Ground-cost construction: cross-modal and intra-modal cosine costs,
the quadratic temporal prior, and the rho-weighted blend of the two.

Cosine distance 1 - cos(u, v) is evaluated as ||u/|u| - v/|v|||^2 / 2 on
unit-normalized rows.  The two forms agree in exact arithmetic; the
normalized-difference form gives exactly zero for bitwise-identical
vectors and exact transpose symmetry, with no epsilon guard hiding
zero-norm rows (those are a hard error).
"""

from __future__ import annotations

import numpy as np

from .core import CostMatrix, DomainError, ShapeError, SizeError, as_matrix

__all__ = [
    "cross_modal_cost",
    "intra_modal_cost",
    "temporal_prior",
    "blend_temporal",
    "unit_rows",
]


def unit_rows(features) -> np.ndarray:
    """Rows scaled to unit Euclidean norm; zero-norm rows are rejected."""
    arr = as_matrix(features)
    if not np.all(np.isfinite(arr)):
        raise DomainError("features contain NaN or Inf")
    norms = np.sqrt((arr * arr).sum(axis=1))
    if np.any(norms == 0.0):
        bad = int(np.flatnonzero(norms == 0.0)[0])
        raise DomainError(f"row {bad} has zero norm; cosine cost undefined")
    return arr / norms[:, None]


def _cosine_distance(unit_a: np.ndarray, unit_b: np.ndarray) -> np.ndarray:
    # chunk rows of A so the (chunk, |B|, d) intermediate stays bounded
    out = np.empty((unit_a.shape[0], unit_b.shape[0]))
    chunk = max(1, 2**22 // max(1, unit_b.shape[0] * unit_a.shape[1]))
    for start in range(0, unit_a.shape[0], chunk):
        diff = unit_a[start : start + chunk, None, :] - unit_b[None, :, :]
        out[start : start + chunk] = (diff * diff).sum(axis=2)
    return np.minimum(out * 0.5, 2.0)


def cross_modal_cost(h, z) -> CostMatrix:
    """Pairwise cosine distance between two feature sequences.

    Entry (i, j) is 1 - cos(h_i, z_j), in [0, 2].  Feature dimensions
    must match.
    """
    hu = unit_rows(h)
    zu = unit_rows(z)
    if hu.shape[1] != zu.shape[1]:
        raise ShapeError(
            f"feature dims differ: {hu.shape[1]} vs {zu.shape[1]}"
        )
    return CostMatrix(_cosine_distance(hu, zu), kind="cross-modal")


def intra_modal_cost(features) -> CostMatrix:
    """Pairwise cosine distance of a sequence with itself (graph edges).

    Symmetric with an exactly zero diagonal.
    """
    fu = unit_rows(features)
    return CostMatrix(_cosine_distance(fu, fu), kind="intra-modal")


def temporal_prior(l_a: int, l_t: int, centered: bool = False) -> CostMatrix:
    """Quadratic penalty on normalized-position gaps, |i/l_a - j/l_t|^2.

    Positions are 1-based (i in 1..l_a, j in 1..l_t).  With
    ``centered=True`` positions are (i-1)/(l_a-1) instead, mapping each
    sequence onto [0, 1] endpoints; a singleton sequence sits at 0.5.
    This only changes boundary behavior.
    """
    if l_a < 1 or l_t < 1:
        raise SizeError(f"temporal_prior: sizes must be >= 1, got {l_a}x{l_t}")

    def positions(length: int) -> np.ndarray:
        if centered:
            if length == 1:
                return np.array([0.5])
            return np.arange(length, dtype=np.float64) / (length - 1)
        return np.arange(1, length + 1, dtype=np.float64) / length

    gap = positions(l_a)[:, None] - positions(l_t)[None, :]
    return CostMatrix(gap * gap, kind="temporal")


def blend_temporal(node_cost: CostMatrix, prior: CostMatrix, rho: float) -> CostMatrix:
    """Blend the temporal prior into the cross-modal node cost,
    entrywise d + rho * d_temporal.  The result is used anywhere the
    plain cross-modal cost would be."""
    if node_cost.kind != "cross-modal":
        raise ShapeError(f"blend_temporal: node cost has kind {node_cost.kind!r}")
    if prior.kind != "temporal":
        raise ShapeError(f"blend_temporal: prior has kind {prior.kind!r}")
    if node_cost.values.shape != prior.values.shape:
        raise ShapeError(
            f"blend_temporal: shapes differ, {node_cost.values.shape} vs {prior.values.shape}"
        )
    if not np.isfinite(rho) or rho < 0.0:
        raise DomainError(f"blend_temporal: rho must be >= 0, got {rho!r}")
    return CostMatrix(node_cost.values + rho * prior.values, kind="cross-modal")
