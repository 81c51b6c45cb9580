"""Edge-matching (Gromov-Wasserstein) kernels.

The quartic objective sum_{i,j,k,l} |dA_ij - dL_kl|^2 g_ik g_jl is
driven through its linearization M(gamma) with
M_ik = sum_{j,l} |dA_ij - dL_kl|^2 gamma_jl.  Two evaluation paths are
provided: the direct quadruple sum (the permanent test oracle) and the
squared-loss decomposition

    M = (dA o dA) r 1^T + 1 (c^T (dL o dL)^T) - 2 dA gamma dL^T

with r, c the actual row/column sums of gamma, so the two paths agree
for any nonnegative input, feasible or not.
"""

from __future__ import annotations

import numpy as np

from .core import CostMatrix, ShapeError, as_matrix

__all__ = [
    "gw_linearized_cost",
    "gw_objective",
]


def _check_shapes(d_a: np.ndarray, d_l: np.ndarray, plan: np.ndarray) -> None:
    n, m = plan.shape
    if d_a.shape != (n, n):
        raise ShapeError(f"gw: source edge matrix is {d_a.shape}, plan has {n} rows")
    if d_l.shape != (m, m):
        raise ShapeError(f"gw: target edge matrix is {d_l.shape}, plan has {m} cols")


def _check_kinds(d_a, d_l) -> None:
    for side, mat in (("source", d_a), ("target", d_l)):
        if isinstance(mat, CostMatrix) and mat.kind != "intra-modal":
            raise ShapeError(f"gw: {side} edge matrix has kind {mat.kind!r}")


def _linearized_fast(d_a: np.ndarray, d_l: np.ndarray, plan: np.ndarray) -> np.ndarray:
    row_mass = plan.sum(axis=1)
    col_mass = plan.sum(axis=0)
    left = (d_a * d_a) @ row_mass
    right = (d_l * d_l) @ col_mass
    return left[:, None] + right[None, :] - 2.0 * (d_a @ plan @ d_l.T)


def _linearized_naive(d_a: np.ndarray, d_l: np.ndarray, plan: np.ndarray) -> np.ndarray:
    n, m = plan.shape
    out = np.empty((n, m))
    for i in range(n):
        for k in range(m):
            diff = d_a[i][:, None] - d_l[k][None, :]
            out[i, k] = float(np.sum(diff * diff * plan))
    return out


def gw_linearized_cost(d_a, d_l, coupling, method: str = "fast") -> CostMatrix:
    """Linearized edge cost M(gamma); `method` is "fast" or "naive".

    The naive path evaluates the quadruple sum cell by cell in
    O(l_a^2 l_t^2) and is kept as the reference the fast decomposition
    is tested against.
    """
    _check_kinds(d_a, d_l)
    da = as_matrix(d_a)
    dl = as_matrix(d_l)
    plan = as_matrix(coupling)
    _check_shapes(da, dl, plan)
    if method == "fast":
        values = _linearized_fast(da, dl, plan)
    elif method == "naive":
        values = _linearized_naive(da, dl, plan)
    else:
        raise ShapeError(f"gw_linearized_cost: unknown method {method!r}")
    # roundoff in the decomposition can leave tiny negatives on cells
    # where the discrepancy cancels exactly
    return CostMatrix(np.maximum(values, 0.0), kind="fused")


def gw_objective(d_a, d_l, coupling) -> float:
    """Edge-discrepancy objective <M(gamma), gamma> (always >= 0).

    Plans supported on at most l_a + l_t cells (permutation-like) are
    evaluated by direct summation over the support, which preserves
    exact zeros for isometric pairs; dense plans use the decomposition.
    """
    _check_kinds(d_a, d_l)
    da = as_matrix(d_a)
    dl = as_matrix(d_l)
    plan = as_matrix(coupling)
    _check_shapes(da, dl, plan)
    rows, cols = np.nonzero(plan)
    if rows.shape[0] <= plan.shape[0] + plan.shape[1]:
        weights = plan[rows, cols]
        diff = da[np.ix_(rows, rows)] - dl[np.ix_(cols, cols)]
        return float(weights @ (diff * diff) @ weights)
    value = float(np.sum(_linearized_fast(da, dl, plan) * plan))
    return max(value, 0.0)
