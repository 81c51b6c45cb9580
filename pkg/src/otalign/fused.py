"""Fused node+edge alignment solver and its edge-only special case.

The solver alternates two steps: linearize the edge term at the current
plan to get a unified cost

    D_fused = (1 - alpha) * D_node + alpha * M(gamma)

then take a KL-regularized Sinkhorn step toward that cost,

    gamma_next = argmin <D_fused, gamma> + beta * KL(gamma | anchor),

implemented by folding log(anchor) into the stabilized log-domain
kernel.  The anchor is the initial plan; with the default product-plan
anchor the KL term equals -H(gamma) up to an additive constant on the
coupling polytope, so every outer step - including the final one that
produces the returned coupling - is exactly the vanilla entropic solve
of the current unified cost.  (Anchoring at the previous iterate
instead would shrink the effective regularization each step and drive
the plan toward an unregularized vertex, erasing beta's diffusion.)
The band anchor restricts support to the diagonal band throughout.

The reported loss

    L = (1 - alpha) * <D_node, gamma> + alpha * <M(gamma), gamma>

excludes the entropy machinery.  Steps that would increase L are
rejected and the solve stops at the best iterate, so the outer
objective trace is nonincreasing by construction.

alpha = 0 collapses to a single plain entropic solve on D_node (the
fused cost never changes).  alpha = 1 is the edge-only solver;
`gwd_solve` is that case with the node cost dropped.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .core import (
    Coupling,
    CostMatrix,
    DomainError,
    Marginal,
    ShapeError,
    SolverConfig,
    as_matrix,
    marginal_violation,
)
from .gromov import _linearized_fast, gw_linearized_cost, gw_objective
from .sinkhorn import SolveDiagnostics, entropy, log_sinkhorn_core

__all__ = [
    "fused_cost",
    "fgwd_solve",
    "gwd_solve",
    "initial_plan",
]

# accepted outer steps must not increase the objective by more than this
_DESCENT_SLACK = 1e-12


def fused_cost(d_node, d_a, d_l, coupling, alpha: float) -> CostMatrix:
    """Unified cost (1 - alpha) * D_node + alpha * M(gamma)."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"fused_cost: alpha must be in [0, 1], got {alpha!r}")
    node = as_matrix(d_node)
    plan = as_matrix(coupling)
    if node.shape != plan.shape:
        raise ShapeError(f"fused_cost: node cost is {node.shape}, plan is {plan.shape}")
    edge = gw_linearized_cost(d_a, d_l, coupling, method="fast")
    return CostMatrix((1.0 - alpha) * node + alpha * edge.values, kind="fused")


def band_mask(l_a: int, l_t: int, width: float) -> np.ndarray:
    """Cells within `width` grid steps of the normalized diagonal.

    Positions are 1-based fractions i/l_a and j/l_t; a step is
    1/max(l_a, l_t).  The nearest column of every row and the nearest
    row of every column are always included, and each row's selection is
    filled out to a contiguous interval, so the mask is a monotone
    staircase with no empty row or column.
    """
    rows = np.arange(1, l_a + 1) / l_a
    cols = np.arange(1, l_t + 1) / l_t
    gap = np.abs(rows[:, None] - cols[None, :])
    mask = gap <= width / max(l_a, l_t)
    mask[np.arange(l_a), gap.argmin(axis=1)] = True
    mask[gap.argmin(axis=0), np.arange(l_t)] = True
    first = mask.argmax(axis=1)
    last = l_t - 1 - mask[:, ::-1].argmax(axis=1)
    js = np.arange(l_t)
    return (js[None, :] >= first[:, None]) & (js[None, :] <= last[:, None])


def initial_plan(a: Marginal, b: Marginal, cfg: SolverConfig, user=None) -> np.ndarray:
    """Starting plan for the outer loop per cfg.init.

    "product": outer product a b^T (feasible, unbiased).  "band": mass
    on the diagonal band only, peaked at the normalized diagonal and
    tapering linearly toward the band edge (floored so every band cell
    keeps support); this biases symmetric instances away from the
    product plan, which is a saddle for them.  The band plan's marginals
    are only approximate, which is fine for an initializer, and the
    anchored steps keep later iterates supported on the band.  "user":
    the caller's plan, shape-checked.
    """
    if user is not None and cfg.init != "user":
        raise DomainError(
            f"an explicit starting plan was supplied but cfg.init is {cfg.init!r}"
        )
    product = a.weights[:, None] * b.weights[None, :]
    if cfg.init == "product":
        return product
    if cfg.init == "band":
        l_a, l_t = len(a), len(b)
        rows = np.arange(1, l_a + 1) / l_a
        cols = np.arange(1, l_t + 1) / l_t
        gap = np.abs(rows[:, None] - cols[None, :]) * (max(l_a, l_t) / cfg.band_width)
        taper = np.where(
            band_mask(l_a, l_t, cfg.band_width),
            np.maximum(1.0 - gap, 1e-3) * product,
            0.0,
        )
        return taper / taper.sum()
    if user is None:
        raise DomainError("init mode 'user' requires an explicit starting plan")
    plan = as_matrix(user)
    if plan.shape != (len(a), len(b)):
        raise ShapeError(
            f"user initial plan is {plan.shape}, expected {(len(a), len(b))}"
        )
    if np.any(plan < 0.0) or not np.all(np.isfinite(plan)):
        raise DomainError("user initial plan must be finite and nonnegative")
    return plan


def _anchored_loop(
    d_node: np.ndarray,
    d_a: np.ndarray,
    d_l: np.ndarray,
    a: Marginal,
    b: Marginal,
    cfg: SolverConfig,
    init: np.ndarray,
) -> tuple[np.ndarray, SolveDiagnostics, float]:
    alpha = cfg.alpha

    def objective(plan: np.ndarray) -> float:
        value = alpha * gw_objective(d_a, d_l, plan)
        if alpha < 1.0:
            value += (1.0 - alpha) * float(np.sum(d_node * plan))
        return value

    plan = init
    best = objective(plan)
    trace = [best]
    total_inner = 0
    converged = False
    violation = marginal_violation(plan, a.weights, b.weights)
    with np.errstate(divide="ignore"):
        log_anchor = np.log(init)
    for _ in range(cfg.max_outer_iters):
        linearized = _linearized_fast(d_a, d_l, plan)
        fused = alpha * np.maximum(linearized, 0.0)
        if alpha < 1.0:
            fused = fused + (1.0 - alpha) * d_node
        step, inner, step_violation, inner_ok, _ = log_sinkhorn_core(
            fused,
            a.weights,
            b.weights,
            cfg.beta,
            cfg.max_inner_iters,
            cfg.marginal_tol,
            log_ref=log_anchor,
        )
        total_inner += inner
        if not inner_ok and trace[1:]:
            # the entropic step exhausted its budget before reaching the
            # marginal tolerance; keep the last certified iterate
            break
        value = objective(step)
        if value > best + _DESCENT_SLACK:
            converged = True  # the objective can no longer descend
            break
        plan = step
        violation = step_violation
        trace.append(value)
        rel = abs(best - value) / max(abs(best), 1e-300)
        best = value
        if not inner_ok:
            break
        if rel <= cfg.objective_rel_tol:
            converged = True
            break
    diagnostics = SolveDiagnostics(
        iterations=len(trace) - 1,
        objective_trace=tuple(trace),
        final_marginal_violation=violation,
        final_entropy=entropy(plan),
        converged=converged,
        inner_iterations=total_inner,
    )
    return plan, diagnostics, best


def fgwd_solve(
    d_node, d_a, d_l, a: Marginal, b: Marginal, cfg: SolverConfig, init_plan=None
) -> tuple[Coupling, SolveDiagnostics, float]:
    """Fused solve: returns (coupling, diagnostics, loss).

    `d_node` is the (possibly temporally blended) cross-modal cost;
    `d_a`, `d_l` the intra-modal edge matrices.  With cfg.alpha = 0 the
    result is exactly the entropic solve on `d_node`; the edge matrices
    are ignored there apart from shape checks.
    """
    node = as_matrix(d_node)
    if node.shape != (len(a), len(b)):
        raise ShapeError(
            f"fgwd_solve: node cost is {node.shape}, marginals have lengths "
            f"{len(a)} and {len(b)}"
        )
    da = as_matrix(d_a)
    dl = as_matrix(d_l)
    if da.shape != (len(a), len(a)) or dl.shape != (len(b), len(b)):
        raise ShapeError(
            f"fgwd_solve: edge matrices are {da.shape} and {dl.shape}, expected "
            f"{(len(a), len(a))} and {(len(b), len(b))}"
        )
    if not (np.all(np.isfinite(node)) and np.all(np.isfinite(da)) and np.all(np.isfinite(dl))):
        raise DomainError("fgwd_solve: non-finite cost entries")

    if cfg.alpha == 0.0:
        plan, inner, violation, converged, _ = log_sinkhorn_core(
            node, a.weights, b.weights, cfg.beta, cfg.max_inner_iters, cfg.marginal_tol
        )
        start = initial_plan(a, b, cfg, user=init_plan)
        loss = float(np.sum(node * plan))
        diagnostics = SolveDiagnostics(
            iterations=1,
            objective_trace=(float(np.sum(node * start)), loss),
            final_marginal_violation=violation,
            final_entropy=entropy(plan),
            converged=converged,
            inner_iterations=inner,
        )
        return Coupling(plan, a, b), diagnostics, loss

    start = initial_plan(a, b, cfg, user=init_plan)
    plan, diagnostics, loss = _anchored_loop(node, da, dl, a, b, cfg, start)
    return Coupling(plan, a, b), diagnostics, loss


def gwd_solve(
    d_a, d_l, a: Marginal, b: Marginal, cfg: SolverConfig, init_plan=None
) -> tuple[Coupling, SolveDiagnostics]:
    """Edge-only solve (the alpha = 1 limit); node costs play no part."""
    cfg = dataclasses.replace(cfg, alpha=1.0)
    zeros = np.zeros((len(a), len(b)))
    coupling, diagnostics, _ = fgwd_solve(zeros, d_a, d_l, a, b, cfg, init_plan=init_plan)
    return coupling, diagnostics
