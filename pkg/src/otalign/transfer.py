"""Consumers of a solved coupling: projection of one modality's
features into the other's space, the trimmed cosine alignment loss, the
scaled residual fusion transform, and the weighted total loss.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DomainError,
    FeatureSequence,
    ShapeError,
    as_matrix,
)
from .costs import unit_rows

__all__ = [
    "FusionWeights",
    "project",
    "alignment_loss",
    "fuse_representation",
    "total_loss",
]


def project(coupling, features, mode: str = "barycentric") -> FeatureSequence:
    """Map l_a source rows onto the l_t target positions via the plan.

    Raw mode returns gamma^T H.  Barycentric mode (default) additionally
    divides row j by the plan's column mass, i.e. each output row is the
    mass-weighted average of the source rows feeding it; requires every
    column to carry mass.
    """
    plan = as_matrix(coupling)
    h = as_matrix(features)
    if plan.shape[0] != h.shape[0]:
        raise ShapeError(
            f"project: plan has {plan.shape[0]} rows but features have {h.shape[0]}"
        )
    if mode == "raw":
        return FeatureSequence(plan.T @ h)
    if mode != "barycentric":
        raise DomainError(f"project: unknown mode {mode!r}")
    col_mass = plan.sum(axis=0)
    if np.any(col_mass <= 0.0):
        bad = int(np.flatnonzero(col_mass <= 0.0)[0])
        raise DomainError(f"project: column {bad} carries no mass")
    return FeatureSequence((plan / col_mass[None, :]).T @ h)


def alignment_loss(projected, target, trim_head: int = 1, trim_tail: int = 1) -> float:
    """Sum of 1 - cos(projected_j, target_j) over the retained rows.

    The first `trim_head` and last `trim_tail` rows are skipped (start-
    and end-of-sequence symbols by default).  Scale-invariant in either
    argument; zero-norm retained rows are a hard error.
    """
    zp = as_matrix(projected)
    zt = as_matrix(target)
    if zp.shape != zt.shape:
        raise ShapeError(f"alignment_loss: shapes differ, {zp.shape} vs {zt.shape}")
    if trim_head < 0 or trim_tail < 0:
        raise DomainError("alignment_loss: trims must be >= 0")
    rows = zp.shape[0]
    if trim_head + trim_tail >= rows:
        raise DomainError(
            f"alignment_loss: trims remove all {rows} rows"
        )
    kept = slice(trim_head, rows - trim_tail)
    pu = unit_rows(zp[kept])
    tu = unit_rows(zt[kept])
    diff = pu - tu
    return float((diff * diff).sum() * 0.5)


@dataclass(frozen=True, eq=False)
class FusionWeights:
    """Parameters of the fusion transform: the projection matrix and
    bias, the two layer norms around it, the residual scale w_s, and the
    layer-norm epsilon."""

    w3: np.ndarray              # d_t x d_a projection
    bias3: np.ndarray           # d_a
    ln_pre_gain: np.ndarray     # d_t
    ln_pre_bias: np.ndarray     # d_t
    ln_post_gain: np.ndarray    # d_a
    ln_post_bias: np.ndarray    # d_a
    w_s: float
    eps: float = 1e-5

    def __post_init__(self):
        arrays = {
            "w3": np.asarray(self.w3, dtype=np.float64),
            "bias3": np.asarray(self.bias3, dtype=np.float64),
            "ln_pre_gain": np.asarray(self.ln_pre_gain, dtype=np.float64),
            "ln_pre_bias": np.asarray(self.ln_pre_bias, dtype=np.float64),
            "ln_post_gain": np.asarray(self.ln_post_gain, dtype=np.float64),
            "ln_post_bias": np.asarray(self.ln_post_bias, dtype=np.float64),
        }
        if arrays["w3"].ndim != 2:
            raise ShapeError("FusionWeights: w3 must be a matrix")
        d_t, d_a = arrays["w3"].shape
        expected = {
            "bias3": d_a,
            "ln_pre_gain": d_t,
            "ln_pre_bias": d_t,
            "ln_post_gain": d_a,
            "ln_post_bias": d_a,
        }
        for name, size in expected.items():
            if arrays[name].shape != (size,):
                raise ShapeError(
                    f"FusionWeights: {name} must have shape ({size},), got {arrays[name].shape}"
                )
        for name, arr in arrays.items():
            if not np.all(np.isfinite(arr)):
                raise DomainError(f"FusionWeights: {name} has non-finite entries")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not np.isfinite(self.w_s):
            raise DomainError("FusionWeights: w_s must be finite")
        if not (np.isfinite(self.eps) and self.eps > 0.0):
            raise DomainError("FusionWeights: eps must be > 0")

    @classmethod
    def seeded(cls, d_t: int, d_a: int, w_s: float, seed: int = 0) -> "FusionWeights":
        """Random but reproducible weights, handy for demos and tests."""
        rng = np.random.default_rng(seed)
        return cls(
            w3=rng.standard_normal((d_t, d_a)) / np.sqrt(d_t),
            bias3=rng.standard_normal(d_a) * 0.1,
            ln_pre_gain=np.ones(d_t),
            ln_pre_bias=np.zeros(d_t),
            ln_post_gain=np.ones(d_a),
            ln_post_bias=np.zeros(d_a),
            w_s=w_s,
        )


def _layer_norm(x: np.ndarray, gain: np.ndarray, bias: np.ndarray, eps: float) -> np.ndarray:
    mean = x.mean(axis=1, keepdims=True)
    centered = x - mean
    var = (centered * centered).mean(axis=1, keepdims=True)
    return centered / np.sqrt(var + eps) * gain[None, :] + bias[None, :]


def fuse_representation(h_enc, h_aligned, weights: FusionWeights) -> FeatureSequence:
    """Residual injection of aligned features into the encoder output:

        out = H_enc + w_s * LN(affine(LN(H_aligned)))

    Layer norm is per-row mean/variance normalization with gain, bias
    and eps inside the square root.
    """
    enc = as_matrix(h_enc)
    aligned = as_matrix(h_aligned)
    if enc.shape[0] != aligned.shape[0]:
        raise ShapeError(
            f"fuse_representation: row counts differ, {enc.shape[0]} vs {aligned.shape[0]}"
        )
    d_t, d_a = weights.w3.shape
    if aligned.shape[1] != d_t:
        raise ShapeError(
            f"fuse_representation: aligned features have dim {aligned.shape[1]}, w3 expects {d_t}"
        )
    if enc.shape[1] != d_a:
        raise ShapeError(
            f"fuse_representation: encoder features have dim {enc.shape[1]}, w3 yields {d_a}"
        )
    inner = _layer_norm(aligned, weights.ln_pre_gain, weights.ln_pre_bias, weights.eps)
    outer = _layer_norm(
        inner @ weights.w3 + weights.bias3[None, :],
        weights.ln_post_gain,
        weights.ln_post_bias,
        weights.eps,
    )
    return FeatureSequence(enc + weights.w_s * outer)


def total_loss(l_ctc: float, l_align: float, l_fgwd: float, lam: float) -> float:
    """Weighted training loss lam * L_ctc + (1 - lam) * (L_align + L_fgwd)."""
    for name, value in (("l_ctc", l_ctc), ("l_align", l_align), ("l_fgwd", l_fgwd)):
        if not np.isfinite(value):
            raise DomainError(f"total_loss: {name} is not finite")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"total_loss: lambda must be in [0, 1], got {lam!r}")
    return lam * l_ctc + (1.0 - lam) * (l_align + l_fgwd)
