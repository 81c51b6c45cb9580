"""Seeded synthetic instance generator: a token sequence and a frame
sequence built by stretching each token across a contiguous frame span
(plus bounded noise), with the ground-truth segment boundaries.

Emulates the shape of acoustic-frame / linguistic-token data at desk
scale so solver behavior can be checked against known structure.
"""

from __future__ import annotations

import numpy as np

from .core import DomainError, FeatureSequence, SizeError

__all__ = [
    "WARP_PROFILES",
    "synth_pair",
    "segment_durations",
]

WARP_PROFILES = ("uniform", "ramp", "random")


def segment_durations(l_a: int, l_t: int, warp: str, rng: np.random.Generator) -> np.ndarray:
    """Positive integer spans per token, summing to l_a.

    "uniform": as equal as possible.  "ramp": linearly growing, so later
    tokens last longer.  "random": seeded random proportions.  Spans are
    rounded by largest remainder and floored at one frame.
    """
    if warp not in WARP_PROFILES:
        raise DomainError(f"segment_durations: unknown warp profile {warp!r}")
    if warp == "uniform":
        weights = np.ones(l_t)
    elif warp == "ramp":
        weights = np.arange(1, l_t + 1, dtype=np.float64)
    else:
        weights = rng.uniform(0.5, 1.5, l_t)
    target = weights / weights.sum() * (l_a - l_t)
    spans = 1 + np.floor(target).astype(np.int64)
    shortfall = l_a - int(spans.sum())
    if shortfall > 0:
        order = np.argsort(-(target - np.floor(target)), kind="stable")
        spans[order[:shortfall]] += 1
    return spans


def synth_pair(
    seed: int,
    l_a: int,
    l_t: int,
    dim: int,
    warp: str = "uniform",
    noise: float = 0.05,
) -> tuple[FeatureSequence, FeatureSequence, np.ndarray]:
    """Build (frames, tokens, boundaries) for a seeded instance.

    Tokens are random unit vectors; each is replicated across its span,
    perturbed by componentwise uniform noise in [-noise, noise], and the
    rows re-normalized (skipped entirely at noise = 0, so frames equal
    their token bitwise).  `boundaries` has one (start, end) half-open
    frame range per token.
    """
    if l_t < 1 or l_a < l_t:
        raise SizeError(f"synth_pair: need l_a >= l_t >= 1, got l_a={l_a}, l_t={l_t}")
    if dim < 2:
        raise SizeError(f"synth_pair: need dim >= 2, got {dim}")
    if not np.isfinite(noise) or noise < 0.0:
        raise DomainError(f"synth_pair: noise must be >= 0, got {noise!r}")
    rng = np.random.default_rng(seed)
    tokens = rng.standard_normal((l_t, dim))
    tokens /= np.sqrt((tokens * tokens).sum(axis=1))[:, None]
    spans = segment_durations(l_a, l_t, warp, rng)
    frames = np.repeat(tokens, spans, axis=0)
    if noise > 0.0:
        frames = frames + rng.uniform(-noise, noise, frames.shape)
        frames /= np.sqrt((frames * frames).sum(axis=1))[:, None]
    ends = np.cumsum(spans)
    boundaries = np.stack([ends - spans, ends], axis=1)
    return FeatureSequence(frames), FeatureSequence(tokens), boundaries
