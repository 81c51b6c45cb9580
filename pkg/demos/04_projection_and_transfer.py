"""From a solved coupling to the transfer-side quantities.

Aligns a synthetic pair, projects the frame features onto the token
positions through the coupling, scores the trimmed cosine alignment
loss, pushes the aligned features through the fusion transform, and
composes the total training-style loss from the pieces (the recognition
loss enters as a supplied scalar).
"""

import numpy as np

from otalign import (
    FusionWeights,
    PRESETS,
    SolverConfig,
    align_features,
    alignment_loss,
    fuse_representation,
    project,
    synth_pair,
    total_loss,
)

frames, tokens, _ = synth_pair(seed=3, l_a=24, l_t=6, dim=8, noise=0.05)

preset = PRESETS["setting4"]
cfg = SolverConfig(alpha=preset.alpha, rho=preset.rho, beta=preset.beta)
result = align_features(frames, tokens, cfg)
print(f"fused loss {result.fgwd_loss:.4f} (node term {result.wd_term:.4f}, edge term {result.gwd_term:.4f})")

# Project frames onto token positions: one weighted average per token.
projected = project(result.coupling, frames)
print("projected shape:", projected.values.shape)

# First and last positions play the role of boundary symbols and are
# trimmed from the loss.
loss_align = alignment_loss(projected, tokens, trim_head=1, trim_tail=1)
print(f"alignment loss over retained rows: {loss_align:.4f}")

# Inject the aligned features back into an encoder-sized representation.
rng = np.random.default_rng(0)
encoder_out = rng.standard_normal((frames.rows, 16))
weights = FusionWeights.seeded(d_t=8, d_a=16, w_s=preset.w_s, seed=1)
fused = fuse_representation(encoder_out, frames, weights)
residual = np.linalg.norm(fused.values - encoder_out)
print(f"fusion residual norm at w_s={preset.w_s}: {residual:.4f}")

# The recognition loss is supplied by the caller; 0.3 is the standard mix.
ctc_scalar = 1.25
print("total loss:", total_loss(ctc_scalar, loss_align, result.fgwd_loss, 0.3))
