"""Structured optimal-transport alignment of feature sequences.

Aligns two sequences of embeddings (for example acoustic frames and
linguistic tokens) by solving entropic OT on node costs, edge-matching
OT on intra-sequence structure, or a fused combination of both with an
optional temporal-consistency prior, then derives projection, alignment
and transfer losses from the coupling.
"""

from .core import (
    CostMatrix,
    Coupling,
    DomainError,
    FeatureSequence,
    InputFormatError,
    Marginal,
    OTAlignError,
    ShapeError,
    SizeError,
    SolverConfig,
    UsageError,
    ValidationReport,
    uniform_marginal,
    validate_coupling,
)
from .costs import blend_temporal, cross_modal_cost, intra_modal_cost, temporal_prior
from .fused import fgwd_solve, fused_cost, gwd_solve, initial_plan
from .gromov import gw_linearized_cost, gw_objective
from .pipeline import AlignmentResult, align_features
from .presets import DEFAULT_LOSS_MIX, PRESETS, Preset
from .sinkhorn import SolveDiagnostics, entropy, sinkhorn_solve, transport_cost
from .stats import band_mass, hard_segmentation, token_duration_variance
from .synth import synth_pair
from .transfer import (
    FusionWeights,
    alignment_loss,
    fuse_representation,
    project,
    total_loss,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "CostMatrix",
    "Coupling",
    "DEFAULT_LOSS_MIX",
    "DomainError",
    "FeatureSequence",
    "FusionWeights",
    "InputFormatError",
    "Marginal",
    "OTAlignError",
    "PRESETS",
    "Preset",
    "ShapeError",
    "SizeError",
    "SolveDiagnostics",
    "SolverConfig",
    "UsageError",
    "ValidationReport",
    "align_features",
    "alignment_loss",
    "band_mass",
    "blend_temporal",
    "cross_modal_cost",
    "entropy",
    "fgwd_solve",
    "fuse_representation",
    "fused_cost",
    "gw_linearized_cost",
    "gw_objective",
    "gwd_solve",
    "hard_segmentation",
    "initial_plan",
    "intra_modal_cost",
    "project",
    "sinkhorn_solve",
    "synth_pair",
    "temporal_prior",
    "token_duration_variance",
    "total_loss",
    "transport_cost",
    "uniform_marginal",
    "validate_coupling",
]
