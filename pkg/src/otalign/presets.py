"""Named parameter presets bundling the operating points used in the
reference experiments: fusion weight alpha, temporal weight rho,
entropy weight beta, and the fusion scale w_s.  The loss mix lambda is
fixed at 0.3 across all of them.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Preset", "PRESETS", "DEFAULT_LOSS_MIX"]

DEFAULT_LOSS_MIX = 0.3


@dataclass(frozen=True)
class Preset:
    alpha: float
    rho: float
    beta: float
    w_s: float


PRESETS: dict[str, Preset] = {
    "setting1": Preset(alpha=0.0, rho=0.0, beta=0.05, w_s=0.1),
    "setting2": Preset(alpha=0.01, rho=0.3, beta=0.3, w_s=0.05),
    "setting3": Preset(alpha=0.01, rho=0.5, beta=0.5, w_s=0.1),
    "setting4": Preset(alpha=0.02, rho=0.5, beta=0.5, w_s=0.1),
    "setting5": Preset(alpha=0.02, rho=0.3, beta=0.5, w_s=0.1),
    "setting6": Preset(alpha=0.05, rho=0.5, beta=0.5, w_s=0.1),
    "setting7": Preset(alpha=0.1, rho=0.1, beta=0.3, w_s=0.05),
    "setting8": Preset(alpha=0.01, rho=0.5, beta=0.5, w_s=0.3),
}
