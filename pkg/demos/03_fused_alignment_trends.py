"""How the three solver weights shape a fused alignment.

On monotone synthetic data with uneven token durations, sweeps each of
the three weights while holding the others fixed:

* the fusion weight alpha trades node fidelity against structural
  evenness - larger alpha segments the frames more uniformly;
* the temporal weight rho pulls mass toward the normalized diagonal,
  enforcing monotone correspondence;
* the entropy weight beta diffuses the plan.
"""

from otalign import (
    SolverConfig,
    align_features,
    band_mass,
    synth_pair,
    token_duration_variance,
)

frames, tokens, boundaries = synth_pair(seed=7, l_a=48, l_t=8, dim=12, warp="ramp", noise=0.05)
print("true spans:", (boundaries[:, 1] - boundaries[:, 0]).tolist())


def solve(alpha, rho, beta):
    return align_features(frames, tokens, SolverConfig(alpha=alpha, rho=rho, beta=beta))


print("\nfusion weight (rho=0.5, beta=0.5): duration variance shrinks")
for alpha in (0.0, 0.02, 0.1, 0.5):
    result = solve(alpha, 0.5, 0.5)
    print(
        f"  alpha={alpha:<5} loss={result.fgwd_loss:.4f} "
        f"duration_variance={token_duration_variance(result.coupling):8.3f}"
    )

print("\ntemporal weight (alpha=0.1, beta=0.3): band mass grows")
for rho in (0.0, 0.1, 0.3, 0.5):
    result = solve(0.1, rho, 0.3)
    print(f"  rho={rho:<4} band_mass={band_mass(result.coupling):.4f}")

print("\nentropy weight (alpha=0.1, rho=0.5): plans diffuse")
for beta in (0.05, 0.3, 0.5):
    result = solve(0.1, 0.5, beta)
    print(f"  beta={beta:<5} coupling_entropy={result.diagnostics.final_entropy:.4f}")
