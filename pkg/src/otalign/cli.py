"""Command-line frontend.

Subcommands: `align` (solve and dump coupling + diagnostics), `sweep`
(grid over alpha/rho/beta with a trend summary), `project` (apply a
stored coupling and score the alignment), `synth` (generate seeded
synthetic instances).  All outputs are deterministic: running a command
twice with the same inputs produces byte-identical files.

Exit code 0 on success; failures print a category-prefixed message
(usage / io / shape / domain / size) to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

import numpy as np

from .core import (
    DomainError,
    FeatureSequence,
    OTAlignError,
    ShapeError,
    SolverConfig,
    UsageError,
)
from .io import FORMATS, format_float, read_matrix, write_document, write_matrix
from .pipeline import align_features
from .presets import DEFAULT_LOSS_MIX, PRESETS
from .stats import band_mass, token_duration_variance
from .synth import WARP_PROFILES, synth_pair
from .transfer import alignment_loss, project

__all__ = ["main"]


def _solver_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("solver parameters")
    group.add_argument("--preset", choices=sorted(PRESETS), help="named parameter preset")
    group.add_argument("--alpha", type=float, help="fusion weight in [0,1] (overrides preset)")
    group.add_argument("--rho", type=float, help="temporal prior weight >= 0")
    group.add_argument("--beta", type=float, help="entropy weight > 0")
    group.add_argument("--ws", type=float, help="fusion scale w_s (recorded in diagnostics)")
    group.add_argument("--lambda", dest="lam", type=float, help="total-loss mix in [0,1]")
    group.add_argument("--max-inner", type=int, default=2000, help="Sinkhorn iteration cap")
    group.add_argument("--max-outer", type=int, default=50, help="outer iteration cap")
    group.add_argument("--tol", type=float, default=1e-9, help="marginal tolerance")
    group.add_argument(
        "--obj-rel-tol", type=float, default=1e-7, help="outer relative objective tolerance"
    )
    group.add_argument(
        "--init", choices=["product", "band"], default="product", help="initial plan"
    )
    group.add_argument(
        "--band-width",
        type=float,
        default=2.0,
        help="width (grid steps) of the diagonal band, for init and the band-mass statistic",
    )
    group.add_argument(
        "--no-temporal-in-fused",
        action="store_true",
        help="keep the temporal prior out of the fused solve's node cost",
    )


def _resolved(args) -> dict:
    preset = PRESETS[args.preset] if args.preset else None

    def pick(flag, preset_value, fallback):
        if flag is not None:
            return flag
        if preset is not None:
            return preset_value
        return fallback

    return {
        "alpha": pick(args.alpha, preset.alpha if preset else None, 0.0),
        "rho": pick(args.rho, preset.rho if preset else None, 0.0),
        "beta": pick(args.beta, preset.beta if preset else None, 0.05),
        "ws": pick(args.ws, preset.w_s if preset else None, 0.1),
        "lam": args.lam if args.lam is not None else DEFAULT_LOSS_MIX,
    }


def _config(args, params, alpha=None, rho=None, beta=None) -> SolverConfig:
    return SolverConfig(
        beta=beta if beta is not None else params["beta"],
        alpha=alpha if alpha is not None else params["alpha"],
        rho=rho if rho is not None else params["rho"],
        max_inner_iters=args.max_inner,
        max_outer_iters=args.max_outer,
        marginal_tol=args.tol,
        objective_rel_tol=args.obj_rel_tol,
        init=args.init,
        band_width=args.band_width,
    )


def _load_features(path) -> FeatureSequence:
    return FeatureSequence(read_matrix(path))


def _load_pair(args) -> tuple[FeatureSequence, FeatureSequence]:
    acoustic = _load_features(args.acoustic)
    linguistic = _load_features(args.linguistic)
    if acoustic.dim != linguistic.dim:
        raise ShapeError(
            f"feature dims differ: {args.acoustic} has {acoustic.dim}, "
            f"{args.linguistic} has {linguistic.dim}"
        )
    return acoustic, linguistic


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _run_entries(args, params, cfg, result) -> list[tuple[str, object]]:
    coupling = result.coupling
    return [
        ("alpha", cfg.alpha),
        ("rho", cfg.rho),
        ("beta", cfg.beta),
        ("ws", params["ws"]),
        ("lambda", params["lam"]),
        ("init", cfg.init),
        ("temporal_in_fused", not args.no_temporal_in_fused),
        ("l_a", coupling.shape[0]),
        ("l_t", coupling.shape[1]),
        ("fgwd_loss", result.fgwd_loss),
        ("wd_term", result.wd_term),
        ("gwd_term", result.gwd_term),
        ("coupling_entropy", result.diagnostics.final_entropy),
        ("outer_iterations", result.diagnostics.iterations),
        ("inner_iterations", result.diagnostics.inner_iterations),
        ("marginal_violation", result.diagnostics.final_marginal_violation),
        ("converged", result.diagnostics.converged),
        ("band_width", args.band_width),
        ("band_mass", band_mass(coupling, width=args.band_width)),
        ("duration_variance", token_duration_variance(coupling)),
        ("objective_trace", [format_float(v) for v in result.diagnostics.objective_trace]),
    ]


def cmd_align(args) -> int:
    acoustic, linguistic = _load_pair(args)
    params = _resolved(args)
    cfg = _config(args, params)
    result = align_features(
        acoustic, linguistic, cfg, temporal_in_fused=not args.no_temporal_in_fused
    )
    out = _out_dir(args)
    write_matrix(out / "coupling.csv", result.coupling.values, fmt="csv")
    entries = [("command", "align"), ("preset", args.preset or "custom")]
    entries += _run_entries(args, params, cfg, result)
    write_document(out / "diagnostics.txt", entries)
    return 0


def _grid(raw: str | None, fallback: float, flag: str) -> list[float]:
    if raw is None:
        return [fallback]
    values = [float(cell) for cell in raw.split(",") if cell.strip()]
    if not values:
        raise UsageError(f"{flag}: empty grid")
    return values


def _cell_name(alpha: float, rho: float, beta: float) -> str:
    return f"cell_a{alpha:g}_r{rho:g}_b{beta:g}.txt"


def cmd_sweep(args) -> int:
    acoustic, linguistic = _load_pair(args)
    params = _resolved(args)
    alphas = _grid(args.alphas, params["alpha"], "--alphas")
    rhos = _grid(args.rhos, params["rho"], "--rhos")
    betas = _grid(args.betas, params["beta"], "--betas")
    out = _out_dir(args)
    stats: dict[tuple[float, float, float], dict[str, float]] = {}
    for alpha, rho, beta in itertools.product(alphas, rhos, betas):
        cfg = _config(args, params, alpha=alpha, rho=rho, beta=beta)
        result = align_features(
            acoustic, linguistic, cfg, temporal_in_fused=not args.no_temporal_in_fused
        )
        stats[(alpha, rho, beta)] = {
            "band_mass": band_mass(result.coupling, width=args.band_width),
            "entropy": result.diagnostics.final_entropy,
            "duration_variance": token_duration_variance(result.coupling),
        }
        entries = [("command", "sweep-cell")]
        entries += _run_entries(args, params, cfg, result)
        write_document(out / _cell_name(alpha, rho, beta), entries)

    summary: list[tuple[str, object]] = [
        ("command", "sweep"),
        ("cells", len(stats)),
        ("alphas", [format_float(v) for v in alphas]),
        ("rhos", [format_float(v) for v in rhos]),
        ("betas", [format_float(v) for v in betas]),
        (
            "band_mass_by_rho",
            [
                f"rho={format_float(r)} band_mass="
                + format_float(stats[(alphas[0], r, betas[0])]["band_mass"])
                for r in rhos
            ],
        ),
        (
            "entropy_by_beta",
            [
                f"beta={format_float(bt)} entropy="
                + format_float(stats[(alphas[0], rhos[0], bt)]["entropy"])
                for bt in betas
            ],
        ),
        (
            "duration_variance_by_alpha",
            [
                f"alpha={format_float(al)} duration_variance="
                + format_float(stats[(al, rhos[0], betas[0])]["duration_variance"])
                for al in alphas
            ],
        ),
    ]
    write_document(out / "summary.txt", summary)
    return 0


def cmd_project(args) -> int:
    plan = read_matrix(args.coupling)
    source = _load_features(args.source)
    target = _load_features(args.target)
    total = float(plan.sum())
    if abs(total - 1.0) > 1e-6:
        raise DomainError(f"{args.coupling}: coupling mass is {total!r}, expected 1")
    projected = project(plan, source, mode=args.mode)
    loss = alignment_loss(projected, target, trim_head=args.trim_head, trim_tail=args.trim_tail)
    out = _out_dir(args)
    write_matrix(out / "projected.csv", projected.values, fmt="csv")
    write_document(
        out / "projection.txt",
        [
            ("command", "project"),
            ("mode", args.mode),
            ("trim_head", args.trim_head),
            ("trim_tail", args.trim_tail),
            ("rows", projected.rows),
            ("dim", projected.dim),
            ("alignment_loss", loss),
        ],
    )
    return 0


def cmd_synth(args) -> int:
    if args.lt < 1 or args.la < args.lt:
        raise UsageError(f"need --la >= --lt >= 1, got la={args.la}, lt={args.lt}")
    if args.dim < 2:
        raise UsageError(f"need --dim >= 2, got {args.dim}")
    if args.noise < 0.0:
        raise UsageError(f"--noise must be >= 0, got {args.noise}")
    frames, tokens, boundaries = synth_pair(
        args.seed, args.la, args.lt, args.dim, warp=args.warp, noise=args.noise
    )
    out = _out_dir(args)
    ext = args.format
    write_matrix(out / f"acoustic.{ext}", frames.values, fmt=args.format)
    write_matrix(out / f"linguistic.{ext}", tokens.values, fmt=args.format)
    write_matrix(out / "boundaries.csv", boundaries.astype(np.float64), fmt="csv")
    write_document(
        out / "synth.txt",
        [
            ("command", "synth"),
            ("seed", args.seed),
            ("l_a", args.la),
            ("l_t", args.lt),
            ("dim", args.dim),
            ("warp", args.warp),
            ("noise", args.noise),
            ("format", args.format),
        ],
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otalign",
        description="Structured optimal-transport alignment of feature sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_align = sub.add_parser("align", help="align two feature files")
    p_align.add_argument("acoustic", help="source feature matrix (CSV or OTMX)")
    p_align.add_argument("linguistic", help="target feature matrix (CSV or OTMX)")
    p_align.add_argument("--out", required=True, help="output directory")
    _solver_flags(p_align)
    p_align.set_defaults(func=cmd_align)

    p_sweep = sub.add_parser("sweep", help="grid over alpha/rho/beta with trend summary")
    p_sweep.add_argument("acoustic")
    p_sweep.add_argument("linguistic")
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--alphas", help="comma-separated alpha grid")
    p_sweep.add_argument("--rhos", help="comma-separated rho grid")
    p_sweep.add_argument("--betas", help="comma-separated beta grid")
    _solver_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_project = sub.add_parser("project", help="apply a stored coupling to features")
    p_project.add_argument("--coupling", required=True, help="coupling matrix file")
    p_project.add_argument("--source", required=True, help="features to project")
    p_project.add_argument("--target", required=True, help="features to score against")
    p_project.add_argument("--out", required=True)
    p_project.add_argument("--mode", choices=["barycentric", "raw"], default="barycentric")
    p_project.add_argument("--trim-head", type=int, default=1)
    p_project.add_argument("--trim-tail", type=int, default=1)
    p_project.set_defaults(func=cmd_project)

    p_synth = sub.add_parser("synth", help="generate a seeded synthetic instance")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--la", type=int, required=True, help="frame count")
    p_synth.add_argument("--lt", type=int, required=True, help="token count")
    p_synth.add_argument("--dim", type=int, required=True, help="feature dimension")
    p_synth.add_argument("--warp", choices=list(WARP_PROFILES), default="uniform")
    p_synth.add_argument("--noise", type=float, default=0.05)
    p_synth.add_argument("--format", choices=list(FORMATS), default="csv")
    p_synth.add_argument("--out", required=True)
    p_synth.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage: {exc}", file=sys.stderr)
        return 2
    except OTAlignError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
