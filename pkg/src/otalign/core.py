"""Domain types shared by every solver: feature sequences, marginals,
cost matrices, transport couplings and the solver configuration.

All numerics are 64-bit floats.  Types are immutable after construction
(arrays are copied and marked read-only) and reject degenerate inputs
up front instead of sanitizing them.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

__all__ = [
    "OTAlignError",
    "UsageError",
    "InputFormatError",
    "ShapeError",
    "DomainError",
    "SizeError",
    "FeatureSequence",
    "Marginal",
    "CostMatrix",
    "Coupling",
    "SolverConfig",
    "ValidationReport",
    "COST_KINDS",
    "INIT_MODES",
    "uniform_marginal",
    "validate_coupling",
]

MARGINAL_SUM_TOL = 1e-12
INTRA_SYMMETRY_TOL = 1e-12


class OTAlignError(Exception):
    """Base error; ``category`` drives the CLI's message prefix and exit code."""

    category = "error"


class UsageError(OTAlignError):
    category = "usage"


class InputFormatError(OTAlignError):
    category = "io"


class ShapeError(OTAlignError):
    category = "shape"


class DomainError(OTAlignError):
    category = "domain"


class SizeError(OTAlignError):
    category = "size"


def _frozen(values, *, name: str, ndim: int) -> np.ndarray:
    try:
        arr = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name}: not interpretable as a float array ({exc})")
    if arr.ndim != ndim:
        raise ShapeError(f"{name}: expected {ndim}-D data, got {arr.ndim}-D")
    if arr.size == 0:
        raise SizeError(f"{name}: empty array")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name}: contains NaN or Inf")
    arr.setflags(write=False)
    return arr


def as_matrix(obj) -> np.ndarray:
    """Accept a domain type or a plain 2-D array-like; return its values."""
    if hasattr(obj, "values"):
        return obj.values
    arr = np.asarray(obj, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"expected a matrix, got {arr.ndim}-D data")
    return arr


@dataclass(frozen=True, eq=False)
class FeatureSequence:
    """A length-L sequence of d-dimensional feature vectors (one modality).

    Every entry must be finite and every row must have strictly positive
    Euclidean norm; both are required by the cosine ground costs.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.values, name="FeatureSequence", ndim=2)
        norms = np.sqrt((arr * arr).sum(axis=1))
        if np.any(norms == 0.0):
            bad = int(np.flatnonzero(norms == 0.0)[0])
            raise DomainError(f"FeatureSequence: row {bad} has zero norm")
        object.__setattr__(self, "values", arr)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class Marginal:
    """Strictly positive probability vector; weights must sum to 1."""

    weights: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.weights, name="Marginal", ndim=1)
        if np.any(arr <= 0.0):
            raise DomainError("Marginal: weights must be strictly positive")
        total = float(arr.sum())
        if abs(total - 1.0) > MARGINAL_SUM_TOL:
            raise DomainError(f"Marginal: weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", arr)

    def __len__(self) -> int:
        return self.weights.shape[0]


COST_KINDS = ("cross-modal", "intra-modal", "temporal", "fused")


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Nonnegative ground-cost matrix tagged with its provenance.

    Intra-modal matrices must be square, symmetric (within 1e-12) and
    have a zero diagonal.
    """

    values: np.ndarray
    kind: str

    def __post_init__(self):
        arr = _frozen(self.values, name="CostMatrix", ndim=2)
        if self.kind not in COST_KINDS:
            raise DomainError(f"CostMatrix: unknown kind {self.kind!r}")
        if np.any(arr < 0.0):
            raise DomainError("CostMatrix: negative entries")
        if self.kind == "intra-modal":
            r, c = arr.shape
            if r != c:
                raise ShapeError(f"CostMatrix: intra-modal must be square, got {r}x{c}")
            if np.max(np.abs(np.diagonal(arr))) > INTRA_SYMMETRY_TOL:
                raise DomainError("CostMatrix: intra-modal diagonal must be zero")
            if np.max(np.abs(arr - arr.T)) > INTRA_SYMMETRY_TOL:
                raise DomainError("CostMatrix: intra-modal matrix must be symmetric")
        object.__setattr__(self, "values", arr)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class Coupling:
    """Nonnegative transport plan with its target marginals attached.

    Construction checks shape, finiteness and nonnegativity only;
    marginal feasibility is checked explicitly by `validate_coupling`
    at the caller's tolerance.
    """

    values: np.ndarray
    row_marginal: Marginal
    col_marginal: Marginal

    def __post_init__(self):
        arr = _frozen(self.values, name="Coupling", ndim=2)
        if arr.shape != (len(self.row_marginal), len(self.col_marginal)):
            raise ShapeError(
                f"Coupling: plan is {arr.shape[0]}x{arr.shape[1]} but marginals "
                f"have lengths {len(self.row_marginal)} and {len(self.col_marginal)}"
            )
        if np.any(arr < 0.0):
            raise DomainError("Coupling: negative entries")
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


INIT_MODES = ("product", "band", "user")


@dataclass(frozen=True)
class SolverConfig:
    """Numeric configuration shared by the entropic and fused solvers.

    beta is the entropy weight (> 0), alpha the fusion weight in [0, 1]
    (0 = node cost only, 1 = edge cost only), rho the temporal-prior
    weight (>= 0).  `init` selects the starting plan: "product" (outer
    product of the marginals), "band" (mass on a width-`band_width`
    band around the normalized diagonal) or "user" (caller-supplied).
    """

    beta: float = 0.05
    alpha: float = 0.0
    rho: float = 0.0
    max_inner_iters: int = 2000
    max_outer_iters: int = 50
    marginal_tol: float = 1e-9
    objective_rel_tol: float = 1e-7
    init: str = "product"
    band_width: float = 2.0

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta <= 0.0:
            raise DomainError(f"SolverConfig: beta must be > 0, got {self.beta!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"SolverConfig: alpha must be in [0, 1], got {self.alpha!r}")
        if not np.isfinite(self.rho) or self.rho < 0.0:
            raise DomainError(f"SolverConfig: rho must be >= 0, got {self.rho!r}")
        if self.max_inner_iters < 1 or self.max_outer_iters < 1:
            raise DomainError("SolverConfig: iteration limits must be >= 1")
        if self.marginal_tol <= 0.0 or self.objective_rel_tol <= 0.0:
            raise DomainError("SolverConfig: tolerances must be > 0")
        if self.init not in INIT_MODES:
            raise DomainError(f"SolverConfig: init must be one of {INIT_MODES}, got {self.init!r}")
        if self.band_width <= 0.0:
            raise DomainError("SolverConfig: band_width must be > 0")


def uniform_marginal(length: int) -> Marginal:
    """Uniform weights 1/L; the default when no prior information exists."""
    if length < 1:
        raise SizeError(f"uniform_marginal: length must be >= 1, got {length}")
    return Marginal(np.full(length, 1.0 / length))


@dataclass(frozen=True)
class ValidationReport:
    """Marginal-feasibility report for a coupling."""

    max_row_violation: float
    max_col_violation: float
    min_entry: float
    tol: float

    @property
    def ok(self) -> bool:
        return (
            self.max_row_violation <= self.tol
            and self.max_col_violation <= self.tol
            and self.min_entry >= 0.0
        )


def validate_coupling(coupling: Coupling, tol: float) -> ValidationReport:
    """Check polytope membership: row/column sums against the attached
    marginals (infinity norm) and entry nonnegativity."""
    plan = coupling.values
    a = coupling.row_marginal.weights
    b = coupling.col_marginal.weights
    row_violation = float(np.max(np.abs(plan.sum(axis=1) - a)))
    col_violation = float(np.max(np.abs(plan.sum(axis=0) - b)))
    return ValidationReport(
        max_row_violation=row_violation,
        max_col_violation=col_violation,
        min_entry=float(plan.min()),
        tol=float(tol),
    )


def marginal_violation(plan: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Infinity-norm violation of both marginal constraints for a raw plan."""
    row = float(np.max(np.abs(plan.sum(axis=1) - a)))
    col = float(np.max(np.abs(plan.sum(axis=0) - b)))
    return max(row, col)
