"""Structured limited-memory quasi-Newton solver with diagonal-plus-sparse seeds."""

from .bench import (
    CellOutcome,
    ExperimentGrid,
    Metric,
    MethodSpec,
    ProblemSpec,
    ProfileCurve,
    performance_profile,
    read_profile_csv,
    read_results_csv,
    run_grid,
    write_profile_csv,
    write_results_csv,
)
from .driver import (
    InnerSolveConfig,
    IterationRecord,
    NonFiniteError,
    RoseConfig,
    RoseResult,
    SeedMode,
    Status,
    StepSnapshot,
    rose_minimize,
)
from .krylov import EsParams, SolveReport, es_budget, minres_solve
from .lbfgs import PairBuffer, UpdatePair, maybe_store, two_loop_direction
from .linesearch import (
    LineSearchConfig,
    LineSearchError,
    LineSearchMode,
    LineSearchResult,
    armijo_backtracking,
    wolfe_search,
)
from .operators import (
    DiagonalOp,
    ScaledIdentity,
    SparseSymmetric,
    SumOp,
    SymmetricOperator,
    five_point_laplacian,
    to_dense,
)
from .problems import StructuredObjective, make_quadratic_benchmark, make_toy_nonconvex
from .scaling import (
    BBScalars,
    BoundChoice,
    DiagonalSeedVariant,
    SeedFormula,
    TrustInterval,
    bb_scalars,
    build_diagonal_seed,
    cautious_bounds,
    restrict_interval,
    trust_interval,
)

__version__ = "0.1.0"

__all__ = [
    "BBScalars",
    "BoundChoice",
    "CellOutcome",
    "DiagonalOp",
    "DiagonalSeedVariant",
    "EsParams",
    "ExperimentGrid",
    "InnerSolveConfig",
    "IterationRecord",
    "LineSearchConfig",
    "LineSearchError",
    "LineSearchMode",
    "LineSearchResult",
    "Metric",
    "MethodSpec",
    "NonFiniteError",
    "PairBuffer",
    "ProblemSpec",
    "ProfileCurve",
    "RoseConfig",
    "RoseResult",
    "ScaledIdentity",
    "SeedFormula",
    "SeedMode",
    "SolveReport",
    "SparseSymmetric",
    "Status",
    "StepSnapshot",
    "StructuredObjective",
    "SumOp",
    "SymmetricOperator",
    "TrustInterval",
    "UpdatePair",
    "armijo_backtracking",
    "bb_scalars",
    "build_diagonal_seed",
    "cautious_bounds",
    "es_budget",
    "five_point_laplacian",
    "make_quadratic_benchmark",
    "make_toy_nonconvex",
    "maybe_store",
    "minres_solve",
    "performance_profile",
    "read_profile_csv",
    "read_results_csv",
    "restrict_interval",
    "rose_minimize",
    "run_grid",
    "to_dense",
    "trust_interval",
    "two_loop_direction",
    "wolfe_search",
    "write_profile_csv",
    "write_results_csv",
]
