"""Exact verification engine for the Block type Lie conformal algebra."""

from .algebra import (
    AlgebraSpec,
    ConformalElement,
    Preset,
    bracket_generators,
    check_jacobi,
    check_skew,
    j_product,
    lambda_bracket,
)
from .cohomology import (
    Cochain,
    CohomologyDims,
    ReducedCochain,
    TruncationParams,
    cohomology_dims,
    differential,
    homotopy_check,
    sigma_reduce,
)
from .derivations import (
    ConformalLinearMap,
    DerivationWindowProblem,
    inner_quotient_dim,
    solve_derivation_window,
)
from .exceptions import (
    BracketTableError,
    CochainError,
    ConformalError,
    CostGuardError,
    DimensionMismatchError,
    PolynomialParseError,
    SpecFileError,
    SymbolicParameterError,
    WindowError,
)
from .linalg import RationalMatrix, SubspaceBasis, kernel_basis, rref
from .models import CheckReport, CheckStatus, Report, RunConfig
from .modules import ModulePreset, ModuleSpec, check_module_axioms, classify_rank1_window
from .poisson import (
    PreVertexPoissonStructure,
    SymElement,
    check_gelfand_dorfman,
    check_novikov_axioms,
    check_th1_condition,
    novikov_product,
    sym_derivation_action,
)
from .poly import Poly
from .runner import run
from .spec_file import load_spec
from .vertex import (
    FormalDistribution,
    check_half_commutator,
    check_half_skew,
    sing,
    sing_exp_partial,
    y_minus,
)

__all__ = [
    "AlgebraSpec",
    "BracketTableError",
    "CheckReport",
    "CheckStatus",
    "Cochain",
    "CochainError",
    "CohomologyDims",
    "ConformalElement",
    "ConformalError",
    "ConformalLinearMap",
    "CostGuardError",
    "DerivationWindowProblem",
    "DimensionMismatchError",
    "FormalDistribution",
    "ModulePreset",
    "ModuleSpec",
    "PolynomialParseError",
    "Poly",
    "PreVertexPoissonStructure",
    "Preset",
    "RationalMatrix",
    "ReducedCochain",
    "Report",
    "RunConfig",
    "SpecFileError",
    "SubspaceBasis",
    "SymElement",
    "SymbolicParameterError",
    "TruncationParams",
    "WindowError",
    "bracket_generators",
    "check_gelfand_dorfman",
    "check_half_commutator",
    "check_half_skew",
    "check_jacobi",
    "check_module_axioms",
    "check_novikov_axioms",
    "check_skew",
    "check_th1_condition",
    "classify_rank1_window",
    "cohomology_dims",
    "differential",
    "homotopy_check",
    "inner_quotient_dim",
    "j_product",
    "kernel_basis",
    "lambda_bracket",
    "load_spec",
    "novikov_product",
    "rref",
    "run",
    "sigma_reduce",
    "sing",
    "sing_exp_partial",
    "solve_derivation_window",
    "sym_derivation_action",
    "y_minus",
]
