"""Orchestration of the verification suites."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, replace
from enum import StrEnum
import logging
import time

from conformalblock.algebra import AlgebraSpec, Preset, check_jacobi, check_skew
from conformalblock.cohomology import (
    WINDOW_CONVENTION,
    ReducedCochain,
    TruncationParams,
    cohomology_dims,
    d_squared_check,
    homotopy_check,
    is_reduced_coboundary,
    random_cochain,
    reduced_differential,
)
from conformalblock.derivations import DerivationWindowProblem, derivation_dims
from conformalblock.models import CheckReport, Report, RunConfig, SuiteReport
from conformalblock.modules import (
    ModulePreset,
    ModuleSpec,
    check_module_axioms,
    classify_rank1_window,
)
from conformalblock.poisson import (
    PreVertexPoissonStructure,
    check_gelfand_dorfman,
    check_novikov_axioms,
    check_th1_condition,
    expected_th1_left_term,
    th1_left_term,
)
from conformalblock.poly import ALPHA, DELTA, SHIFT, lambda_var, var
from conformalblock.spec_file import load_algebra_spec, load_module_spec, parse_coefficients
from conformalblock.vertex import check_half_commutator, check_half_skew

_LOGGER = logging.getLogger(__name__)

RANDOM_SEEDS = range(3)
PROPERTY_DEGREE_LIMIT = 2


class Suite(StrEnum):
    """Verification suite."""

    AXIOMS = "axioms"
    DERIVATIONS = "derivations"
    MODULES = "modules"
    COHOMOLOGY = "cohomology"
    VERTEX = "vertex"


class VertexCheck(StrEnum):
    """Checks of the vertex suite."""

    HALF_SKEW = "half-skew"
    HALF_COMMUTATOR = "half-comm"
    TH1 = "th1"
    NOVIKOV = "novikov"


@dataclass(frozen=True)
class RunContext:
    """Resolved algebra and coefficient module of a run."""

    config: RunConfig
    spec: AlgebraSpec
    module: ModuleSpec

    @classmethod
    def from_config(cls, config: RunConfig) -> RunContext:
        """Resolve presets and spec files."""
        spec = (
            load_algebra_spec(config.spec_path)
            if config.spec_path
            else AlgebraSpec.from_preset(config.preset)
        )
        module = (
            load_module_spec(config.module_spec_path)
            if config.module_spec_path
            else parse_coefficients(config.coefficients)
        )
        return cls(config, spec, module)

    @property
    def is_block(self) -> bool:
        """Return whether the algebra is the Block type algebra itself."""
        return self.spec.preset is Preset.BLOCK

    @property
    def indices(self) -> tuple[int, ...]:
        """Return the generator indices up to the maximal index."""
        return self.spec.indices(self.config.max_index)

    @property
    def index_window(self) -> dict[str, int]:
        """Return the window of the per-tuple checks."""
        return {"max_index": self.config.max_index}


def _timed(stable: bool, function: Callable[[], CheckReport]) -> CheckReport:
    start = time.perf_counter()
    report = function()
    if stable:
        return report
    return replace(report, timing=round(time.perf_counter() - start, 3))


def axioms_suite(context: RunContext) -> list[Callable[[], CheckReport]]:
    """Return the skew-symmetry and Jacobi checks."""
    spec, indices = context.spec, context.indices
    return [
        lambda: CheckReport.merge(
            "skew-symmetry",
            (check_skew(spec, i, j) for i in indices for j in indices),
            window=context.index_window,
        ),
        lambda: CheckReport.merge(
            "jacobi",
            (check_jacobi(spec, i, j, k) for i in indices for j in indices for k in indices),
            window=context.index_window,
        ),
    ]


def derivations_suite(context: RunContext) -> list[Callable[[], CheckReport]]:
    """Return the derivation quotient computation."""

    def derivations() -> CheckReport:
        problem = DerivationWindowProblem(context.spec, context.config.window, context.config.degree)
        expected = None if context.spec.preset is Preset.CUSTOM else {"quotient_dim": 0}
        return CheckReport.from_dimensions(
            "derivations",
            derivation_dims(problem),
            expected=expected,
            window=problem.window_report(),
            reference=None if expected is None else "every conformal derivation is inner",
        )

    return [derivations]


def _rank1(context: RunContext) -> CheckReport:
    config = context.config
    window = {"N": max(config.window, 1), "D": config.degree}
    if context.spec.preset not in (Preset.BLOCK, Preset.BLOCK_CENTRAL):
        return CheckReport.skipped(
            "rank1-classification",
            f"rank one classification is stated for the Block type algebra, not {context.spec.preset}",
            window=window,
        )
    classification = classify_rank1_window(context.spec, window["N"], window["D"])
    details: dict[str, list[str]] = {
        "specialization": [f"{name}={value}" for name, value in classification.specialization.items()]
    }
    if classification.solutions:
        details["solutions"] = [
            "; ".join(f"g{k} = {g}" for k, g in solution.items()) for solution in classification.solutions
        ]
    return CheckReport.from_dimensions(
        "rank1-classification",
        {
            "solutions": len(classification.solutions),
            "specialized_solutions": classification.specialized_dimension or 0,
        },
        expected={"solutions": 0, "specialized_solutions": 0},
        window=window,
        reference=(
            "free nontrivial rank one modules are the Virasoro modules M(delta, alpha) "
            "with J_i acting trivially for i >= 1"
        ),
        details=details,
    )


def modules_suite(context: RunContext) -> list[Callable[[], CheckReport]]:
    """Return the module axiom check and the rank one classification."""
    spec, module, indices = context.spec, context.module, context.indices
    return [
        lambda: CheckReport.merge(
            f"module-axiom {module.describe()}",
            (check_module_axioms(spec, module, i, j) for i in indices for j in indices),
            window=context.index_window,
        ),
        lambda: _rank1(context),
    ]


def expected_cohomology(context: RunContext, q: int, *, reduced: bool) -> tuple[int | None, str | None]:
    """Return the expected cohomology dimension and the statement it reproduces."""
    if not context.is_block:
        return None, None
    module = context.module
    if module.preset is ModulePreset.TRIVIAL:
        if reduced:
            return {0: 1, 1: 0, 2: 1}.get(q), "reduced cohomology with trivial coefficients is 1 in degrees 0 and 2"
        return {0: 1, 1: 0, 2: 0}.get(q), "basic cohomology with trivial coefficients is 1 in degree 0 only"
    if not reduced:
        return None, None
    if module.preset is ModulePreset.C_A and module.bindings.get(SHIFT):
        return 0, "reduced cohomology with coefficients in C_a vanishes for a != 0"
    if module.preset is ModulePreset.M and module.bindings.get(ALPHA) and DELTA in module.bindings:
        return 0, "reduced cohomology with coefficients in M(delta, alpha) vanishes for alpha != 0"
    return None, None


def _dimensions(context: RunContext, q: int) -> CheckReport:
    config = context.config
    params = TruncationParams(config.window, config.degree, q)
    kind = "reduced" if config.reduced else "basic"
    name = f"cohomology {kind} {context.module.describe()} q={q}"
    if context.module.symbolic_parameters:
        return CheckReport.skipped(
            name,
            "dimensions need numeric parameters",
            window=params.report(),
            convention=WINDOW_CONVENTION,
        )
    dims = cohomology_dims(context.spec, context.module, params, reduced=config.reduced)
    expected, reference = expected_cohomology(context, q, reduced=config.reduced)
    return CheckReport.from_dimensions(
        name,
        dims.as_dict(),
        expected=None if expected is None else {"h_dim": expected},
        window=params.report(),
        reference=reference,
        convention=WINDOW_CONVENTION,
    )


def _random_cochains(context: RunContext, q: int, check: Callable[..., CheckReport], name: str) -> CheckReport:
    config = context.config
    reports = [
        check(
            context.spec,
            context.module,
            random_cochain(context.spec, context.module, q, config.window, config.degree, seed=seed),
        )
        for seed in RANDOM_SEEDS
    ]
    return CheckReport.merge(name, reports, window={"N": config.window, "D": config.degree, "q": q})


def _lambda_cubed(context: RunContext) -> CheckReport:
    config = context.config
    reduced = ReducedCochain(2, context.module, config.window, {(0, 0): var(lambda_var(1)) ** 3})
    cocycle = reduced_differential(context.spec, context.module, reduced)
    return CheckReport.from_dimensions(
        "lambda-cubed-class",
        {
            "reduced_cocycle": int(cocycle.is_zero),
            "coboundary": int(is_reduced_coboundary(context.spec, context.module, reduced, config.degree)),
        },
        expected={"reduced_cocycle": 1, "coboundary": 0},
        window={"N": config.window, "D": config.degree, "q": 2},
        reference="the class of gamma(J0, J0) = l^3 spans reduced H^2 with trivial coefficients",
    )


def cohomology_suite(context: RunContext) -> list[Callable[[], CheckReport]]:
    """Return the dimension computations and the complex property checks."""
    config = context.config
    if context.spec.has_center:
        return [
            lambda: CheckReport.skipped(
                "cohomology",
                "cochains over the centrally extended algebra are not supported",
                window={"N": config.window, "D": config.degree, "q": config.q},
            )
        ]
    checks: list[Callable[[], CheckReport]] = [
        lambda q=q: _dimensions(context, q) for q in range(config.q + 1)
    ]
    property_degrees = range(min(config.q, PROPERTY_DEGREE_LIMIT) + 1)
    checks.extend(
        lambda q=q: _random_cochains(context, q, d_squared_check, "d-squared") for q in property_degrees
    )
    if context.module.preset is not ModulePreset.CUSTOM:
        checks.extend(
            lambda q=q: _random_cochains(context, q, homotopy_check, "homotopy")
            for q in property_degrees
            if q >= 1
        )
    if (
        context.is_block
        and config.reduced
        and config.q >= PROPERTY_DEGREE_LIMIT
        and context.module.preset is ModulePreset.TRIVIAL
    ):
        checks.append(lambda: _lambda_cubed(context))
    return checks


def vertex_suite(context: RunContext) -> list[Callable[[], CheckReport]]:
    """Return the vertex Lie, vertex Poisson and Novikov checks."""
    spec, indices, window = context.spec, context.indices, context.index_window
    selected = (
        set(VertexCheck) if context.config.check is None else {VertexCheck(context.config.check)}
    )
    pairs = [(i, j) for i in indices for j in indices]
    triples = [(i, j, k) for i in indices for j in indices for k in indices]
    checks: list[Callable[[], CheckReport]] = []
    if VertexCheck.HALF_SKEW in selected:
        checks.append(
            lambda: CheckReport.merge(
                "half-skew", (check_half_skew(spec, i, j) for i, j in pairs), window=window
            )
        )
    if VertexCheck.HALF_COMMUTATOR in selected:
        checks.append(
            lambda: CheckReport.merge(
                "half-commutator", (check_half_commutator(spec, *triple) for triple in triples), window=window
            )
        )
    if VertexCheck.TH1 in selected:
        structure = PreVertexPoissonStructure(spec)
        checks.append(
            lambda: CheckReport.merge(
                "th1", (check_th1_condition(structure, *triple) for triple in triples), window=window
            )
        )
        if context.is_block:
            checks.append(
                lambda: CheckReport.from_residuals(
                    "th1-left-term",
                    (
                        (str(triple), th1_left_term(structure, *triple) - expected_th1_left_term(*triple))
                        for triple in triples
                    ),
                    window=window,
                )
            )
    if VertexCheck.NOVIKOV in selected:
        if context.is_block:
            checks.append(
                lambda: CheckReport.merge(
                    "novikov", (check_novikov_axioms(*triple) for triple in triples), window=window
                )
            )
            checks.append(
                lambda: CheckReport.merge(
                    "gelfand-dorfman", (check_gelfand_dorfman(spec, i, j) for i, j in pairs), window=window
                )
            )
        else:
            checks.append(
                lambda: CheckReport.skipped(
                    "novikov", "the Novikov product describes the Block type algebra only", window=window
                )
            )
    return checks


SUITES: dict[Suite, Callable[[RunContext], list[Callable[[], CheckReport]]]] = {
    Suite.AXIOMS: axioms_suite,
    Suite.DERIVATIONS: derivations_suite,
    Suite.MODULES: modules_suite,
    Suite.COHOMOLOGY: cohomology_suite,
    Suite.VERTEX: vertex_suite,
}

VERIFY_ALL = "verify-all"


def run_suite(context: RunContext, suite: Suite) -> SuiteReport:
    """Run the checks of one suite in order."""
    _LOGGER.debug("Running suite %s", suite)
    checks = [_timed(context.config.stable, check) for check in SUITES[suite](context)]
    return SuiteReport.from_checks(str(suite), checks)


def run(config: RunConfig) -> Report:
    """Run the command of a configuration; configuration errors propagate."""
    context = RunContext.from_config(config)
    suites = list(Suite) if config.command == VERIFY_ALL else [Suite(config.command)]
    if config.command == VERIFY_ALL:
        context = replace(context, config=replace(config, check=None))
    return Report.from_suites(config.command, [run_suite(context, suite) for suite in suites])
