"""Finite-dimensional quantum measurement simulator.

Measurements are value-labeled orthonormal bases; states are unit complex
vectors up to global phase. The package provides Born-rule predictions,
collapse and sampling, incompatibility demonstrations, a Monte-Carlo
sequential-measurement engine, a CLI and a live session service.
"""

from .exceptions import (
    ConvergenceError,
    DegenerateSpectrumError,
    DimensionError,
    DomainError,
    ImpossibleOutcomeError,
    ModeError,
    NotHermitianError,
    ScriptError,
    TableError,
    ZeroVectorError,
)
from .linalg import (
    CANON_TOL,
    NORM_TOL,
    ORTHO_TOL,
    EigenDecomposition,
    haar_random_state,
    hermitian_eigen,
    inner_product,
    is_unitary,
    normalize,
    squared_norm,
)
from .measurement import (
    HermitianOperator,
    Measurement,
    Outcome,
    OutcomeDistribution,
    are_compatible,
    build_operator,
    collapse,
    expectation,
    measurement_from_operator,
    predict,
    sample,
    transition_probability,
)
from .lab import (
    ConditionalTable,
    PhaseRetrievalProblem,
    PhaseSolution,
    ScanReport,
    SearchReport,
    classical_mixture_scan,
    conditional_table,
    fourier_basis,
    real_equal_modulus_search,
    retrieve_phases,
    spin_state,
    spin_transition,
    table_for_mub_pair,
)
from .simulator import (
    ExperimentScript,
    MeasurementEvent,
    RunReport,
    Scenario,
    classical_fit_check,
    order_effect,
    run,
)
from .scenarios import get_scenario, scenario_descriptors
from .session import SessionCore, replay

__version__ = "0.1.0"
