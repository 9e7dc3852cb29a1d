"""tropigait: max-plus linear algebra with a legged-locomotion gait layer.

The public surface re-exports the four library modules; the command-line
front end lives in ``tropigait.cli_tool``.
"""

from tropigait.errors import (
    AllEpsilonVector,
    AssumptionA1Violated,
    AssumptionA2Violated,
    BadExponent,
    BadIndex,
    BadQuantum,
    ConstraintViolation,
    DimensionMismatch,
    NegativePowerOfEpsilon,
    NonMonotoneTrajectory,
    NotIrreducible,
    NotNormalGait,
    NotPartition,
    NotSquare,
    ParseError,
    PositiveCircuit,
    RunningGaitWarning,
    TropigaitError,
    ValidationError,
)
from tropigait.maxplus_core import (
    DEFAULT_TOLERANCE,
    E,
    EPSILON,
    MaxPlusMatrix,
    MaxPlusScalar,
    is_epsilon,
    is_nilpotent,
    kleene_star,
    mat_oplus,
    mat_otimes,
    mat_power,
    mpow_scalar,
    oplus,
    otimes,
    overcomes,
    solve_affine,
    tolerance,
)
from tropigait.spectral_graph import (
    CouplingReport,
    CriticalGraphReport,
    PrecedenceGraph,
    coupling_params,
    critical_graph,
    eigenvector_from_critical,
    is_irreducible,
    max_cycle_mean,
    precedence_graph,
    verify_eigenpair,
)
from tropigait.gait_model import (
    Gait,
    GaitMatrices,
    GaitParams,
    StructuralBlocks,
    build_A0_A1,
    build_P_Q,
    check_assumptions,
    closed_form_eigenpair,
    closed_form_power,
    closed_form_system_matrix,
    enumerate_gaits,
    flat,
    gait_from_config,
    gait_to_config,
    is_normal,
    normalized,
    parse_gait_dsl,
    similarity_matrix,
    structural_blocks,
    system_matrix,
    validate_gait,
)
from tropigait.locomotion_sim import (
    Disturbance,
    EventState,
    LegSchedule,
    ScheduleReport,
    Segment,
    SimulationPlan,
    Trajectory,
    detect_steady_state,
    extract_schedule,
    simulate,
    step,
    verify_schedule,
)

__version__ = "1.0.0"
