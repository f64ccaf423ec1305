"""Material-point simulation and verification of plastic-metric flow rules."""

from .errors import (
    CpflowError,
    InconsistentDeformation,
    NoConvergence,
    NotPositiveDefinite,
    ParseError,
    SingularMatrix,
    ValidationError,
    ZeroDeviator,
)
from .materials import ENERGIES, MaterialParams, StressBundle, stress_bundle
from .flow_rules import (
    CONSISTENT_MODELS,
    MODEL_IDS,
    MODEL_NOTES,
    FlowEvaluation,
    evaluate,
    nonconvexity_witness,
    positive_witness,
    yield_measures_report,
)
from .integrate import (
    PlasticState,
    StepControls,
    Trajectory,
    make_state,
    multiplier,
    simulate,
    step,
)
from .loading import (
    LoadingProgram,
    biaxial_stretch,
    piecewise_table,
    relaxation,
    simple_shear,
    stretch_then_shear,
    uniaxial_stretch,
)
from .verify import (
    THRESHOLDS,
    CheckReport,
    check_consistency,
    check_deficiencies,
    check_equivalence,
    check_stress_identities,
    observed_orders,
    run_suites,
)
from .config import ScenarioConfig, demo_config, parse_config, parse_config_file, serialize_config
from .cli import main, run_command

__version__ = "0.1.0"

__all__ = [
    "CpflowError",
    "InconsistentDeformation",
    "NoConvergence",
    "NotPositiveDefinite",
    "ParseError",
    "SingularMatrix",
    "ValidationError",
    "ZeroDeviator",
    "ENERGIES",
    "MaterialParams",
    "StressBundle",
    "stress_bundle",
    "CONSISTENT_MODELS",
    "MODEL_IDS",
    "MODEL_NOTES",
    "FlowEvaluation",
    "evaluate",
    "nonconvexity_witness",
    "positive_witness",
    "yield_measures_report",
    "PlasticState",
    "StepControls",
    "Trajectory",
    "make_state",
    "multiplier",
    "simulate",
    "step",
    "LoadingProgram",
    "biaxial_stretch",
    "piecewise_table",
    "relaxation",
    "simple_shear",
    "stretch_then_shear",
    "uniaxial_stretch",
    "THRESHOLDS",
    "CheckReport",
    "check_consistency",
    "check_deficiencies",
    "check_equivalence",
    "check_stress_identities",
    "observed_orders",
    "run_suites",
    "ScenarioConfig",
    "demo_config",
    "parse_config",
    "parse_config_file",
    "serialize_config",
    "main",
    "run_command",
    "__version__",
]
