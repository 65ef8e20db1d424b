"""Expected verification and obfuscation utility on finite state spaces."""

__version__ = "0.1.0"

from .axioms import (
    AxiomReport,
    are_comonotonic,
    check_biseparable_grid,
    check_comonotonic_independence,
    check_critical_event_modularity,
    check_supermodularity,
    classify_event,
    run_axiom_suite,
)
from .decision import (
    Act,
    Scenario,
    UtilitySpec,
    binary_weight,
    certainty_equivalent,
    evaluate_binary,
    expected_utility,
    model_utility,
    model_values,
    obfuscation_utility,
    preference_average,
    verification_utility,
)
from .errors import NotVerificationCapacity, PreconditionError, SearchExhausted, ValidationError
from .fileio import bundled_ccr, load_capacity, load_scenario, scenario_from_json, scenario_to_json
from .identification import (
    IdentificationResult,
    critical_family,
    identify,
    induced_capacity,
    is_max_increasing,
    is_min_increasing,
    recover_structure,
    same_preferences,
    verification_capacity,
    within_model_class,
)
from .lattice import EventFamily, StateSpace, close_under_intersection, close_under_union, is_pi_system_with_support
from .setfunc import (
    MobiusVector,
    SetFunction,
    choquet_integral,
    classify_modularity,
    dual_capacity,
    mobius_transform,
    zeta_transform,
)
from .welfare import (
    LossReport,
    compare_risk_aversion,
    compare_verifiability,
    find_indeterminacy_witnesses,
    find_vo_loss_witnesses,
    transparency_loss,
    welfare_loss,
)


__all__ = [
    "__version__",
    "AxiomReport",
    "are_comonotonic",
    "check_biseparable_grid",
    "check_comonotonic_independence",
    "check_critical_event_modularity",
    "check_supermodularity",
    "classify_event",
    "run_axiom_suite",
    "Act",
    "Scenario",
    "UtilitySpec",
    "binary_weight",
    "certainty_equivalent",
    "evaluate_binary",
    "expected_utility",
    "model_utility",
    "model_values",
    "obfuscation_utility",
    "preference_average",
    "verification_utility",
    "NotVerificationCapacity",
    "PreconditionError",
    "SearchExhausted",
    "ValidationError",
    "bundled_ccr",
    "load_capacity",
    "load_scenario",
    "scenario_from_json",
    "scenario_to_json",
    "IdentificationResult",
    "critical_family",
    "identify",
    "induced_capacity",
    "is_max_increasing",
    "is_min_increasing",
    "recover_structure",
    "same_preferences",
    "verification_capacity",
    "within_model_class",
    "EventFamily",
    "StateSpace",
    "close_under_intersection",
    "close_under_union",
    "is_pi_system_with_support",
    "MobiusVector",
    "SetFunction",
    "choquet_integral",
    "classify_modularity",
    "dual_capacity",
    "mobius_transform",
    "zeta_transform",
    "LossReport",
    "compare_risk_aversion",
    "compare_verifiability",
    "find_indeterminacy_witnesses",
    "find_vo_loss_witnesses",
    "transparency_loss",
    "welfare_loss",
]
