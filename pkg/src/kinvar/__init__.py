"""Dual-experiment kinetics toolkit.

Simulate mass-action reaction networks primed with pure starting substances,
evaluate the cross-experiment concentration ratios that stay constant in time,
and prove those invariants exactly in the Laplace domain.
"""

from .errors import (
    BalanceError,
    ConfigError,
    ConservationError,
    DegenerateExperimentError,
    DetailedBalanceError,
    IntegrationError,
    KinvarError,
    MultipleEquilibriaError,
    NetworkValidationError,
    NoReversiblePathError,
)
from .network import (
    Reaction,
    ReactionNetwork,
    Species,
    balance_network,
    butene_cycle,
    check_cycle_conditions,
    conservation_vector,
    first_order_network,
    load_network,
    make_network,
    mass_action_rhs,
    save_network,
    stoichiometric_matrix,
    validate_network,
)
from .trajectory import (
    DualExperiment,
    Trajectory,
    geometric_grid,
    linear_grid,
    write_trajectory_csv,
)
from .linear import (
    RateMatrix,
    build_rate_matrix,
    default_time_grid,
    dual_experiment,
    equilibrium_composition,
    simulate_linear,
)
from .closed_forms import (
    TwoStepEigenvalues,
    nonlinear_2A_B,
    nonlinear_2A_2B,
    single_reversible,
    three_cycle_laplace,
    two_step_concentrations,
    two_step_eigenvalues,
)
from .laplace import (
    Polynomial,
    RationalFunction,
    all_transfer_functions_forest,
    characteristic_polynomial,
    enumerate_forests,
    exact_balance,
    exact_cycle_violations,
    path_equilibrium_constant,
    prove_fixed_proportion,
    transfer_function_cofactor,
    transfer_function_forest,
)
from .integrate import (
    IntegratorConfig,
    dual_experiment_nonlinear,
    integrate,
)
from .invariants import (
    InvariantReport,
    InvariantSpec,
    evaluate_invariant,
    overshoot_scan,
    ratio_limit_at_zero,
    resolve_expected_K,
)
from ._kernels import NUMBA_ENABLED

__version__ = "0.1.0"

__all__ = [
    "BalanceError",
    "ConfigError",
    "ConservationError",
    "DegenerateExperimentError",
    "DetailedBalanceError",
    "DualExperiment",
    "IntegrationError",
    "IntegratorConfig",
    "InvariantReport",
    "InvariantSpec",
    "KinvarError",
    "MultipleEquilibriaError",
    "NUMBA_ENABLED",
    "NetworkValidationError",
    "NoReversiblePathError",
    "Polynomial",
    "RateMatrix",
    "RationalFunction",
    "Reaction",
    "ReactionNetwork",
    "Species",
    "Trajectory",
    "TwoStepEigenvalues",
    "all_transfer_functions_forest",
    "balance_network",
    "build_rate_matrix",
    "butene_cycle",
    "characteristic_polynomial",
    "check_cycle_conditions",
    "conservation_vector",
    "default_time_grid",
    "dual_experiment",
    "dual_experiment_nonlinear",
    "enumerate_forests",
    "equilibrium_composition",
    "evaluate_invariant",
    "exact_balance",
    "exact_cycle_violations",
    "first_order_network",
    "geometric_grid",
    "integrate",
    "linear_grid",
    "load_network",
    "make_network",
    "mass_action_rhs",
    "nonlinear_2A_2B",
    "nonlinear_2A_B",
    "overshoot_scan",
    "path_equilibrium_constant",
    "prove_fixed_proportion",
    "ratio_limit_at_zero",
    "resolve_expected_K",
    "save_network",
    "simulate_linear",
    "single_reversible",
    "stoichiometric_matrix",
    "three_cycle_laplace",
    "transfer_function_cofactor",
    "transfer_function_forest",
    "two_step_concentrations",
    "two_step_eigenvalues",
    "validate_network",
    "write_trajectory_csv",
]
