"""Reverse relative entropy of entanglement for bosonic Gaussian states.

Library layout:

* ``symplectic``   covariance matrices, Williamson form, Gibbs matrices
* ``entropies``    entropy and relative entropy in bits
* ``separability`` PPT criterion and the feasibility-based test
* ``channels``     one-mode channel catalog and quasi-Choi states
* ``normal_form``  two-mode normal forms and the reduced optimization
* ``solver``       interior-point solver for the convex program
* ``bounds``       channel error-exponent bounds, sweeps, reports
* ``analytic``     finite-dimensional reference formulas (test oracles)
* ``cli``          command-line interface
"""

from .analytic import (
    d_bin,
    fock_relative_entropy_thermal,
    isotropic_reverse_ree,
    tilted_binary_minimum,
)
from .bounds import (
    BoundReport,
    DEFAULT_R_SCHEDULE,
    bound_at,
    closed_form_bound,
    evaluate_grid,
    grid_channels,
    grid_rows_to_csv,
    n_sep,
    report_to_csv,
    report_to_json_obj,
    sweep_bound,
)
from .channels import (
    ChannelParams,
    GaussianChannel,
    build_channel,
    channel_from_json,
    channel_params_to_json,
    load_channel,
    quasi_choi,
)
from .entropies import bosonic_g, entropy, relative_entropy
from .errors import (
    DomainError,
    GaussreeError,
    NotFaithfulError,
    SolverError,
    ValidationError,
)
from .normal_form import (
    BorderPoint,
    NormalForm,
    ReducedResult,
    first_order_residuals,
    gibbs_normal_form,
    is_separable_two_mode,
    log2_z_normal_form,
    objective_bits,
    solve_reduced,
    twirl_to_normal_form,
)
from .separability import SeparabilityWitness, is_separable_feasibility
from .solver import (
    SolveResult,
    SolverConfig,
    fd_objective_gradient,
    objective_gradient,
    solve,
)
from .symplectic import (
    CovarianceMatrix,
    WilliamsonDecomposition,
    check_bona_fide,
    covariance_from_json,
    covariance_to_json,
    gibbs_matrix,
    load_covariance,
    loads_covariance,
    log2_Z,
    symplectic_form,
    symplectic_spectrum,
    williamson,
)

__version__ = "0.1.0"

__all__ = [
    "BorderPoint",
    "BoundReport",
    "ChannelParams",
    "CovarianceMatrix",
    "DEFAULT_R_SCHEDULE",
    "DomainError",
    "GaussianChannel",
    "GaussreeError",
    "NormalForm",
    "NotFaithfulError",
    "ReducedResult",
    "SeparabilityWitness",
    "SolveResult",
    "SolverConfig",
    "SolverError",
    "ValidationError",
    "WilliamsonDecomposition",
    "bosonic_g",
    "bound_at",
    "build_channel",
    "channel_from_json",
    "channel_params_to_json",
    "check_bona_fide",
    "closed_form_bound",
    "covariance_from_json",
    "covariance_to_json",
    "d_bin",
    "entropy",
    "evaluate_grid",
    "fd_objective_gradient",
    "first_order_residuals",
    "fock_relative_entropy_thermal",
    "gibbs_matrix",
    "gibbs_normal_form",
    "grid_channels",
    "grid_rows_to_csv",
    "is_separable_feasibility",
    "is_separable_two_mode",
    "isotropic_reverse_ree",
    "load_channel",
    "load_covariance",
    "loads_covariance",
    "log2_Z",
    "log2_z_normal_form",
    "n_sep",
    "objective_bits",
    "objective_gradient",
    "quasi_choi",
    "relative_entropy",
    "report_to_csv",
    "report_to_json_obj",
    "solve",
    "solve_reduced",
    "sweep_bound",
    "symplectic_form",
    "symplectic_spectrum",
    "tilted_binary_minimum",
    "twirl_to_normal_form",
    "williamson",
]
