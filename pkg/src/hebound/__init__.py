"""Lower bounds for the first Dirichlet p-Laplacian eigenvalue.

The bound comes from a Hardy inequality whose weight is singular both
at the origin and at the boundary of the ball and carries a logarithmic
sharpening; every constructive ingredient (radial Poisson solution,
first-order ODE inequality, the integral Hardy inequality itself) is
checkable against independent numerical oracles, and a shooting solver
provides a reference eigenvalue to certify the ordering.

Hot kernels (grid evaluation of the Hardy weight, the shooting loop)
run on a compiled extension when available, with a pure Python fallback
selected at import; see hebound.backend.
"""

from . import backend
from .eigen import (
    BoundResult,
    ComparisonReport,
    EigenRefResult,
    OptimizerError,
    ShootingError,
    bound_for_ball,
    compare_bounds,
    faber_krahn_bound,
    min_kernel_over_radius,
    reference_eigenvalue_ball,
)
from .hardy import (
    TrialFunction,
    check_hardy_convex,
    check_hardy_linear,
    default_trials,
    field_energy,
    gradient_energy,
    kernel_energy,
    pointwise_divergence_margin,
    relative_gradient_energy,
    sweep_checks,
)
from .kernelmath import (
    ProblemParams,
    ValidationError,
    b_threshold,
    classical_bound,
    eigen_1d_closed_form,
    hardy_kernel,
    log_supersolution,
    log_supersolution_deriv,
    ode_forcing,
    poisson_source,
    radial_profile,
    radial_profile_deriv,
    supersolution_residual,
    validate,
)
from .poisson import (
    RadialSolution,
    check_source_admissible,
    ode_residual,
    solve_radial,
    wrap_solution,
)
from .quadrature import (
    QuadratureBudgetError,
    QuadratureError,
    QuadResult,
    ball_volume,
    integrate,
    sphere_area,
)

__version__ = "0.1.0"

backend_name = backend.NAME
