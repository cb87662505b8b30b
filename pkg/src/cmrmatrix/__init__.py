"""Classical r-matrices of Calogero-Moser models with non-elliptic potentials.

Lax matrices, the q-dependent r-matrix family, the gauge potentials that
flatten it, the rational-case gauge matrix and the resulting constant
solution of the classical Yang-Baxter equation.
"""
from .algebra import (
    Root,
    basis_element,
    bracket_action,
    cybe_residual,
    swap_factors,
    tensor_product,
)
from .frobenius import (
    expansion_matrix,
    frobenius_basis,
    frobenius_inverse_check,
    lambda_functional,
    principal_nilpotent,
)
from .kernels import BACKEND
from .lax import (
    PhasePoint,
    Trajectory,
    build_lax,
    hamiltonian,
    integrate_flow,
    lax_poisson_tensor,
    random_phase_point,
    spectral_drift,
)
from .potentials import PotentialKind, SingularityError, potential_values
from .rmatrix import (
    CartanMap,
    RMatrixConfig,
    build_dynamical_R,
    build_gauge_potential,
    build_phi,
    constant_R,
    curvature_residual,
    extend_simple_C,
    gauge_condition_residual,
    gauge_transform_R,
    integrate_gauge,
    phi_gauge_check,
    rmatrix_residual,
)

__version__ = "0.1.0"
