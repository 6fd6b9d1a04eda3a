"""Gaussian cubature from elements of finite order in compact simple Lie groups."""

from .approx import (
    CharacterExpansion,
    expansion_coefficients,
    optimality_residual_check,
    truncated_approximation,
)
from .cubature import (
    CubatureRule,
    PolynomialInX,
    build_rule,
    cubature_integrate,
    dominant_weights_up_to,
    gram_matrix,
    grid_quadrature_oracle,
    omega_cloud,
    separation_check,
)
from .lattice import DualPoint, count_f_m, dual_point, enumerate_efo, strict_ad_order
from .orbitfn import (
    character,
    conjugate_value,
    k_function,
    s_function,
    s_rho_product,
    steinberg_jacobian,
)
from .rootsys import (
    LieFamily,
    OrbitGuardError,
    RootSystem,
    build_root_system,
    conjugation_permutation,
    positive_roots,
    signed_weyl_orbit,
)

__version__ = "0.1.0"
