"""Exact Macdonald polynomials, their separated one-variable factors and the
integral operators that factorise them (n = 2, 3)."""

from .exact import LaurentPoly, NotSymmetricError, PoleError, RatFunc
from .weights import DominantWeight, SymmetricPoly, dominance_leq, weights_below
from .macdonald import MacdonaldOperator, apply_H, eigenvalues, macdonald_P, verify_commutators
from .separated import (
    ProductEigenfunction,
    SeparatedPoly,
    SeparationParams,
    chi_closed_forms,
    phi_at_tn,
    phi_numeric_definition,
    phi_via_chi,
    phi_via_definition,
    phi_via_lauricella,
    separation_residual,
    spectral_problem_check,
)
from .factorise import (
    AWParams,
    QuadratureConfig,
    apply_M_n3,
    apply_M_n3_inverse,
    apply_M_xi,
    apply_M_xi_inverse,
    aw_integral,
    gram_n2,
    integer_g_inverse,
    orthogonality_n2,
)

__version__ = "0.1.0"
