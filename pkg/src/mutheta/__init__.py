"""Exact Dieudonne-space, Hasse-invariant and theta-operator computations mod p."""

from .deformation import (
    DeformedHodge,
    KSMatrix,
    check_admissible,
    gauss_manin,
    hasse_family,
    ks_matrix,
    pole_order_audit,
    psi,
    universal_ao_deformation,
)
from .dieudonne import (
    DieudonneSpace,
    ao21,
    ao31,
    ao_space,
    direct_sum,
    g_sigma,
    g_sigma_bar,
    hyperbolic_mu_et,
    mu_ordinary,
    verify,
)
from .exactring import (
    OneForm,
    QuadExtField,
    SquareZeroRing,
    TruncWittRing,
    d,
    frobenius,
)
from .fjexp import (
    FJExpansion,
    HermIndex,
    cycle_report,
    gamma_act,
    hasse_expansion,
    hasse_mult,
    in_positive_cone,
    is_in_theta_kernel,
    multiply,
    theta,
    theta_iterate,
)
from .semilinear import TwistedMap, compose, frobenius_twist
from .weights import (
    DominantWeight,
    WeightTriple,
    dk_target,
    evaluate,
    iota,
    iota_dual,
    is_sum_symmetric,
    rho_lambda_expr,
    theta_weight_tag,
)

__version__ = "0.1.0"
