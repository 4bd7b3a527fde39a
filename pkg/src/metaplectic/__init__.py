"""Matrix coefficients of the metaplectic cover of SL(2, R) and
non-vanishing certificates for their Poincare series."""

from .betamedian import MedianResult, median, median_approx, median_bounds
from .coefficients import (F_km_cartan, Weight, apply_n_plus, casimir_check,
                           cayley_transfer, chi, f_km, lift_F,
                           lift_F_iwasawa)
from .metgroup import (CartanCoords, HalfInt, IwasawaCoords, MetElement,
                       branch_sqrt, cartan_h, cayley, dilation, from_cartan,
                       from_iwasawa, half_power, identity, kappa,
                       to_cartan, to_iwasawa, translation)
from .nonvanishing import (Certificate, GridReport, certify, r_window,
                           threshold_N, threshold_bounds, threshold_close,
                           verify_grid)
from .poincare import (FULL_PREIMAGE, THETA_SECTION, CongruenceSpec,
                       PartialSum, enumerate_gamma, margin_demo,
                       partial_sum, theta, theta_multiplier)
from .quadrature import (BetaParams, ConvergenceError, QuadratureSpec,
                         beta_complete, disk_inner_product, haar_L1,
                         haar_L2_lift_identity, incomplete_beta,
                         regularized_incomplete_beta)

__version__ = "0.1.0"
