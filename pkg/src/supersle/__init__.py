"""Exact super-Virasoro, superspace and Ito-calculus checks for stochastic superconformal maps."""
from .grassmann import GrassmannAlgebra, GrassmannNumber, body, ginv, gmul, gpow, parity, soul
from .superspace import SuperFunction, SuperMap, check_superconformal, substitute, superD, superDalt
from .superalg import (AlgebraElement, Mode, SuperVirasoro, VermaModule, VermaState, act, bracket,
                       find_singular, gram_matrix, normal_order)
from .itocalc import ItoDifferential, ItoPoly, SdeSpec, expectation, ito_d, verify_solution
from .linkmaps import (WalkSpec, build_sde, drift_state, expected_state, martingale_check,
                       quotient_projection, verify_link)

__version__ = "0.1.0"
