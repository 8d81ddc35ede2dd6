"""Regularised coth families and the distributional identity

    coth'(x) = -Pf csch^2(x) + 2 delta(x)

checked numerically: closed-form eps-families, adaptive quadrature with a
principal-value mode, eps -> 0 extrapolation and three independent routes
to the same pairing.
"""

from . import _backend
from .analysis import (
    DeltaReport,
    DifferenceReport,
    IdentityReport,
    delta_weight,
    difference_check,
    finite_part_pairing,
    pair,
    pv_oracle,
    verify_identity,
)
from .errors import (
    CothDeltaError,
    DivergentPairing,
    InvalidEpsilon,
    InvalidTestFunction,
    MaxIntervalsExceeded,
    NoisyConvergence,
    NonCancelingSingularity,
    SingularPoint,
)
from .families import CATALOG, FamilyId, LimitFnId, decomposition_residual, eval_family, eval_limit
from .limits import EpsSchedule, PairingTrace, extrapolate
from .quadrature import QuadConfig, QuadratureResult, integrate_line, integrate_product, integrate_pv
from .testfn import TestFunction, bump, gaussian, hermite_gaussian, parse, shifted_gaussian

__version__ = "0.1.0"


def backend():
    """Name of the active kernel backend, ``"compiled"`` or ``"python"``."""
    return _backend.name


__all__ = [
    "CATALOG",
    "CothDeltaError",
    "DeltaReport",
    "DifferenceReport",
    "DivergentPairing",
    "EpsSchedule",
    "FamilyId",
    "IdentityReport",
    "InvalidEpsilon",
    "InvalidTestFunction",
    "LimitFnId",
    "MaxIntervalsExceeded",
    "NoisyConvergence",
    "NonCancelingSingularity",
    "PairingTrace",
    "QuadConfig",
    "QuadratureResult",
    "SingularPoint",
    "TestFunction",
    "backend",
    "bump",
    "decomposition_residual",
    "delta_weight",
    "difference_check",
    "eval_family",
    "eval_limit",
    "extrapolate",
    "finite_part_pairing",
    "gaussian",
    "hermite_gaussian",
    "integrate_line",
    "integrate_product",
    "integrate_pv",
    "pair",
    "parse",
    "pv_oracle",
    "shifted_gaussian",
    "verify_identity",
]
