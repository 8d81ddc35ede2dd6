"""Regularised families T(x, eps) and their pointwise eps -> 0 limits.

The catalog::

    coth_eps   sinh(2x) / (cosh(2x) - cos(2 eps))            = Re coth(x + i eps)
    g_eps      asin(cos(eps) sinh(x) / sqrt(sinh(x)**2 + sin(eps)**2)) / (pi/2 - eps)
    f_eps      coth_eps - g_eps
    p_eps      x / (x**2 + eps**2)                             = Re 1/(x + i eps)
    diff_eps   coth_eps - p_eps

and the x-derivative of each (``dcoth_eps``, ``dg_eps``, ...).  None of the
closed forms is evaluated literally: the kernels use rewrites that stay
finite for every finite x and keep full relative accuracy, e.g.
``cosh(2x) - cos(2 eps) = 2 (sinh(x)**2 + sin(eps)**2)`` and a Taylor
series of ``coth(z) - 1/z`` near ``z = x + i eps = 0``.
"""

import math
from dataclasses import dataclass
from enum import Enum

from . import _backend
from . import _purepy as K
from .errors import InvalidEpsilon, SingularPoint

__all__ = [
    "FamilyId",
    "LimitFnId",
    "FamilyMeta",
    "CATALOG",
    "EPS_MAX",
    "EPS_MIN",
    "check_eps",
    "eval_family",
    "eval_limit",
    "decomposition_residual",
    "limit_of",
    "meta",
    "family_id",
    "limit_id",
]

EPS_MAX = math.pi / 4
# below this sin(eps)**2 underflows and the even families overflow at x = 0
EPS_MIN = 1e-150


class FamilyId(str, Enum):
    COTH_EPS = "coth_eps"
    DCOTH_EPS = "dcoth_eps"
    F_EPS = "f_eps"
    G_EPS = "g_eps"
    DF_EPS = "df_eps"
    DG_EPS = "dg_eps"
    P_EPS = "p_eps"
    DP_EPS = "dp_eps"
    DIFF_EPS = "diff_eps"
    DDIFF_EPS = "ddiff_eps"


class LimitFnId(str, Enum):
    COTH_CLASSICAL = "coth_classical"
    NEG_CSCH2 = "neg_csch2"
    F0 = "f0"
    SIGN = "sign"
    PV_INV = "pv_inv"
    NEG_INV_SQ = "neg_inv_sq"
    HDIFF = "hdiff"
    DHDIFF = "dhdiff"
    ZERO = "zero"


@dataclass(frozen=True)
class FamilyMeta:
    parity: str  # "odd" | "even"
    net_change: float  # T(+inf) - T(-inf), the same for every eps
    classical_limit: LimitFnId
    derivative: "FamilyId | None" = None
    antiderivative: "FamilyId | None" = None
    limit_at_inf: float = 0.0  # classical_limit(+inf)


CATALOG = {
    FamilyId.COTH_EPS: FamilyMeta("odd", 2.0, LimitFnId.COTH_CLASSICAL, FamilyId.DCOTH_EPS, None, 1.0),
    FamilyId.F_EPS: FamilyMeta("odd", 0.0, LimitFnId.F0, FamilyId.DF_EPS, None, 0.0),
    FamilyId.G_EPS: FamilyMeta("odd", 2.0, LimitFnId.SIGN, FamilyId.DG_EPS, None, 1.0),
    FamilyId.P_EPS: FamilyMeta("odd", 0.0, LimitFnId.PV_INV, FamilyId.DP_EPS, None, 0.0),
    FamilyId.DIFF_EPS: FamilyMeta("odd", 2.0, LimitFnId.HDIFF, FamilyId.DDIFF_EPS, None, 1.0),
    FamilyId.DCOTH_EPS: FamilyMeta("even", 0.0, LimitFnId.NEG_CSCH2, None, FamilyId.COTH_EPS),
    FamilyId.DF_EPS: FamilyMeta("even", 0.0, LimitFnId.NEG_CSCH2, None, FamilyId.F_EPS),
    FamilyId.DG_EPS: FamilyMeta("even", 0.0, LimitFnId.ZERO, None, FamilyId.G_EPS),
    FamilyId.DP_EPS: FamilyMeta("even", 0.0, LimitFnId.NEG_INV_SQ, None, FamilyId.P_EPS),
    FamilyId.DDIFF_EPS: FamilyMeta("even", 0.0, LimitFnId.DHDIFF, None, FamilyId.DIFF_EPS),
}

_FAMILY_CODE = {
    FamilyId.COTH_EPS: K.COTH,
    FamilyId.DCOTH_EPS: K.DCOTH,
    FamilyId.F_EPS: K.F,
    FamilyId.G_EPS: K.G,
    FamilyId.DF_EPS: K.DF,
    FamilyId.DG_EPS: K.DG,
    FamilyId.P_EPS: K.P,
    FamilyId.DP_EPS: K.DP,
    FamilyId.DIFF_EPS: K.DIFF,
    FamilyId.DDIFF_EPS: K.DDIFF,
}

_LIMIT_CODE = {
    LimitFnId.COTH_CLASSICAL: K.L_COTH,
    LimitFnId.NEG_CSCH2: K.L_NEG_CSCH2,
    LimitFnId.F0: K.L_F0,
    LimitFnId.SIGN: K.L_SIGN,
    LimitFnId.PV_INV: K.L_PV_INV,
    LimitFnId.NEG_INV_SQ: K.L_NEG_INV_SQ,
    LimitFnId.HDIFF: K.L_HDIFF,
    LimitFnId.DHDIFF: K.L_DHDIFF,
}

LIMIT_PARITY = {
    LimitFnId.COTH_CLASSICAL: "odd",
    LimitFnId.NEG_CSCH2: "even",
    LimitFnId.F0: "odd",
    LimitFnId.SIGN: "odd",
    LimitFnId.PV_INV: "odd",
    LimitFnId.NEG_INV_SQ: "even",
    LimitFnId.HDIFF: "odd",
    LimitFnId.DHDIFF: "even",
    LimitFnId.ZERO: "even",
}

# finite at x = 0; the rest signal SingularPoint there
REGULAR_LIMITS = frozenset((LimitFnId.HDIFF, LimitFnId.DHDIFF, LimitFnId.ZERO))


def family_id(name):
    """Accept a FamilyId or its (case-insensitive) string name."""
    if isinstance(name, FamilyId):
        return name
    try:
        return FamilyId(str(name).strip().lower())
    except ValueError:
        raise ValueError(f"unknown family {name!r}") from None


def limit_id(name):
    if isinstance(name, LimitFnId):
        return name
    try:
        return LimitFnId(str(name).strip().lower())
    except ValueError:
        raise ValueError(f"unknown limit function {name!r}") from None


def family_code(name):
    return _FAMILY_CODE[family_id(name)]


def limit_code(name):
    lid = limit_id(name)
    if lid is LimitFnId.ZERO:
        raise ValueError("the zero limit has no kernel")
    return _LIMIT_CODE[lid]


def check_eps(eps):
    eps = float(eps)
    if not (EPS_MIN <= eps < EPS_MAX):
        raise InvalidEpsilon(f"eps must lie in [{EPS_MIN:g}, pi/4), got {eps!r}")
    return eps


def meta(name):
    return CATALOG[family_id(name)]


def limit_of(name):
    """Pointwise eps -> 0 limit of a family away from x = 0."""
    return CATALOG[family_id(name)].classical_limit


def eval_family(name, x, eps):
    """T(x, eps) for a catalog family.  Finite for every finite x."""
    eps = check_eps(eps)
    return _backend.kernels.family(family_code(name), float(x), eps)


def eval_limit(name, x):
    """Classical limit function at x; raises SingularPoint at x = 0 where undefined."""
    lid = limit_id(name)
    x = float(x)
    if lid is LimitFnId.ZERO:
        return 0.0
    if x == 0.0:
        if lid is LimitFnId.HDIFF:
            return 0.0
        if lid is LimitFnId.DHDIFF:
            return 1.0 / 3.0
        raise SingularPoint(f"{lid.value} is undefined at x = 0")
    return _backend.kernels.limit(_LIMIT_CODE[lid], x)


def decomposition_residual(x, eps):
    """coth_eps - F - G at (x, eps); zero up to rounding."""
    eps = check_eps(eps)
    k = _backend.kernels
    x = float(x)
    return k.family(K.COTH, x, eps) - k.family(K.F, x, eps) - k.family(K.G, x, eps)
