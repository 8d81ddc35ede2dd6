"""Distributional checks built from families, quadrature and limits.

Three routes to the pairing of coth' with a test function phi:

* direct         lim <dcoth_eps, phi>
* decomposition  lim <dF_eps, phi> + lim <dG_eps, phi>
* PV oracle      -PV integral of coth(x) phi'(x)   (integration by parts, no eps)

The finite part ``<-Pf csch^2, phi>`` is *defined* as lim <dF_eps, phi>,
the zero-area realisation of -csch^2; lim <dG_eps, phi> should come out as
2 phi(0).
"""

import math
from dataclasses import dataclass, field

from . import _backend
from . import _purepy as K
from .errors import DivergentPairing
from .families import (
    CATALOG,
    FamilyId,
    LimitFnId,
    check_eps,
    eval_family,
    eval_limit,
    family_id,
    limit_code,
)
from .limits import EpsSchedule, PairingTrace, extrapolate
from .quadrature import QuadConfig, QuadratureResult, integrate_product, integrate_pv
from .testfn import TestFunction, decay_radius

__all__ = [
    "DeltaReport",
    "IdentityReport",
    "DifferenceReport",
    "support_radius",
    "pair",
    "finite_part_pairing",
    "pv_oracle",
    "verify_identity",
    "delta_weight",
    "difference_check",
    "ANTIDERIVATIVES",
]

# minimum half-width of every pairing integral
MIN_RADIUS = 50.0
# test functions are cut where both phi and phi' drop below this
TAIL_ATOL = 1e-18
DEFAULT_X_FAR = 50.0
DEFAULT_ROUTE_TOL = 1e-6
DEFAULT_EXTRAP_TOL = 1e-8

ANTIDERIVATIVES = (
    FamilyId.COTH_EPS,
    FamilyId.G_EPS,
    FamilyId.F_EPS,
    FamilyId.P_EPS,
    FamilyId.DIFF_EPS,
)


def support_radius(phi):
    """Half-width R of the symmetric window [-R, R] used for phi's pairings."""
    return max(abs(phi.center) + decay_radius(phi, TAIL_ATOL), MIN_RADIUS)


def pair(family, phi, schedule=EpsSchedule(), cfg=QuadConfig(), tol=DEFAULT_EXTRAP_TOL):
    """Trace of <T_eps, phi> over the schedule with its eps -> 0 limit.

    Raises DivergentPairing if the samples grow without bound.
    """
    fam = family_id(family)
    R = support_radius(phi)

    def q(eps):
        return integrate_product(fam, phi, -R, R, cfg, eps=eps)

    trace = extrapolate(q, schedule, tol)
    if trace.status == "divergent":
        raise DivergentPairing(
            f"<{fam.value}, {phi.spec()}> grows as eps -> 0 (order {trace.estimated_order:.3g})"
        )
    return trace


def finite_part_pairing(phi, schedule=EpsSchedule(), cfg=QuadConfig(), tol=DEFAULT_EXTRAP_TOL):
    """<-Pf csch^2, phi>, defined as lim <dF_eps, phi>."""
    return pair(FamilyId.DF_EPS, phi, schedule, cfg, tol)


def pv_oracle(phi, cfg=QuadConfig(), weight=LimitFnId.COTH_CLASSICAL):
    """-PV integral of w(x) phi'(x); with w = coth this is <coth', phi> with no eps.

    ``weight`` may also be ``pv_inv`` (the 1/x contrast) or any other odd
    classical limit with a simple pole at the origin.
    """
    code = limit_code(weight)
    kind, mu, sigma, n = phi.kernel_args
    kern = _backend.kernels

    def g(x):
        return kern.limit(code, x) * kern.testfn(kind, mu, sigma, n, K.DERIV, x)

    R = abs(phi.center) + decay_radius(phi, TAIL_ATOL)
    res = integrate_pv(g, R, cfg, points=phi.breakpoints())
    return QuadratureResult(-res.value, res.error_estimate, res.intervals_used, res.converged)


@dataclass(frozen=True)
class IdentityReport:
    phi: TestFunction
    route_decomposition: float
    route_direct: float
    route_pv_oracle: float
    finite_part: float
    delta_pairing: float  # lim <dG_eps, phi>
    delta_term: float  # 2 phi(0)
    residuals: tuple  # |dec - direct|, |dec - pv|, |direct - pv|
    max_residual_tolerance: float
    verdict: bool
    converged: bool
    errors: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "phi": self.phi.to_dict(),
            "route_decomposition": self.route_decomposition,
            "route_direct": self.route_direct,
            "route_pv_oracle": self.route_pv_oracle,
            "finite_part": self.finite_part,
            "delta_pairing": self.delta_pairing,
            "delta_term": self.delta_term,
            "residuals": list(self.residuals),
            "max_residual_tolerance": self.max_residual_tolerance,
            "verdict": self.verdict,
            "converged": self.converged,
            "errors": dict(self.errors),
        }


def verify_identity(phi, schedule=EpsSchedule(), cfg=QuadConfig(), tol=DEFAULT_ROUTE_TOL,
                    extrap_tol=DEFAULT_EXTRAP_TOL):
    """Compare the direct, decomposition and PV routes for one test function."""
    df = pair(FamilyId.DF_EPS, phi, schedule, cfg, extrap_tol)
    dg = pair(FamilyId.DG_EPS, phi, schedule, cfg, extrap_tol)
    dc = pair(FamilyId.DCOTH_EPS, phi, schedule, cfg, extrap_tol)
    pv = pv_oracle(phi, cfg)
    dec = df.limit + dg.limit
    direct = dc.limit
    residuals = (abs(dec - direct), abs(dec - pv.value), abs(direct - pv.value))
    return IdentityReport(
        phi=phi,
        route_decomposition=dec,
        route_direct=direct,
        route_pv_oracle=pv.value,
        finite_part=df.limit,
        delta_pairing=dg.limit,
        delta_term=2.0 * phi.at_origin,
        residuals=residuals,
        max_residual_tolerance=tol,
        verdict=all(r <= tol for r in residuals),
        converged=df.converged and dg.converged and dc.converged and pv.converged,
        errors={
            "finite_part": df.limit_error,
            "delta_pairing": dg.limit_error,
            "route_direct": dc.limit_error,
            "route_pv_oracle": pv.error_estimate,
        },
    )


@dataclass(frozen=True)
class DeltaReport:
    """Delta weight of T' at the origin from the net change of T.

    ``net_change`` is the eps -> 0 limit of T_eps(X) - T_eps(-X) plus the
    classical tails beyond +-X, i.e. the change over the whole line.  Under
    the zero-area convention the classical part of T' carries no area, so
    all of it is delta weight.
    """

    family: FamilyId
    x_far: float
    net_change: float
    net_change_at_x_far: float
    tail_correction: float
    wing_area_convention: float
    delta_weight: float
    location: float
    limit_error: float
    converged: bool

    def to_dict(self):
        return {
            "family": self.family.value,
            "x_far": self.x_far,
            "net_change": self.net_change,
            "net_change_at_x_far": self.net_change_at_x_far,
            "tail_correction": self.tail_correction,
            "wing_area_convention": self.wing_area_convention,
            "delta_weight": self.delta_weight,
            "location": self.location,
            "limit_error": self.limit_error,
            "converged": self.converged,
        }


def delta_weight(family, x_far=DEFAULT_X_FAR, schedule=EpsSchedule(), tol=DEFAULT_EXTRAP_TOL):
    fam = family_id(family)
    if fam not in ANTIDERIVATIVES:
        raise ValueError(f"{fam.value} is not an antiderivative family; use one of "
                         + ", ".join(f.value for f in ANTIDERIVATIVES))
    x_far = float(x_far)
    if not (x_far >= 30.0 and math.isfinite(x_far)):
        raise ValueError(f"x_far must be >= 30, got {x_far!r}")
    for e in schedule.eps():
        check_eps(e)
    meta = CATALOG[fam]
    lim = meta.classical_limit
    at_inf = meta.limit_at_inf
    # classical T0 beyond +-X; T0 is odd for every antiderivative family
    tail = 2.0 * (at_inf - eval_limit(lim, x_far))

    raw = extrapolate(lambda e: eval_family(fam, x_far, e) - eval_family(fam, -x_far, e), schedule, tol)
    full = extrapolate(
        lambda e: (eval_family(fam, x_far, e) - eval_family(fam, -x_far, e)) + tail, schedule, tol
    )
    wing = 0.0
    return DeltaReport(
        family=fam,
        x_far=x_far,
        net_change=full.limit,
        net_change_at_x_far=raw.limit,
        tail_correction=tail,
        wing_area_convention=wing,
        delta_weight=full.limit - wing,
        location=0.0,
        limit_error=full.limit_error,
        converged=full.converged and raw.converged,
    )


@dataclass(frozen=True)
class DifferenceReport:
    """lim <ddiff_eps, phi> against direct quadrature of h' = -csch^2 + 1/x^2.

    ``bookkeeping`` re-derives the same number from the two finite parts,
    ``<-Pf csch^2, phi> - <-Pf x^-2, phi> + 2 phi(0)``: the smooth
    difference has no delta, the difference of distributions does.
    """

    phi: TestFunction
    route_family: float
    route_smooth: float
    finite_part_csch2: float
    finite_part_inv_sq: float
    delta_term: float
    bookkeeping: float
    residual: float
    bookkeeping_residual: float
    tolerance: float
    verdict: bool
    converged: bool

    def to_dict(self):
        return {
            "phi": self.phi.to_dict(),
            "route_family": self.route_family,
            "route_smooth": self.route_smooth,
            "finite_part_csch2": self.finite_part_csch2,
            "finite_part_inv_sq": self.finite_part_inv_sq,
            "delta_term": self.delta_term,
            "bookkeeping": self.bookkeeping,
            "residual": self.residual,
            "bookkeeping_residual": self.bookkeeping_residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "converged": self.converged,
        }


def difference_check(phi, schedule=EpsSchedule(), cfg=QuadConfig(), tol=DEFAULT_ROUTE_TOL,
                     extrap_tol=DEFAULT_EXTRAP_TOL):
    dd = pair(FamilyId.DDIFF_EPS, phi, schedule, cfg, extrap_tol)
    df = pair(FamilyId.DF_EPS, phi, schedule, cfg, extrap_tol)
    dp = pair(FamilyId.DP_EPS, phi, schedule, cfg, extrap_tol)
    R = support_radius(phi)
    smooth = integrate_product(LimitFnId.DHDIFF, phi, -R, R, cfg)
    delta = 2.0 * phi.at_origin
    book = df.limit - dp.limit + delta
    residual = abs(dd.limit - smooth.value)
    book_residual = abs(book - smooth.value)
    return DifferenceReport(
        phi=phi,
        route_family=dd.limit,
        route_smooth=smooth.value,
        finite_part_csch2=df.limit,
        finite_part_inv_sq=dp.limit,
        delta_term=delta,
        bookkeeping=book,
        residual=residual,
        bookkeeping_residual=book_residual,
        tolerance=tol,
        verdict=residual <= tol and book_residual <= tol,
        converged=dd.converged and df.converged and dp.converged and smooth.converged,
    )
