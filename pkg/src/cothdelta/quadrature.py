"""Adaptive quadrature on finite intervals and symmetric principal values.

The base rule is the 21-point Gauss-Kronrod pair with QUADPACK's error
heuristic and a rounding floor proportional to the integral of |f|.  Panels
are refined globally, worst first; ties go to the leftmost panel, so the
subdivision (and the result) is reproducible.

Two entry points take arbitrary Python callables (:func:`integrate_line`,
:func:`integrate_pv`).  :func:`integrate_product` handles the hot case, a
catalog weight times a test function, entirely inside the kernel backend.
"""

import math
from dataclasses import dataclass, field

from . import _backend
from . import _purepy
from .errors import MaxIntervalsExceeded, NonCancelingSingularity
from .families import FamilyId, LimitFnId, check_eps, family_code, limit_code

__all__ = [
    "QuadConfig",
    "QuadratureResult",
    "eps_breakpoints",
    "integrate_line",
    "integrate_interval",
    "integrate_pv",
    "integrate_product",
]


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-11
    rel_tol: float = 1e-10
    max_intervals: int = 10**6
    initial_breakpoints: tuple = field(default=())

    def __post_init__(self):
        if not (self.abs_tol > 0 and math.isfinite(self.abs_tol)):
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if not (self.rel_tol > 0 and math.isfinite(self.rel_tol)):
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol!r}")
        if isinstance(self.max_intervals, bool) or int(self.max_intervals) != self.max_intervals \
                or self.max_intervals < 1:
            raise ValueError(f"max_intervals must be a positive integer, got {self.max_intervals!r}")
        bps = tuple(float(b) for b in self.initial_breakpoints)
        if any(not math.isfinite(b) for b in bps) or any(b >= c for b, c in zip(bps, bps[1:])):
            raise ValueError("initial_breakpoints must be finite and strictly increasing")
        object.__setattr__(self, "initial_breakpoints", bps)
        object.__setattr__(self, "max_intervals", int(self.max_intervals))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    intervals_used: int
    converged: bool
    # stopped with budget left because the rounding floor exceeds the tolerance
    rounding_limited: bool = False

    def raise_for_status(self):
        if not self.converged:
            why = "rounding floor above tolerance" if self.rounding_limited else "no convergence"
            raise MaxIntervalsExceeded(
                f"{why} after {self.intervals_used} intervals "
                f"(value {self.value!r}, error estimate {self.error_estimate!r})"
            )
        return self

    def to_dict(self):
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "intervals_used": self.intervals_used,
            "converged": self.converged,
        }


def eps_breakpoints(eps):
    """Mandatory splits around the O(eps) peak of the derivative families."""
    return (-25 * eps, -5 * eps, -eps, 0.0, eps, 5 * eps, 25 * eps)


def _points(a, b, extra, cfg):
    inner = sorted({float(p) for p in extra if a < p < b})
    pts = [a] + inner + [b]
    if len(pts) - 1 > cfg.max_intervals:
        # the mandatory splits alone exceed the budget; nothing valid to return
        raise MaxIntervalsExceeded(
            f"{len(pts) - 1} mandatory panels exceed max_intervals = {cfg.max_intervals}"
        )
    return pts


def _result(raw, cfg):
    value, error, nint, converged = raw
    return QuadratureResult(value, error, nint, bool(converged), not converged and nint < cfg.max_intervals)


def integrate_interval(f, a, b, cfg=QuadConfig(), points=()):
    """Integral of a scalar callable over [a, b]."""
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise ValueError(f"need finite a < b, got [{a!r}, {b!r}]")
    pts = _points(a, b, tuple(points) + cfg.initial_breakpoints, cfg)
    return _result(_purepy.adapt(f, pts, cfg.abs_tol, cfg.rel_tol, cfg.max_intervals), cfg)


def integrate_line(f, support_radius, cfg=QuadConfig(), points=()):
    """Integral of f over [-R, R]; f must be negligible outside (caller's job)."""
    R = float(support_radius)
    if not (R > 0 and math.isfinite(R)):
        raise ValueError(f"support_radius must be positive, got {support_radius!r}")
    return integrate_interval(f, -R, R, cfg, points)


def integrate_pv(g, R, cfg=QuadConfig(), points=()):
    """Principal value of the integral of g over [-R, R], g with a simple pole at 0.

    Computed as the regular integral of ``g(x) + g(-x)`` over [0, R].  Below
    ``1e-6 R`` the paired sum is frozen at its value at that offset: it is
    even in x, so the substitution costs O(offset**3).
    """
    R = float(R)
    if not (R > 0 and math.isfinite(R)):
        raise ValueError(f"R must be positive, got {R!r}")
    offset = 1e-6 * R
    at_offset = g(offset) + g(-offset)

    # the odd part must cancel: |g(x) + g(-x)| cannot keep growing toward 0
    probes = [abs(g(R * t) + g(-R * t)) for t in (1e-3, 1e-4, 1e-5, 1e-6)]
    growing = all(b > a for a, b in zip(probes, probes[1:]))
    if growing and probes[-1] > 100.0 * max(probes[0], 1e-300):
        raise NonCancelingSingularity(
            f"g(x) + g(-x) grows from {probes[0]:.3g} to {probes[-1]:.3g} as x -> 0"
        )

    def paired(x):
        if x < offset:
            return at_offset
        return g(x) + g(-x)

    folded = [abs(float(p)) for p in tuple(points) + cfg.initial_breakpoints]
    pts = _points(0.0, R, folded + [offset], cfg)
    return _result(_purepy.adapt(paired, pts, cfg.abs_tol, cfg.rel_tol, cfg.max_intervals), cfg)


def _weight_code(weight):
    if weight is None:
        return _purepy.ONE, False
    if isinstance(weight, LimitFnId):
        return limit_code(weight), False
    if isinstance(weight, FamilyId):
        return family_code(weight), True
    name = str(weight).strip().lower()
    try:
        return family_code(name), True
    except ValueError:
        return limit_code(name), False


_MODES = {"value": _purepy.VALUE, "deriv": _purepy.DERIV, "unit": _purepy.UNIT}


def integrate_product(weight, phi, a, b, cfg=QuadConfig(), eps=None, mode="value", points=()):
    """Integral of weight(x[, eps]) * phi(x) over [a, b] inside the kernel backend.

    ``weight`` is a family (needs ``eps``), a classical limit, or None for 1.
    ``mode`` selects phi ("value"), phi' ("deriv") or the constant 1 ("unit",
    phi ignored).  Families get the peak breakpoints around 0 automatically.
    """
    code, needs_eps = _weight_code(weight)
    extra = list(points) + list(cfg.initial_breakpoints)
    if needs_eps:
        eps = check_eps(eps)
        extra += eps_breakpoints(eps)
    else:
        eps = 0.0
        if code != _purepy.ONE:
            # classical limits may be singular at 0; never sample it
            extra.append(0.0)
    m = _MODES[mode]
    if m == _purepy.UNIT or phi is None:
        kind, mu, sigma, n = _purepy.GAUSS, 0.0, 1.0, 0
        m = _purepy.UNIT
    else:
        kind, mu, sigma, n = phi.kernel_args
        extra += phi.breakpoints()
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise ValueError(f"need finite a < b, got [{a!r}, {b!r}]")
    pts = _points(a, b, extra, cfg)
    raw = _backend.kernels.integrate_product(
        code, eps, kind, mu, sigma, n, m, pts, cfg.abs_tol, cfg.rel_tol, cfg.max_intervals
    )
    return _result(raw, cfg)
