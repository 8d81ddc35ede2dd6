"""eps -> 0 limits by Richardson extrapolation with an estimated order.

A quantity Q(eps) is sampled on a geometric schedule ``eps_k = eps0 * r**k``.
Assuming ``Q(eps) ~ Q0 + C eps**p``, consecutive differences shrink by
``r**p``, which gives the order

    p = ln((Q_k - Q_{k-1}) / (Q_{k+1} - Q_k)) / ln(1/r),

averaged over the last few reliable triplets, and the extrapolant

    R_k = Q_{k+1} + (Q_{k+1} - Q_k) / (r**-p - 1).

Differences smaller than a multiple of the sampling noise (quadrature error
plus rounding) are not used for either step.

Pairings usually behave like ``Q0 + C1 eps + C2 eps**2 + ...``; the averaged
order then carries an O(eps) bias and the extrapolants keep drifting.  When
that drift is itself a clean geometric sequence well above the noise, the
same elimination is applied once more to the extrapolants, with its own
estimated order, and kept only if it narrows the gap between the last two
extrapolants.  Pure power laws never trigger this second pass.
"""

import math
from dataclasses import dataclass, field

from .errors import NoisyConvergence

__all__ = ["EpsSchedule", "PairingTrace", "extrapolate", "extrapolate_values"]

EPMACH = 2.220446049250313e-16
# a difference is usable when it exceeds this multiple of its noise
SIGNIFICANCE = 16.0
# number of trailing triplets averaged for the order estimate
TAIL = 3


@dataclass(frozen=True)
class EpsSchedule:
    eps0: float = 0.1
    ratio: float = 0.5
    count: int = 13

    def __post_init__(self):
        if not (0.0 < self.ratio < 1.0):
            raise ValueError(f"ratio must lie in (0, 1), got {self.ratio!r}")
        if isinstance(self.count, bool) or int(self.count) != self.count or self.count < 4:
            raise ValueError(f"count must be an integer >= 4, got {self.count!r}")
        object.__setattr__(self, "count", int(self.count))
        if not (0.0 < self.eps0 < math.pi / 4):
            raise ValueError(f"eps0 must lie in (0, pi/4), got {self.eps0!r}")
        if not self.eps()[-1] > 0.0:
            raise ValueError("schedule underflows to eps = 0")

    def eps(self):
        return [self.eps0 * self.ratio**k for k in range(self.count)]

    def to_dict(self):
        return {"eps0": self.eps0, "ratio": self.ratio, "count": self.count}


@dataclass(frozen=True)
class PairingTrace:
    """Samples of Q(eps) and their extrapolated eps -> 0 limit.

    ``status`` is one of ``ok``, ``stationary`` (no difference rises above
    the noise, limit is the last sample), ``noisy`` (differences change sign
    in the tail), ``divergent``, ``insufficient`` (too few usable
    differences) or ``quadrature`` (a sample ran out of intervals).
    """

    schedule: EpsSchedule
    values: tuple  # ((eps, value, quad_error), ...) with eps decreasing
    limit: float
    limit_error: float
    estimated_order: float
    converged: bool
    status: str = "ok"
    extrapolants: tuple = field(default=())

    def raise_for_status(self):
        if self.status == "noisy":
            raise NoisyConvergence(
                "differences change sign in the tail; quadrature tolerance is too loose for the requested tol"
            )
        return self

    def to_dict(self):
        return {
            "schedule": self.schedule.to_dict(),
            "values": [list(v) for v in self.values],
            "limit": self.limit,
            "limit_error": self.limit_error,
            "estimated_order": self.estimated_order,
            "converged": self.converged,
            "status": self.status,
        }


def _sample(q, eps):
    out = q(eps)
    if hasattr(out, "value"):
        # a rounding-limited sample still carries an honest error bar
        ok = getattr(out, "converged", True) or getattr(out, "rounding_limited", False)
        return float(out.value), float(out.error_estimate), bool(ok)
    if isinstance(out, tuple):
        return float(out[0]), float(out[1]), True
    return float(out), 0.0, True


def extrapolate(q, schedule=EpsSchedule(), tol=1e-8):
    """Sample Q over the schedule and extrapolate to eps -> 0.

    ``q(eps)`` may return a float, a ``(value, error)`` pair, or an object
    with ``value`` / ``error_estimate`` / ``converged`` attributes (such as a
    QuadratureResult).  Returns a :class:`PairingTrace`; non-convergence is
    reported in the trace, not raised.
    """
    eps = schedule.eps()
    samples = [_sample(q, e) for e in eps]
    trace = extrapolate_values(
        eps, [s[0] for s in samples], [s[1] for s in samples], schedule.ratio, tol, schedule
    )
    if not all(s[2] for s in samples):
        return _replace(trace, converged=False, status="quadrature")
    return trace


def _replace(trace, **changes):
    kw = {f: getattr(trace, f) for f in trace.__dataclass_fields__}
    kw.update(changes)
    return PairingTrace(**kw)


def _eliminate(Q, noise, ratio):
    """One Richardson pass; each extrapolant uses the order of its own triplet.

    Returns (status, order, extrapolants, their noise, index of the last
    usable difference).  ``order`` is the mean over the last TAIL triplets.
    Status is ``ok``, ``stationary``, ``insufficient``, ``noisy`` or
    ``divergent``.
    """
    n = len(Q)
    lr = math.log(1.0 / ratio)
    d = [Q[k + 1] - Q[k] for k in range(n - 1)]
    dn = [noise[k] + noise[k + 1] for k in range(n - 1)]
    sig = [abs(d[k]) > SIGNIFICANCE * dn[k] for k in range(n - 1)]
    if not any(sig):
        return "stationary", 0.0, [], [], None
    triplets = [j for j in range(1, n - 1) if sig[j - 1] and sig[j]]
    if not triplets:
        return "insufficient", 0.0, [], [], max(i for i in range(n - 1) if sig[i])
    tail = triplets[-TAIL:]
    if any(d[j - 1] / d[j] <= 0.0 for j in tail):
        return "noisy", 0.0, [], [], tail[-1]
    order = math.fsum(math.log(d[j - 1] / d[j]) for j in tail) / len(tail) / lr
    if order <= 0.0:
        return "divergent", order, [], [], n - 2
    # a contiguous run of triplets ending at the last one, cut where the
    # differences stop shrinking (pre-asymptotic start of the schedule)
    run = [triplets[-1]]
    while run[0] - 1 in triplets and d[run[0] - 2] / d[run[0] - 1] > 1.0:
        run.insert(0, run[0] - 1)
    if d[run[-1] - 1] / d[run[-1]] <= 1.0:
        return "divergent", order, [], [], n - 2
    extr, enoise = [], []
    for j in run:
        p = math.log(d[j - 1] / d[j]) / lr
        g = ratio**-p
        c = 1.0 / (g - 1.0)
        # noise in the local order moves c by |dc/dp| * dp
        dp = (dn[j - 1] / abs(d[j - 1]) + dn[j] / abs(d[j])) / lr
        dc = g * lr / (g - 1.0) ** 2 * dp
        extr.append(Q[j + 1] + c * d[j])
        enoise.append((1.0 + c) * noise[j + 1] + c * noise[j] + dc * abs(d[j]))
    return "ok", order, extr, enoise, triplets[-1]


def extrapolate_values(eps, values, errors, ratio, tol=1e-8, schedule=None):
    """Core of :func:`extrapolate` on already collected samples."""
    n = len(values)
    if schedule is None:
        schedule = EpsSchedule(eps[0], ratio, n)
    Q = [float(v) for v in values]
    noise = [float(e) + 4.0 * EPMACH * abs(v) for v, e in zip(Q, errors)]
    table = tuple((float(e), v, float(err)) for e, v, err in zip(eps, Q, errors))

    def trace(limit, err, order, converged, status, extr=()):
        return PairingTrace(schedule, table, limit, err, order, converged, status, tuple(extr))

    status, order, extr, enoise, k = _eliminate(Q, noise, ratio)
    if status == "stationary":
        spread = max(abs(v - Q[-1]) for v in Q[-4:])
        err = spread + max(noise[-4:])
        return trace(Q[-1], err, 0.0, spread <= tol, "stationary")
    if status != "ok":
        gap = abs(Q[k + 1] - Q[k]) if k is not None else 0.0
        return trace(Q[-1], gap + noise[-1], order, False, status)

    drift = max((abs(Q[j] - Q[k + 1]) for j in range(k + 1, n)), default=0.0)
    limit = extr[-1]
    gap = abs(extr[-1] - extr[-2]) if len(extr) > 1 else abs(Q[k + 1] - Q[k])
    err = gap + enoise[-1] + drift + 4.0 * EPMACH * abs(limit)
    # the extrapolants themselves still trend when Q carries a second power
    # of eps; a second pass removes it if that trend is clean and the pass
    # actually tightens the tail
    if len(extr) >= 4:
        status2, _, extr2, enoise2, _ = _eliminate(extr, enoise, ratio)
        if status2 == "ok" and len(extr2) >= 2:
            gap2 = abs(extr2[-1] - extr2[-2])
            if gap2 < gap:
                limit = extr2[-1]
                err = gap2 + enoise2[-1] + drift + 4.0 * EPMACH * abs(limit)
                return trace(limit, err, order, gap2 <= tol, "ok", extr2)
    return trace(limit, err, order, gap <= tol, "ok", extr)
