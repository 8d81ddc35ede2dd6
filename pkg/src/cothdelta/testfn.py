"""Smooth, rapidly decaying test functions with analytic derivatives.

Four kinds are built in::

    gaussian / shifted_gaussian   exp(-u**2)
    hermite_gaussian              H_n(u) exp(-u**2)       (physicists' H_n)
    bump                          exp(1 - 1/(1 - u**2)),  |u| < 1

with ``u = (x - center) / width``.  Gaussians and the bump peak at 1, so a
delta-sifting check reads off phi(0) directly.

Text form, as used on the command line::

    gaussian:mu=0,sigma=1
    bump:mu=0,sigma=2
    hermite:mu=0,sigma=1,n=2
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial import hermite as H

from . import _backend
from ._purepy import BUMP, DERIV, GAUSS, HERMITE, VALUE
from .errors import InvalidTestFunction

__all__ = [
    "Kind",
    "TestFunction",
    "gaussian",
    "shifted_gaussian",
    "hermite_gaussian",
    "bump",
    "evaluate",
    "evaluate_deriv",
    "envelope",
    "decay_radius",
    "parse",
]

# smallest width accepted; keeps (x - mu)/width finite for |x| <= 1e3
MIN_WIDTH = 1e-150


class Kind(str, Enum):
    GAUSSIAN = "gaussian"
    SHIFTED_GAUSSIAN = "shifted_gaussian"
    HERMITE_GAUSSIAN = "hermite_gaussian"
    BUMP = "bump"


_KIND_CODE = {
    Kind.GAUSSIAN: GAUSS,
    Kind.SHIFTED_GAUSSIAN: GAUSS,
    Kind.HERMITE_GAUSSIAN: HERMITE,
    Kind.BUMP: BUMP,
}

_ALIASES = {
    "gaussian": Kind.GAUSSIAN,
    "gauss": Kind.GAUSSIAN,
    "shifted_gaussian": Kind.SHIFTED_GAUSSIAN,
    "shifted": Kind.SHIFTED_GAUSSIAN,
    "hermite": Kind.HERMITE_GAUSSIAN,
    "hermite_gaussian": Kind.HERMITE_GAUSSIAN,
    "bump": Kind.BUMP,
}


@dataclass(frozen=True)
class TestFunction:
    """An immutable test function; see the module docstring for the kinds."""

    __test__ = False  # not a pytest class

    kind: Kind
    center: float = 0.0
    width: float = 1.0
    degree: int = 0

    def __post_init__(self):
        try:
            kind = Kind(self.kind)
        except ValueError:
            raise InvalidTestFunction(f"unknown test-function kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        center = float(self.center)
        width = float(self.width)
        if not math.isfinite(center):
            raise InvalidTestFunction(f"center must be finite, got {self.center!r}")
        if not (math.isfinite(width) and width >= MIN_WIDTH):
            raise InvalidTestFunction(f"width must be a finite value >= {MIN_WIDTH:g}, got {self.width!r}")
        if isinstance(self.degree, bool) or int(self.degree) != self.degree or self.degree < 0:
            raise InvalidTestFunction(f"degree must be a nonnegative integer, got {self.degree!r}")
        degree = int(self.degree)
        if kind is not Kind.HERMITE_GAUSSIAN and degree != 0:
            raise InvalidTestFunction(f"degree applies to hermite_gaussian only, got {degree} for {kind.value}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "width", width)
        object.__setattr__(self, "degree", degree)

    def __call__(self, x):
        return evaluate(self, x)

    def deriv(self, x):
        return evaluate_deriv(self, x)

    @property
    def kernel_args(self):
        """(kind code, center, width, degree) as consumed by the kernels."""
        return _KIND_CODE[self.kind], self.center, self.width, self.degree

    @property
    def at_origin(self):
        return evaluate(self, 0.0)

    def breakpoints(self):
        """Points where quadrature should split: center and center +- width."""
        return (self.center - self.width, self.center, self.center + self.width)

    def spec(self):
        """Canonical text form, parseable by :func:`parse`."""
        name = {
            Kind.GAUSSIAN: "gaussian",
            Kind.SHIFTED_GAUSSIAN: "shifted_gaussian",
            Kind.HERMITE_GAUSSIAN: "hermite",
            Kind.BUMP: "bump",
        }[self.kind]
        text = f"{name}:mu={self.center!r},sigma={self.width!r}"
        if self.kind is Kind.HERMITE_GAUSSIAN:
            text += f",n={self.degree}"
        return text

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "center": self.center,
            "width": self.width,
            "degree": self.degree,
            "spec": self.spec(),
        }


def gaussian(mu=0.0, sigma=1.0):
    return TestFunction(Kind.GAUSSIAN, mu, sigma)


def shifted_gaussian(mu, sigma=1.0):
    return TestFunction(Kind.SHIFTED_GAUSSIAN, mu, sigma)


def hermite_gaussian(mu=0.0, sigma=1.0, n=0):
    return TestFunction(Kind.HERMITE_GAUSSIAN, mu, sigma, n)


def bump(mu=0.0, sigma=1.0):
    return TestFunction(Kind.BUMP, mu, sigma)


def evaluate(phi, x):
    """phi(x); exactly 0 outside the support of a bump."""
    kind, mu, sigma, n = phi.kernel_args
    return _backend.kernels.testfn(kind, mu, sigma, n, VALUE, float(x))


def evaluate_deriv(phi, x):
    """Analytic phi'(x)."""
    kind, mu, sigma, n = phi.kernel_args
    return _backend.kernels.testfn(kind, mu, sigma, n, DERIV, float(x))


def _abs_poly(degree):
    # |coefficients| of H_degree in the monomial basis
    c = np.zeros(degree + 1)
    c[degree] = 1.0
    return np.abs(H.herm2poly(c))


def _envelope_u(phi, u):
    """Upper bound for max(|phi|, |phi'|) at scaled distance u >= 0."""
    g = math.exp(-u * u)
    n = phi.degree if phi.kind is Kind.HERMITE_GAUSSIAN else 0
    p0 = float(np.polyval(_abs_poly(n)[::-1], u))
    p1 = float(np.polyval(_abs_poly(n + 1)[::-1], u)) / phi.width
    return max(p0, p1) * g


def envelope(phi, x):
    """Analytic envelope: |phi(x)| <= envelope(phi, x) for every x."""
    u = abs(float(x) - phi.center) / phi.width
    if phi.kind is Kind.BUMP:
        return 1.0 if u < 1.0 else 0.0
    g = math.exp(-u * u)
    n = phi.degree if phi.kind is Kind.HERMITE_GAUSSIAN else 0
    return float(np.polyval(_abs_poly(n)[::-1], u)) * g


def decay_radius(phi, atol):
    """Distance R from the center beyond which |phi| and |phi'| stay below atol.

    Exact (``R = width``) for the bump.  For the Gaussian kinds the bound
    ``sum_k |h_k| u**k * exp(-u**2)`` on both phi and phi' is solved by
    bisection; past ``u0 = sqrt((n + 2) / 2)`` it is decreasing, so every
    ``u > R / width`` also satisfies it.
    """
    if not (0.0 < atol < 1.0):
        raise ValueError(f"atol must lie in (0, 1), got {atol!r}")
    if phi.kind is Kind.BUMP:
        return phi.width
    n = phi.degree if phi.kind is Kind.HERMITE_GAUSSIAN else 0
    lo = math.sqrt((n + 2) / 2.0)
    if _envelope_u(phi, lo) < atol:
        return lo * phi.width
    hi = 2.0 * lo
    while _envelope_u(phi, hi) >= atol:
        lo, hi = hi, 2.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _envelope_u(phi, mid) < atol:
            hi = mid
        else:
            lo = mid
    return hi * phi.width


_KEYS = {"mu": "center", "center": "center", "sigma": "width", "width": "width", "n": "degree", "degree": "degree"}


def parse(text):
    """Parse ``kind:key=value,...`` into a :class:`TestFunction`."""
    text = text.strip()
    name, _, rest = text.partition(":")
    kind = _ALIASES.get(name.strip().lower())
    if kind is None:
        raise InvalidTestFunction(f"unknown test-function kind in {text!r}")
    params = {}
    if rest.strip():
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            key = key.strip().lower()
            if not sep or key not in _KEYS:
                raise InvalidTestFunction(f"bad parameter {item!r} in {text!r}")
            field = _KEYS[key]
            if field in params:
                raise InvalidTestFunction(f"duplicate parameter {key!r} in {text!r}")
            try:
                if field == "degree":
                    params[field] = int(value)
                else:
                    params[field] = float(value)
            except ValueError:
                raise InvalidTestFunction(f"bad value {value!r} for {key!r} in {text!r}") from None
    return TestFunction(kind, **params)
