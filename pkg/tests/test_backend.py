import math
import random

import pytest

from cothdelta import _backend, _purepy, analysis, backend
from cothdelta.families import FamilyId, LimitFnId, eval_family, eval_limit, family_code, limit_code
from cothdelta.testfn import bump, gaussian, hermite_gaussian

C = _backend._ckernels
needs_compiled = pytest.mark.skipif(C is None, reason="compiled kernels not built")

FAMILY_CODES = [family_code(f) for f in FamilyId]
LIMIT_CODES = [limit_code(l) for l in LimitFnId if l is not LimitFnId.ZERO]


@needs_compiled
def test_family_kernels_bit_identical():
    rng = random.Random(3)
    for i in range(50000):
        e = 10 ** rng.uniform(-8, math.log10(0.78))
        x = rng.choice((1, -1)) * 10 ** rng.uniform(-310, 308.2)
        if i % 3 == 0:
            x = rng.uniform(-30, 30)
        code = rng.choice(FAMILY_CODES)
        assert _purepy.family(code, x, e) == C.family(code, x, e), (code, x, e)
        lc = rng.choice(LIMIT_CODES)
        assert _purepy.limit(lc, x) == C.limit(lc, x), (lc, x)


@needs_compiled
def test_testfn_kernels_bit_identical():
    rng = random.Random(4)
    for _ in range(50000):
        kind, mode, n = rng.randrange(3), rng.randrange(3), rng.randrange(7)
        mu, s = rng.uniform(-3, 3), rng.uniform(0.2, 3)
        x = mu + rng.uniform(-8, 8) * s
        assert _purepy.testfn(kind, mu, s, n, mode, x) == C.testfn(kind, mu, s, n, mode, x)


@needs_compiled
@pytest.mark.parametrize("eps", [0.1, 1e-3, 2.44140625e-05])
@pytest.mark.parametrize("phi", [gaussian(0, 1), bump(0.5, 2), hermite_gaussian(-0.2, 0.7, 3)], ids=lambda p: p.spec())
def test_integrals_bit_identical(eps, phi):
    kind, mu, sigma, n = phi.kernel_args
    for wcode in FAMILY_CODES:
        pts = sorted({-50.0, 50.0, 0.0, eps, -eps, 5 * eps, -5 * eps, 25 * eps, -25 * eps} | set(phi.breakpoints()))
        args = (wcode, eps, kind, mu, sigma, n, 1, pts, 1e-11, 1e-10, 10**6)
        assert _purepy.integrate_product(*args) == C.integrate_product(*args)


@needs_compiled
def test_reports_identical_across_backends():
    out = {}
    for which in ("compiled", "python"):
        prev = _backend.name
        _backend.use(which)
        try:
            out[which] = analysis.verify_identity(hermite_gaussian(0, 1, 2)).to_dict()
        finally:
            _backend.use(prev)
    assert out["compiled"] == out["python"]


def test_public_api_on_each_backend(backend):
    assert _backend.name == backend
    assert eval_family("coth_eps", 0.0, 0.05) == 0.0
    assert eval_limit("dhdiff", 0.0) == pytest.approx(1 / 3, abs=1e-16)
    t = analysis.pair("dg_eps", gaussian(0, 1))
    assert abs(t.limit - 2) <= 1e-8


def test_use_rejects_unknown():
    with pytest.raises(ValueError):
        _backend.use("fortran")


def test_backend_reports_name():
    assert backend() in _backend.available()
    assert _backend.available()[-1] == "python"
