import math
import random

import pytest

from reference_values import ACCEPTANCE_PHIS, REF
from cothdelta import analysis as an
from cothdelta import quadrature as q
from cothdelta.errors import DivergentPairing
from cothdelta.families import FamilyId, LimitFnId
from cothdelta.limits import EpsSchedule, extrapolate_values
from cothdelta.quadrature import QuadratureResult
from cothdelta.testfn import bump, gaussian, hermite_gaussian, parse, shifted_gaussian

S = EpsSchedule()


def test_dg_gaussian_sifts_to_two():
    t = an.pair("dg_eps", gaussian(0, 1))
    assert t.converged
    assert abs(t.limit - 2) <= 1e-8


def test_dg_shifted_gaussian():
    t = an.pair(FamilyId.DG_EPS, gaussian(5, 1))
    assert abs(t.limit - 2 * math.exp(-25)) <= 1e-8


def test_odd_family_against_even_phi():
    t = an.pair("coth_eps", gaussian(0, 1))
    assert abs(t.limit) <= 1e-9


def test_df_bump_cross_route():
    phi = bump(0, 3)
    t = an.pair("df_eps", phi)
    assert abs(t.limit - (REF["bump:mu=0,sigma=3"]["pv"] - 2)) <= 1e-6


def test_finite_part_gaussian_is_pv_minus_delta():
    fp = an.finite_part_pairing(gaussian(0, 1))
    ref = REF["gaussian:mu=0,sigma=1"]["pv"] - 2
    assert abs(fp.limit - ref) <= 1e-7
    # -csch^2 (phi - phi(0)) >= 0 for a peak-1 Gaussian, so the zero-area part is positive
    assert fp.limit > 0


def test_finite_part_away_from_origin():
    phi = gaussian(10, 1)
    fp = an.finite_part_pairing(phi)
    direct = q.integrate_product(LimitFnId.NEG_CSCH2, phi, 2, 18)
    assert abs(fp.limit - direct.value) <= 1e-9
    assert abs(fp.limit - REF["gaussian:mu=10,sigma=1"]["pv"]) <= 1e-9


@pytest.mark.parametrize("key", list(ACCEPTANCE_PHIS) + ["gaussian:mu=10,sigma=1", "bump:mu=8,sigma=2"])
def test_pv_oracle_against_frozen(key):
    r = an.pv_oracle(parse(key))
    assert r.converged
    assert abs(r.value - REF[key]["pv"]) <= max(2 * r.error_estimate, 1e-12 * abs(REF[key]["pv"]))
    inv = an.pv_oracle(parse(key), weight=LimitFnId.PV_INV)
    assert abs(inv.value - REF[key]["pv_inv"]) <= max(2 * inv.error_estimate, 1e-12 * abs(REF[key]["pv_inv"]))


def test_pv_oracle_regular_case():
    # support away from 0: -int coth phi' = int -csch^2 phi by parts
    phi = bump(10, 2)
    r = an.pv_oracle(phi)
    direct = q.integrate_product(LimitFnId.NEG_CSCH2, phi, 8, 12)
    assert abs(r.value - direct.value) <= 1e-14


def test_pv_oracle_even_phi_is_plain_integral():
    phi = gaussian(0, 0.7)
    r = an.pv_oracle(phi)
    half = q.integrate_interval(lambda x: math.cosh(x) / math.sinh(x) * phi.deriv(x), 0.0, 12.0)
    assert abs(r.value + 2 * half.value) <= 1e-12


PHIS = [
    gaussian(0, 1), gaussian(0.4, 0.6), gaussian(-1.2, 2),
    shifted_gaussian(3, 0.5), shifted_gaussian(-2, 1), shifted_gaussian(1, 0.3),
    hermite_gaussian(0, 1, 2), hermite_gaussian(0.5, 1.5, 3), hermite_gaussian(-0.3, 0.8, 4),
    bump(0, 3), bump(0.5, 1), bump(-1, 2.5),
]


@pytest.mark.parametrize("phi", PHIS, ids=lambda p: p.spec())
def test_three_routes_agree(phi):
    r = an.verify_identity(phi)
    assert r.verdict and r.converged
    assert max(r.residuals) <= 1e-6
    assert r.delta_term == 2 * phi.at_origin
    assert abs(r.delta_pairing - r.delta_term) <= 1e-7
    assert r.route_decomposition == r.finite_part + r.delta_pairing


def test_verdict_follows_tolerance():
    r = an.verify_identity(gaussian(0, 1), tol=1e-14)
    assert not r.verdict
    assert r.max_residual_tolerance == 1e-14


def test_delta_sifting_random_gaussians():
    rng = random.Random(1)
    for _ in range(20):
        phi = gaussian(rng.uniform(-5, 5), rng.uniform(0.3, 3))
        t = an.pair("dg_eps", phi)
        assert abs(t.limit - 2 * phi.at_origin) <= 1e-7, phi


def test_linearity_post_hoc():
    p1, p2 = gaussian(0, 1), hermite_gaussian(0.2, 1.1, 2)
    a, b = 1.5, -0.75
    for fam in ("dcoth_eps", "df_eps", "dg_eps"):
        t1, t2 = an.pair(fam, p1), an.pair(fam, p2)
        eps = [v[0] for v in t1.values]
        vals = [a * u[1] + b * v[1] for u, v in zip(t1.values, t2.values)]
        errs = [abs(a) * u[2] + abs(b) * v[2] for u, v in zip(t1.values, t2.values)]
        comb = extrapolate_values(eps, vals, errs, S.ratio)
        bar = comb.limit_error + abs(a) * t1.limit_error + abs(b) * t2.limit_error
        assert abs(comb.limit - (a * t1.limit + b * t2.limit)) <= bar


@pytest.mark.parametrize("eps", S.eps())
def test_area_constraints(eps):
    f = q.integrate_product(FamilyId.DF_EPS, None, -50, 50, eps=eps, mode="unit")
    g = q.integrate_product(FamilyId.DG_EPS, None, -50, 50, eps=eps, mode="unit")
    assert abs(f.value) <= 1e-10
    assert abs(g.value - 2) <= 1e-10


@pytest.mark.parametrize("fam,expected", [("coth_eps", 2), ("g_eps", 2), ("f_eps", 0), ("p_eps", 0), ("diff_eps", 2)])
def test_delta_weights(fam, expected):
    r = an.delta_weight(fam)
    assert r.converged
    assert abs(r.net_change - expected) <= 1e-10
    assert r.delta_weight == r.net_change - r.wing_area_convention
    assert r.wing_area_convention == 0.0 and r.location == 0.0


def test_convention_consistency():
    c, p, d = (an.delta_weight(f).delta_weight for f in ("coth_eps", "p_eps", "diff_eps"))
    assert abs((c - p) - d) <= 1e-12


def test_delta_weight_rejects():
    with pytest.raises(ValueError):
        an.delta_weight("dg_eps")
    with pytest.raises(ValueError):
        an.delta_weight("coth_eps", x_far=10)


def test_pv_contrast():
    for key in ACCEPTANCE_PHIS:
        t = an.pair("dp_eps", parse(key))
        assert abs(t.limit - REF[key]["pv_inv"]) <= 1e-6
    assert an.delta_weight("p_eps").delta_weight == pytest.approx(0, abs=1e-10)


@pytest.mark.parametrize("key", list(ACCEPTANCE_PHIS) + ["bump:mu=8,sigma=2"])
def test_difference_check(key):
    r = an.difference_check(parse(key))
    assert r.verdict and r.converged
    assert abs(r.route_family - REF[key]["smooth"]) <= 1e-6
    assert abs(r.route_smooth - REF[key]["smooth"]) <= 1e-10


def test_difference_check_odd_phi():
    r = an.difference_check(hermite_gaussian(0, 1, 1))
    assert abs(r.route_family) <= 1e-9
    assert abs(r.route_smooth) <= 1e-14
    assert r.delta_term == 0.0


@pytest.mark.parametrize("fam", ["dcoth_eps", "df_eps", "dg_eps", "dp_eps", "ddiff_eps"])
def test_monotone_tails(fam):
    t = an.pair(fam, gaussian(0, 1))
    dist = [abs(v[1] - t.limit) for v in t.values[-4:]]
    slack = 2 * t.limit_error
    assert all(b <= a + slack for a, b in zip(dist, dist[1:])), dist


def test_divergent_pairing(monkeypatch):
    monkeypatch.setattr(an, "integrate_product", lambda *a, eps, **k: QuadratureResult(1 / eps, 0.0, 1, True))
    with pytest.raises(DivergentPairing):
        an.pair("dg_eps", gaussian(0, 1))


def test_support_radius():
    assert an.support_radius(gaussian(0, 1)) == 50.0
    assert an.support_radius(gaussian(60, 1)) > 60
    assert an.support_radius(bump(0, 80)) == 80.0


def test_reports_serialize():
    r = an.verify_identity(gaussian(0, 1))
    d = r.to_dict()
    assert d["phi"]["kind"] == "gaussian" and len(d["residuals"]) == 3
    assert an.delta_weight("coth_eps").to_dict()["family"] == "coth_eps"
    assert an.difference_check(gaussian(0, 1)).to_dict()["verdict"] is True
