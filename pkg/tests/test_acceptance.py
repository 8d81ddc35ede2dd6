"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import math
import os
import random
import time

import pytest

import oracles
from reference_values import ACCEPTANCE_PHIS, REF
from cothdelta import analysis, cli, quadrature
from cothdelta.families import FamilyId, decomposition_residual, eval_family, eval_limit
from cothdelta.limits import EpsSchedule, extrapolate
from cothdelta.testfn import gaussian, parse

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")
PHIS = [parse(k) for k in ACCEPTANCE_PHIS]


@pytest.fixture
def report(request):
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(n, ok, detail):
        line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'}  {detail}"
        if tr is not None:
            tr.write_line("")
            tr.write_line(line)
        else:
            print(line)
        assert ok, line

    return emit


def test_criterion_1_three_routes(report):
    t0 = time.perf_counter()
    worst = 0.0
    for phi in PHIS:
        r = analysis.verify_identity(phi)
        worst = max(worst, *r.residuals)
    elapsed = time.perf_counter() - t0
    report(1, worst <= 1e-6 and elapsed < 60.0,
           f"max pairwise route residual {worst:.2e} (tol 1e-6), runtime {elapsed:.2f}s (limit 60s)")


def test_criterion_2_delta_weights(report):
    expected = {"coth_eps": 2.0, "g_eps": 2.0, "p_eps": 0.0, "f_eps": 0.0}
    worst = 0.0
    for fam, w in expected.items():
        r = analysis.delta_weight(fam, x_far=50.0)
        worst = max(worst, abs(r.net_change - w), abs(r.delta_weight - w))
    report(2, worst <= 1e-10, f"max |net change - expected| {worst:.2e} at X_far = 50 (tol 1e-10)")


def test_criterion_3_sifting(report):
    rng = random.Random(2024)
    worst = 0.0
    for _ in range(20):
        phi = gaussian(rng.uniform(-5, 5), rng.uniform(0.3, 3))
        t = analysis.pair(FamilyId.DG_EPS, phi)
        worst = max(worst, abs(t.limit - 2 * phi.at_origin))
    report(3, worst <= 1e-7, f"max |lim <dG_eps, phi> - 2 phi(0)| {worst:.2e} over 20 Gaussians (tol 1e-7)")


def test_criterion_4_area_constraints(report):
    worst_f = worst_g = 0.0
    for eps in EpsSchedule().eps():
        f = quadrature.integrate_product(FamilyId.DF_EPS, None, -50, 50, eps=eps, mode="unit")
        g = quadrature.integrate_product(FamilyId.DG_EPS, None, -50, 50, eps=eps, mode="unit")
        worst_f = max(worst_f, abs(f.value))
        worst_g = max(worst_g, abs(g.value - 2))
    report(4, max(worst_f, worst_g) <= 1e-10,
           f"max |int dF_eps| {worst_f:.2e}, max |int dG_eps - 2| {worst_g:.2e} over 13 eps (tol 1e-10)")


def test_criterion_5_decomposition_grid(report):
    n = 10_000
    xs = [-700.0 + 1400.0 * i / (n - 1) for i in range(n)]
    worst = 0.0
    nonfinite = 0
    for eps in (0.1, 0.01, 0.001):
        for x in xs:
            c = eval_family("coth_eps", x, eps)
            worst = max(worst, abs(decomposition_residual(x, eps)) / (1 + abs(c)))
            nonfinite += sum(not math.isfinite(eval_family(f, x, eps)) for f in FamilyId)
    report(5, worst <= 1e-12 and nonfinite == 0,
           f"max |coth_eps - F - G|/(1+|coth_eps|) {worst:.2e} on 1e4 points x 3 eps (tol 1e-12), "
           f"{nonfinite} non-finite values")


def test_criterion_6_pv_contrast(report):
    worst = 0.0
    for phi in PHIS:
        t = analysis.pair(FamilyId.DP_EPS, phi)
        R = analysis.support_radius(phi)
        brute, spread = oracles.excised_pv(lambda x: -phi.deriv(x) / x, R, points=(0.5, 1, 2, 4, 8))
        worst = max(worst, abs(t.limit - brute))
    dw = analysis.delta_weight("p_eps").delta_weight
    report(6, worst <= 1e-6 and abs(dw) <= 1e-10,
           f"max |lim <dP_eps, phi> - excised PV| {worst:.2e} (tol 1e-6), delta_weight(P_eps) {dw:.1e}")


def test_criterion_7_difference_check(report):
    worst = 0.0
    for phi in PHIS:
        r = analysis.difference_check(phi)
        worst = max(worst, r.residual)
    at0 = abs(eval_limit("dhdiff", 0.0) - 1 / 3)
    near0 = max(abs(eval_limit("dhdiff", x) - 1 / 3) for x in (1e-300, 1e-12, 1e-9, 1e-6))
    report(7, worst <= 1e-6 and at0 <= 1e-10 and near0 <= 1e-10,
           f"max |lim <ddiff_eps, phi> - int h' phi| {worst:.2e} (tol 1e-6), |h'(0) - 1/3| {at0:.1e}, "
           f"near 0 {near0:.1e} (tol 1e-10)")


def test_criterion_8_figures(report, capsys):
    same = []
    for which, name in ((1, "figure1_eps0.05.csv"), (2, "figure2_eps0.05.csv")):
        cli.main(["figure", "--which", str(which), "--eps", "0.05"])
        out = capsys.readouterr().out.encode()
        with open(os.path.join(GOLDEN, name), "rb") as fh:
            same.append(out == fh.read())
    rows = cli.figure_rows(2, 0.05, cli.parse_grid("-3:3:601"))
    peak = max(rows, key=lambda r: r[2])
    wings = all(r[2] < 0 for r in rows if abs(r[0]) >= 0.1)
    report(8, all(same) and peak[0] == 0.0 and peak[2] > 0 and wings,
           f"golden byte-identical {same}, Fig. 2 max {peak[2]:.4g} at x = {peak[0]:g}, negative wings {wings}")


def test_criterion_9_extrapolation(report):
    worst_l = worst_p = 0.0
    for p in (1, 2, 3):
        for L in (0.0, 1.0, -3.5, 1e3):
            for C in (1.0, -2.0, 0.3, 50.0):
                t = extrapolate(lambda e: L + C * e**p)
                worst_l = max(worst_l, abs(t.limit - L) / (1 + abs(L)))
                worst_p = max(worst_p, abs(t.estimated_order - p))
    report(9, worst_l <= 1e-12 and worst_p <= 0.05,
           f"max |limit - L|/(1+|L|) {worst_l:.2e} (tol 1e-12), max |order - p| {worst_p:.3f} (tol 0.05)")


def test_frozen_references_used_here_are_consistent():
    # criterion 6/7 cross-check against the 30-digit values
    for key in ACCEPTANCE_PHIS:
        t = analysis.pair(FamilyId.DP_EPS, parse(key))
        assert abs(t.limit - REF[key]["pv_inv"]) <= 1e-6
