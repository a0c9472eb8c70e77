"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""

import math

import numpy as np
import pytest

from contract_lab import battery as B
from contract_lab import cli
from contract_lab.conditions import check_prop1, psi
from contract_lab.contract import Scenario, sigma_curvature, solve_concealed, solve_revealed
from contract_lab.distributions import Exponential, PointMass, Uniform, Weibull
from contract_lab.garbling import (
    check_garbling_zerocost,
    eps_derivative,
    grid_vgarb_prime_at_one,
    price_derivatives,
    solve_garbled,
    sweep_garbling,
)
from contract_lab.numerics import finite_difference, one_sided_difference
from contract_lab.restriction import check_quasiconvexity, revealed_gap, solve_restricted, sweep_restriction, v_const_derivative


@pytest.fixture
def verdict(capsys):
    def say(number: int, title: str, failures: list[str]) -> None:
        line = f"criterion {number} {'PASS' if not failures else 'FAIL'}: {title}"
        if failures:
            line += " | " + "; ".join(failures[:5])
        with capsys.disabled():
            print("\n" + line)
        assert not failures, line

    return say


def test_criterion_1_uniform_counterexample(verdict):
    s = Scenario(1.0, 0.5, Uniform(0.5, 1.5), Uniform(0.0, 1.0))
    con, rev = solve_concealed(s), solve_revealed(s)
    bad = []
    for name, got, want, tol in (
        ("p1*", rev.prices[1], 0.5, 1e-6),
        ("p0*", rev.prices[0], 0.75, 1e-6),
        ("p*", con.prices[0], 0.625, 1e-6),
        ("q_con", con.quantity, 0.375, 1e-8),
        ("q_rev", rev.quantity, 0.375, 1e-8),
        ("W_rev", rev.welfare, 0.234375, 1e-8),
        ("W_con", con.welfare, 0.2421875, 1e-8),
    ):
        if not abs(got - want) <= tol:
            bad.append(f"{name}={got!r} want {want}")
    if not rev.welfare < con.welfare:
        bad.append("W_rev >= W_con")
    verdict(1, "uniform counterexample prices, quantities and welfare", bad)


def test_criterion_2_prop1_exponential_threshold(verdict):
    bad = []
    if abs(psi(0.5) - 1.0 / 3.0) > 1e-12:
        bad.append(f"psi(1/2)={psi(0.5)!r}")
    for lam in (0.05, 0.1, 0.2, 0.3):
        s = Scenario(1.0, 0.5, Exponential(lam), PointMass(0.0))
        rep = check_prop1(s)
        gap = solve_concealed(s).agent_utility - solve_revealed(s).agent_utility
        if not rep.holds:
            bad.append(f"lambda0={lam}: checker fails")
        if not gap > 1e-8:
            bad.append(f"lambda0={lam}: V_con - V_rev = {gap!r}")
    for lam in (0.8, 1.0):
        if check_prop1(Scenario(1.0, 0.5, Exponential(lam), PointMass(0.0))).holds:
            bad.append(f"lambda0={lam}: checker holds")
    verdict(2, "Prop 1 threshold for exponential f0 with zero-cost f1", bad)


def test_criterion_3_zero_cost_garbling_universality(verdict):
    bad = []
    eps = np.linspace(0.0, 1.0, 201)
    step = eps[1] - eps[0]
    for lam in (0.05, 0.1, 0.5, 1.0, 5.0):
        s = Scenario(1.0, 0.5, Exponential(lam), PointMass(0.0))
        rep = check_garbling_zerocost(s)
        if not rep.holds:
            bad.append(f"lambda0={lam}: zero-cost check fails (margin {rep.margin!r})")
        p0 = rep.extras["p0_star"]
        if abs(2.0 - sigma_curvature(s.f0, p0) - 1.0 - math.exp(p0 / lam)) > 1e-8:
            bad.append(f"lambda0={lam}: 2 - sigma identity fails at p0*={p0!r}")
        # away from p0* the right side can reach e^20, so compare relatively there
        for p in np.linspace(0.01, 1.0, 25):
            lhs = 2.0 - sigma_curvature(s.f0, float(p))
            rhs = 1.0 + math.exp(float(p) / lam)
            if abs(lhs - rhs) > 1e-8 * abs(rhs):
                bad.append(f"lambda0={lam}: 2 - sigma at p={float(p):.4f} is {lhs!r} vs {rhs!r}")
                break
        vs = [pt.v_garb for pt in sweep_garbling(s, 0.5, eps, with_fd=False)]
        i = max(range(len(vs)), key=lambda k: (vs[k], -k))
        if not eps[i] <= 1.0 - step + 1e-12:
            bad.append(f"lambda0={lam}: argmax eps={eps[i]!r}")
    verdict(3, "zero-cost garbling condition for every exponential mean", bad)


def test_criterion_4_fig6(verdict):
    s = Scenario(1.0, 0.5, Exponential(0.5), Exponential(0.01))
    con, rev = solve_concealed(s), solve_revealed(s)
    bad = []
    if not rev.agent_utility < con.agent_utility:
        bad.append("V_rev >= V_con")
    garb = sweep_garbling(s, 0.5, np.linspace(0.0, 1.0, 201), with_fd=False)
    top = max(p.v_garb for p in garb) - con.agent_utility
    if not top > 0:
        bad.append(f"max V_garb - V_con = {top!r}")
    rest = sweep_restriction(s, 201)
    vr = max(p.v_const for p in rest)
    if abs(vr - max(con.agent_utility, rev.agent_utility)) > 1e-6:
        bad.append(f"max V_const = {vr!r}")
    for a, b in zip(garb, garb[1:]):
        if b.pi_garb < a.pi_garb - 1e-9:
            bad.append(f"Pi_garb drops at eps={b.eps}")
        if b.p0 < a.p0 - 1e-9 or b.p1 > a.p1 + 1e-9:
            bad.append(f"prices not monotone at eps={b.eps}")
    verdict(4, f"Fig 6 scenario (garbling margin {top:.6g})", bad)


def test_criterion_5_fig5_sign(verdict):
    lams = np.linspace(0.01, 1.0, 20)
    cells = grid_vgarb_prime_at_one(1.0, 0.5, lams, lams)
    bad = []
    checked = 0
    for c in cells:
        v = c.vgarb_prime_at_one
        if c.lambda0 == c.lambda1:
            if abs(v) > 1e-5:
                bad.append(f"diagonal ({c.lambda0:.3f}) slope {v!r}")
        elif min(c.lambda0, c.lambda1) <= 0.05:
            checked += 1
            if not v < 0:
                bad.append(f"({c.lambda0:.3f}, {c.lambda1:.3f}) slope {v!r}")
    if checked != 38:
        bad.append(f"expected 38 low-mean off-diagonal cells, saw {checked}")
    verdict(5, "garbling slope at eps=1 is negative when one mean is low", bad)


def test_criterion_6_derivative_battery(verdict):
    rng = np.random.default_rng(20240617)
    families = [Exponential(0.1), Exponential(0.7), Weibull(0.4, 0.6), Weibull(0.3, 2.0), Weibull(1.0, 1.3), Uniform(0.2, 1.1)]
    bad = []
    for _ in range(100):
        m = families[int(rng.integers(len(families)))]
        p = float(rng.uniform(0.01, 1.5))
        fd = finite_difference(m.agent_partial_value, p, 1e-6)
        if abs(fd - m.cdf(p)) > 1e-5:
            bad.append(f"V' at {m} p={p:.4f}: {fd!r} vs {m.cdf(p)!r}")
    s = Scenario(1.0, 0.5, Exponential(0.5), Exponential(0.01))
    for e in (0.25, 0.5, 0.75, 1.0):
        d = price_derivatives(s, e)
        for k in (0, 1):
            fd = eps_derivative(lambda x: solve_garbled(s, 0.5, x).prices[k], e, 1e-5)
            if abs(d[k] - fd) > 1e-4 * abs(fd):
                bad.append(f"p{k}' at eps={e}: {d[k]!r} vs {fd!r}")
    gap = revealed_gap(s)
    h = 1e-5
    for r in np.linspace(0.0, gap, 21):
        r = float(r)
        v = lambda x: solve_restricted(s, min(max(x, 0.0), gap)).v_const  # noqa: E731
        if r - 2 * h < 0:
            fd = one_sided_difference(v, r, h, +1)
        elif r + 2 * h > gap:
            fd = one_sided_difference(v, r, h, -1)
        else:
            fd = (v(r + h) - v(r - h)) / (2 * h)
        tol = 1e-3 * abs(fd)
        got = v_const_derivative(s, r)
        if abs(got - fd) > tol:
            bad.append(f"v_const' at r={r:.4f}: {got!r} vs {fd!r}")
    verdict(6, "V'=F, price derivatives and v_const' against finite differences", bad)


LEMMA_AUDITS = (
    "garbling.principal_between_concealed_and_revealed",
    "contract.mlrp_strict_principal_gain",
    "contract.welfare_gain_needs_quantity_gain",
    "garbling.welfare_slope_at_zero_nonnegative",
    "garbling.welfare_at_agent_optimum_beats_concealment",
    "garbling.welfare_slope_at_least_agent_slope",
)


def test_criterion_7_lemma_audits(verdict, capsys):
    sc = B.battery()
    fams = {type(m).__name__ for s in sc.values() for m in (s.f0, s.f1)}
    shapes = {m.shape for s in sc.values() for m in (s.f0, s.f1) if isinstance(m, Weibull)}
    bad = []
    if len(sc) < 8:
        bad.append(f"battery has {len(sc)} scenarios")
    if not {"Exponential", "Weibull", "Uniform", "PointMass"} <= fams:
        bad.append(f"families {sorted(fams)}")
    if not {0.4, 1.0, 2.0} <= shapes:
        bad.append(f"Weibull shapes {sorted(shapes)}")
    results = {c.name: c for c in B.run_all()}
    for name in LEMMA_AUDITS:
        if name not in results or not results[name].passed:
            bad.append(f"{name} failed")
    code = cli.main(["verify"])
    capsys.readouterr()
    if code != 0:
        bad.append(f"verify exited {code}")
    verdict(7, "lemma audits across the battery and verify exit status", bad)


def test_criterion_8_quasiconvexity(verdict):
    eligible = [sid for sid in B.battery() if B.is_drc(sid) and B.is_concave(sid)]
    bad = [] if eligible else ["no battery scenario passes DRC and concavity"]
    for sid in eligible:
        rep = check_quasiconvexity(sweep_restriction(B.battery()[sid], 101), 1e-9)
        if not rep.holds:
            bad.append(f"{sid}: {rep.notes}")
    verdict(8, f"V_const quasi-convex in r on {len(eligible)} eligible scenarios", bad)
