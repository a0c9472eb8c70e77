import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq, minimize_scalar

from contract_lab.contract import (
    Scenario,
    agent_utility,
    alpha_curvature,
    elasticity,
    foc_residual,
    lerner_index,
    optimal_price,
    principal_second_derivative,
    principal_utility,
    sigma_curvature,
    solve_concealed,
    solve_revealed,
    welfare,
    welfare_integral,
    welfare_sum,
)
from contract_lab.distributions import Exponential, PointMass, Uniform, Weibull, make_mixture
from contract_lab.errors import ConfigError, ZeroDensity, ZeroPrice, ZeroQuantity
from contract_lab.numerics import finite_difference


def test_scenario_validation():
    with pytest.raises(ConfigError, match=r"theta must lie in \(0,1\)"):
        Scenario(1.0, 1.5, Exponential(1.0), Exponential(1.0))
    with pytest.raises(ConfigError):
        Scenario(0.0, 0.5, Exponential(1.0), Exponential(1.0))


def test_utility_examples():
    assert principal_utility(Uniform(0, 1), 1.0, 0.5) == 0.25
    assert principal_utility(Exponential(0.3), 1.0, 1.0) == 0.0
    assert principal_utility(PointMass(0.0), 1.0, 0.0) == 1.0
    assert agent_utility(Uniform(0, 1), 0.5) == pytest.approx(0.125, abs=1e-15)
    assert agent_utility(Exponential(0.4), 0.0) == 0.0
    mix = make_mixture([(0.5, Uniform(0.5, 1.5)), (0.5, Uniform(0, 1))])
    assert agent_utility(mix, 0.625) == pytest.approx(0.1015625, abs=1e-15)


def test_uniform_counterexample(uniform_scenario):
    con, rev = solve_concealed(uniform_scenario), solve_revealed(uniform_scenario)
    assert con.prices[0] == pytest.approx(0.625, abs=1e-10)
    assert con.principal_utility == pytest.approx(0.140625, abs=1e-12)
    assert con.agent_utility == pytest.approx(0.1015625, abs=1e-12)
    assert con.welfare == pytest.approx(0.2421875, abs=1e-12)
    assert con.quantity == pytest.approx(0.375, abs=1e-12)
    assert rev.prices == (pytest.approx(0.75, abs=1e-10), pytest.approx(0.5, abs=1e-10))
    assert rev.principal_utility == pytest.approx(0.15625, abs=1e-12)
    assert rev.welfare == pytest.approx(0.234375, abs=1e-12)
    assert rev.quantity == pytest.approx(0.375, abs=1e-12)
    assert welfare_integral(uniform_scenario, 1.0, 1.0) == pytest.approx(0.3125, abs=1e-12)


def test_point_mass_concealed():
    s = Scenario(2.0, 0.4, PointMass(0.0), PointMass(0.0))
    eq = solve_concealed(s)
    assert eq.prices == (0.0,)
    assert eq.principal_utility == 2.0 and eq.agent_utility == 0.0


def test_anchored_concealed_price_solves_printed_foc(anchored):
    th, f0 = anchored.theta, anchored.f0
    oracle = brentq(lambda p: p + ((1 - th) * f0.cdf(p) + th) / ((1 - th) * f0.pdf(p)) - anchored.b, 1e-9, 1.0, xtol=1e-15)
    assert solve_concealed(anchored).prices[0] == pytest.approx(oracle, abs=1e-9)
    assert oracle == pytest.approx(0.18603234719, abs=1e-10)


@pytest.mark.parametrize("m", [Exponential(0.3), Weibull(0.4, 1.7), Uniform(0.1, 0.8), Weibull(0.2, 0.6)])
def test_optimal_price_matches_scipy(m):
    ref = minimize_scalar(lambda p: -principal_utility(m, 1.0, p), bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-12})
    p, v = optimal_price(m, 1.0)
    assert v >= -ref.fun - 1e-15
    assert p == pytest.approx(ref.x, abs=1e-6)


def test_equal_environments_give_equal_regimes():
    s = Scenario(1.0, 0.3, Weibull(0.5, 1.5), Weibull(0.5, 1.5))
    con, rev = solve_concealed(s), solve_revealed(s)
    assert rev.prices[0] == rev.prices[1] == pytest.approx(con.prices[0], abs=1e-12)
    assert rev.principal_utility == pytest.approx(con.principal_utility, abs=1e-12)
    assert rev.agent_utility == pytest.approx(con.agent_utility, abs=1e-12)


def test_fig6_agent_prefers_concealment(fig6):
    con, rev = solve_concealed(fig6), solve_revealed(fig6)
    assert rev.agent_utility < con.agent_utility
    # frozen from a verified run
    assert con.prices[0] == pytest.approx(0.15004294051323255, abs=1e-9)
    assert con.agent_utility == pytest.approx(0.08023159233228909, abs=1e-9)
    assert rev.prices[0] == pytest.approx(0.3960299842153385, abs=1e-9)
    assert rev.prices[1] == pytest.approx(0.04568829494840817, abs=1e-9)
    assert rev.agent_utility == pytest.approx(0.07913870293846785, abs=1e-9)


def test_foc_residual_examples():
    assert foc_residual(Uniform(0, 1), 1.0, 0.5) == 0.0
    p = brentq(lambda p: p + math.expm1(p) - 2.0, 0, 2, xtol=1e-15)
    assert abs(foc_residual(Exponential(1.0), 2.0, p)) <= 1e-6
    assert foc_residual(Exponential(0.5), 1.0, 1.0) > 0
    with pytest.raises(ZeroDensity):
        foc_residual(Uniform(0.5, 1.0), 1.0, 0.2)


def test_curvature_examples():
    assert elasticity(Uniform(0, 1), 0.5) == 1.0
    assert elasticity(Exponential(0.7), 1e-7) == pytest.approx(1.0, abs=1e-6)
    assert elasticity(Weibull(1.0, 2.0), 1.0) == pytest.approx(2 * math.exp(-1) / (1 - math.exp(-1)), abs=1e-12)
    with pytest.raises(ZeroQuantity):
        elasticity(Uniform(0.5, 1.0), 0.2)
    assert sigma_curvature(Uniform(0, 1), 0.3) == 0.0
    lam = 0.4
    assert sigma_curvature(Exponential(lam), lam * math.log(2)) == pytest.approx(-1.0, abs=1e-12)
    assert sigma_curvature(Weibull(lam, 1.0), 0.2) == pytest.approx(sigma_curvature(Exponential(lam), 0.2), abs=1e-12)
    assert alpha_curvature(Uniform(0, 1), 0.4) == 0.0
    assert alpha_curvature(Exponential(lam), 0.3) == pytest.approx(0.3 / lam, abs=1e-12)
    w = Weibull(1.0, 2.0)
    assert alpha_curvature(w, 0.5) == pytest.approx(-0.5 * finite_difference(lambda c: math.log(w.pdf(c)), 0.5), abs=1e-8)
    assert lerner_index(1.0, 0.5) == 1.0
    assert lerner_index(0.7, 0.7) == 0.0
    assert lerner_index(1.0, 0.625) == pytest.approx(0.6, abs=1e-15)
    with pytest.raises(ZeroPrice):
        lerner_index(1.0, 0.0)


@pytest.mark.parametrize("m", [Exponential(0.5), Weibull(0.4, 2.0), Uniform(0.0, 1.0)])
def test_second_derivative_matches_fd(m):
    for p in (0.2, 0.45, 0.7):
        fd = finite_difference(lambda x: finite_difference(lambda y: principal_utility(m, 1.0, y), x, 1e-4), p, 1e-4)
        assert principal_second_derivative(m, 1.0, p) == pytest.approx(fd, abs=1e-5)


def test_welfare_examples(uniform_scenario):
    assert welfare(uniform_scenario, 0.625) == pytest.approx(0.2421875, abs=1e-12)
    assert welfare(uniform_scenario, 0.75, 0.5) == pytest.approx(0.234375, abs=1e-12)
    assert welfare(Scenario(1.0, 0.5, Exponential(0.3), Weibull(0.2, 2.0)), 0.0, 0.0) == 0.0


lams = st.floats(0.01, 1.0)


@given(lams, lams, st.floats(0.05, 0.95))
def test_revelation_lemmas(l0, l1, theta):
    s = Scenario(1.0, theta, Exponential(l0), Exponential(l1))
    con, rev = solve_concealed(s), solve_revealed(s)
    assert rev.principal_utility >= con.principal_utility - 1e-9
    if l0 > l1 * (1 + 1e-3):
        assert rev.principal_utility > con.principal_utility + 1e-9 or abs(l0 - l1) < 1e-2
        assert rev.prices[0] >= rev.prices[1]
    if rev.welfare > con.welfare + 1e-9:
        assert rev.quantity > con.quantity - 1e-12
    for eq in (con, rev):
        assert abs(eq.welfare - eq.principal_utility - eq.agent_utility) <= 1e-10
        assert 0.0 <= eq.quantity <= 1.0
    p0, p1 = rev.prices
    assert abs(welfare_sum(s, p0, p1) - welfare_integral(s, p0, p1)) <= 1e-8


@given(st.floats(0.05, 0.95))
def test_revealed_prices_ignore_theta(theta):
    base = Scenario(1.0, 0.5, Weibull(0.5, 1.5), Exponential(0.1))
    moved = Scenario(1.0, theta, base.f0, base.f1)
    assert solve_revealed(moved).prices == solve_revealed(base).prices


def test_equilibrium_record_fields(uniform_scenario):
    rec = solve_revealed(uniform_scenario).to_record()
    assert list(rec) == ["regime", "param", "p0", "p1", "principal_utility", "agent_utility", "welfare", "quantity"]
