"""Built-in scenario battery and the named invariants run by ``contract-lab verify``.

Each invariant returns a Check whose margin is the worst slack found
(positive when the invariant holds). Sample points come from a golden-ratio
sequence, so the battery uses no random numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .conditions import (
    check_concavity,
    check_mlrp,
    check_prop1,
    check_prop2,
    check_prop3,
    check_quantity_lemma,
    psi,
)
from .contract import (
    Scenario,
    foc_residual,
    optimal_price,
    solve_concealed,
    solve_revealed,
    welfare_integral,
    welfare_sum,
)
from .distributions import (
    CostModel,
    Exponential,
    PointMass,
    Uniform,
    Weibull,
    make_garbled_pair,
    make_mixture,
)
from .errors import ContractLabError
from .garbling import (
    EPS_STEP,
    agent_utility_dominance,
    check_garbling_general,
    check_garbling_zerocost,
    eps_derivative,
    optimal_garbling,
    solve_garbled,
    sweep_garbling,
)
from .numerics import Bracket, find_root, finite_difference, integrate, maximize_scalar
from .restriction import check_drc, check_quasiconvexity, revealed_gap, solve_restricted, sweep_restriction, v_const_derivative
from .welfare import build_trajectories, grid_revelation_preference

SWEEP_N = 101
HALF = 0.5
_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def battery() -> dict[str, Scenario]:
    """Scenarios every invariant is run against (b = 1, theta = 1/2)."""
    out = {
        "uniform_counterexample": Scenario(1.0, HALF, Uniform(0.5, 1.5), Uniform(0.0, 1.0)),
        "exponential_0.5_0.01": Scenario(1.0, HALF, Exponential(0.5), Exponential(0.01)),
    }
    for lam in (0.1, 0.2, 0.5, 0.8):
        out[f"anchored_exponential_{lam}"] = Scenario(1.0, HALF, Exponential(lam), PointMass(0.0))
    for k in (0.4, 1.0, 2.0):
        out[f"weibull_k{k:g}"] = Scenario(1.0, HALF, Weibull(0.5, k), Weibull(0.2, k))
    # pairs on which the curvature conditions for concealment and revelation hold
    out["weibull_concealment"] = Scenario(1.0, HALF, Weibull(0.2, 2.0), Weibull(0.1, 0.8))
    out["weibull_revelation"] = Scenario(1.0, HALF, Weibull(0.8, 1.5), Weibull(0.3, 1.5))
    return out


def low_discrepancy(n: int, lo: float, hi: float, offset: int = 1) -> np.ndarray:
    u = np.mod((np.arange(n) + offset) * _PHI, 1.0)
    return lo + (hi - lo) * u


@dataclass
class Check:
    name: str
    passed: bool
    margin: float
    detail: str = ""


# -- cached per-scenario data ---------------------------------------------------


@lru_cache(maxsize=None)
def _scenarios() -> dict[str, Scenario]:
    return battery()


@lru_cache(maxsize=None)
def garbling_sweep(sid: str):
    return sweep_garbling(_scenarios()[sid], HALF, np.linspace(0.0, 1.0, SWEEP_N))


@lru_cache(maxsize=None)
def restriction_sweep(sid: str):
    return sweep_restriction(_scenarios()[sid], SWEEP_N)


@lru_cache(maxsize=None)
def is_mlrp(sid: str) -> bool:
    s = _scenarios()[sid]
    try:
        return check_mlrp(s.f0, s.f1).holds
    except ContractLabError:
        return False


@lru_cache(maxsize=None)
def is_concave(sid: str) -> bool:
    s = _scenarios()[sid]
    return check_concavity(s.f0, s.b).holds and check_concavity(s.f1, s.b).holds


@lru_cache(maxsize=None)
def is_drc(sid: str) -> bool:
    return check_drc(_scenarios()[sid]).holds


def mlrp_concave_ids() -> list[str]:
    return [sid for sid in _scenarios() if is_mlrp(sid) and is_concave(sid)]


# -- helpers ---------------------------------------------------------------------


def _worst(pairs) -> tuple[float, str]:
    """pairs of (slack, label) -> (smallest slack, its label)."""
    pairs = list(pairs)
    if not pairs:
        return math.inf, "vacuous"
    slack, label = min(pairs, key=lambda t: t[0])
    return slack, label


def _check(name: str, pairs, strict: bool = False) -> Check:
    slack, label = _worst(pairs)
    slack = float(slack)
    ok = slack > 0 if strict else slack >= 0
    return Check(name, ok, slack, label)


def _families() -> list[CostModel]:
    return [
        Exponential(0.3),
        Exponential(2.0),
        Weibull(0.5, 0.7),
        Weibull(1.0, 2.0),
        Weibull(0.4, 3.5),
        Uniform(0.2, 1.3),
        make_mixture([(0.3, Exponential(0.5)), (0.7, Weibull(0.3, 2.0))]),
    ]


# -- numerics --------------------------------------------------------------------


def inv_integrate_cubics() -> Check:
    pairs = []
    for i, (c0, c1, c2, c3) in enumerate(low_discrepancy(40, -3, 3).reshape(10, 4)):
        a, b = sorted(low_discrepancy(2, -2, 2, offset=7 * i + 3))
        exact = sum(c / (k + 1) * (b ** (k + 1) - a ** (k + 1)) for k, c in enumerate((c0, c1, c2, c3)))
        got = integrate(lambda x: c0 + c1 * x + c2 * x * x + c3 * x**3, a, b)
        pairs.append((1e-10 * max(1.0, abs(exact)) - abs(got - exact), f"cubic {i}"))
    return _check("numerics.integrate_exact_on_cubics", pairs)


def inv_root_residual() -> Check:
    pairs = []
    for i, t in enumerate(low_discrepancy(20, 0.1, 2.0)):
        g = lambda x, t=t: math.exp(x) - 1.0 - t  # noqa: E731
        r = find_root(g, Bracket(-1.0, 3.0))
        pairs.append((10 * 1e-10 * max(1.0, math.exp(r)) - abs(g(r)), f"t={t:.4f}"))
    return _check("numerics.find_root_residual", pairs)


def inv_maximize_vs_foc() -> Check:
    pairs = []
    for i, t in enumerate(low_discrepancy(20, 0.2, 3.0)):
        f = lambda x, t=t: math.log1p(t * x) - x * x  # noqa: E731
        x_max, _ = maximize_scalar(f, Bracket(0.0, 3.0))
        x_foc = find_root(lambda x: finite_difference(f, x), Bracket(1e-3, 3.0))
        pairs.append((1e-10 - abs(x_max - x_foc), f"t={t:.4f}"))
    return _check("numerics.maximize_matches_foc_root", pairs)


def inv_determinism() -> Check:
    s = _scenarios()["exponential_0.5_0.01"]
    a = [optimal_price.__wrapped__(s.f0, s.b), optimal_price.__wrapped__(s.marginal, s.b)]
    b = [optimal_price.__wrapped__(s.f0, s.b), optimal_price.__wrapped__(s.marginal, s.b)]
    c1 = integrate(lambda x: math.sin(x) ** 2, 0.0, 3.0)
    c2 = integrate(lambda x: math.sin(x) ** 2, 0.0, 3.0)
    same = a == b and c1 == c2
    return Check("numerics.bit_identical_reruns", same, 1.0 if same else -1.0)


# -- distributions ---------------------------------------------------------------


def _smooth_points(m: CostModel, n: int, offset: int) -> np.ndarray:
    lo = max(m.support[0], 0.0)
    hi = min(m.quantile(0.99), lo + 5.0)
    pts = low_discrepancy(n, lo, hi, offset)
    kinks = np.array(m.breakpoints())
    keep = [p for p in pts if p > 1e-3 and (kinks.size == 0 or np.min(np.abs(kinks - p)) > 1e-3)]
    return np.array(keep)


def inv_cdf_pdf() -> Check:
    pairs = []
    for j, m in enumerate(_families()):
        for c in _smooth_points(m, 150, 11 * j + 1):
            pairs.append((1e-5 - abs(finite_difference(m.cdf, float(c), 1e-6) - m.pdf(float(c))), f"{m} at {c:.4f}"))
    return _check("distributions.cdf_derivative_is_pdf", pairs)


def inv_partial_value() -> Check:
    pairs = []
    for j, m in enumerate(_families()):
        for p in _smooth_points(m, 20, 13 * j + 5):
            d = finite_difference(m.agent_partial_value, float(p), 1e-6)
            pairs.append((1e-6 - abs(d - m.cdf(float(p))), f"{m} at {p:.4f}"))
    return _check("distributions.partial_value_derivative_is_cdf", pairs)


def inv_restricted_mean() -> Check:
    pairs = []
    for m in _families() + [PointMass(0.0), PointMass(0.4)]:
        ps = np.linspace(0.0, 6.0, 300)
        g = np.asarray(m.restricted_mean(ps))
        pairs.append((float(np.min(np.diff(g))) + 1e-14, f"{m} monotone"))
        pairs.append((m.expectation + 1e-12 - float(np.max(g)), f"{m} bounded by mean"))
    return _check("distributions.restricted_mean_monotone_and_bounded", pairs)


def inv_mixture_linearity() -> Check:
    comps = [(0.2, Exponential(0.4)), (0.5, Uniform(0.1, 0.9)), (0.3, PointMass(0.25))]
    mix = make_mixture(comps)
    pairs = []
    for c in np.linspace(0.0, 2.0, 101):
        direct = sum(w * m.cdf(float(c)) for w, m in comps)
        pairs.append((1e-12 - abs(mix.cdf(float(c)) - direct), f"c={c:.3f}"))
    return _check("distributions.mixture_linearity", pairs)


def inv_total_law() -> Check:
    f0, f1 = Exponential(0.5), Weibull(0.2, 1.5)
    pairs = []
    for eps in (0.0, 0.3, 0.7, 1.0):
        for gamma in (0.2, 0.5, 0.9):
            for theta in (0.1, 0.5, 0.8):
                g0, g1, q1 = make_garbled_pair(f0, f1, theta, gamma, eps)
                for c in (0.05, 0.3, 1.2):
                    lhs = (1 - q1) * g0.cdf(c) + q1 * g1.cdf(c)
                    rhs = (1 - theta) * f0.cdf(c) + theta * f1.cdf(c)
                    pairs.append((1e-12 - abs(lhs - rhs), f"eps={eps} gamma={gamma} theta={theta} c={c}"))
    return _check("distributions.garbling_total_law", pairs)


def inv_mlrp_example() -> Check:
    f0, f1 = Exponential(0.5), Exponential(0.2)
    c = np.linspace(0.0, 3.0, 1000)
    ratio = np.asarray(f0.pdf(c)) / np.asarray(f1.pdf(c))
    return _check("distributions.exponential_likelihood_ratio_increasing", [(float(np.min(np.diff(ratio))), "grid")], strict=True)


# -- contract --------------------------------------------------------------------


def inv_principal_not_worse() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        pairs.append((solve_revealed(s).principal_utility - solve_concealed(s).principal_utility + 1e-9, sid))
    return _check("contract.revelation_never_hurts_principal", pairs)


def inv_principal_strict_gain() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        if not is_mlrp(sid):
            continue
        con, rev = solve_concealed(s), solve_revealed(s)
        pairs.append((rev.principal_utility - con.principal_utility - 1e-9, sid))
        pairs.append((abs(rev.prices[0] - rev.prices[1]), f"{sid} distinct prices"))
    return _check("contract.mlrp_strict_principal_gain", pairs, strict=True)


def inv_quantity_lemma() -> Check:
    return _check(
        "contract.welfare_gain_needs_quantity_gain",
        [(check_quantity_lemma(s).margin, sid) for sid, s in _scenarios().items()],
        strict=True,
    )


def inv_theta_invariance() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        base = solve_revealed(s).prices
        for th in np.linspace(0.1, 0.9, 9):
            t = Scenario(s.b, float(th), s.f0, s.f1)
            got = solve_revealed(t).prices
            pairs.append((1e-12 - max(abs(x - y) for x, y in zip(base, got)), f"{sid} theta={th:.1f}"))
    return _check("contract.revealed_prices_ignore_theta", pairs)


def inv_foc() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        if not is_concave(sid):
            continue
        for m in (s.f0, s.f1, s.marginal):
            p, _ = optimal_price(m, s.b, s.solver)
            if p > 0:
                pairs.append((1e-6 - abs(foc_residual(m, s.b, p)), sid))
    return _check("contract.first_order_condition_at_optimum", pairs)


def inv_welfare_routes() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        con, rev = solve_concealed(s), solve_revealed(s)
        p = con.prices[0]
        for p0, p1, tag in ((p, p, "concealed"), (*rev.prices, "revealed"), (s.b, s.b, "efficient")):
            pairs.append((1e-8 - abs(welfare_sum(s, p0, p1) - welfare_integral(s, p0, p1)), f"{sid} {tag}"))
    return _check("contract.welfare_sum_equals_integral", pairs)


def inv_equilibrium_fields() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        for eq in (solve_concealed(s), solve_revealed(s)):
            pairs.append((1e-10 - abs(eq.welfare - eq.principal_utility - eq.agent_utility), f"{sid} {eq.regime}"))
            pairs.append((min(eq.quantity, 1.0 - eq.quantity) + 1e-15, f"{sid} {eq.regime} quantity"))
    return _check("contract.equilibrium_accounting", pairs)


def inv_revealed_order() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        if is_mlrp(sid):
            p0, p1 = solve_revealed(s).prices
            pairs.append((p0 - p1, sid))
    return _check("contract.revealed_prices_ordered_under_mlrp", pairs)


# -- garbling --------------------------------------------------------------------


def inv_garbling_points() -> Check:
    pairs = []
    for sid in _scenarios():
        mlrp = is_mlrp(sid)
        for pt in garbling_sweep(sid):
            pairs.append((1e-10 - abs(pt.w_garb - pt.pi_garb - pt.v_garb), f"{sid} eps={pt.eps:.2f} welfare"))
            if mlrp:
                pairs.append((pt.p0 - pt.p1 + 1e-9, f"{sid} eps={pt.eps:.2f} order"))
    return _check("garbling.sweep_point_accounting", pairs)


def inv_interpolation() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        lo, hi = solve_concealed(s).principal_utility, solve_revealed(s).principal_utility
        for pt in garbling_sweep(sid):
            pairs.append((min(pt.pi_garb - lo, hi - pt.pi_garb) + 1e-9, f"{sid} eps={pt.eps:.2f}"))
    return _check("garbling.principal_between_concealed_and_revealed", pairs)


def inv_garbling_principal_monotone() -> Check:
    pairs = []
    for sid in mlrp_concave_ids():
        pts = garbling_sweep(sid)
        pairs += [(b.pi_garb - a.pi_garb + 1e-9, f"{sid} eps={b.eps:.2f}") for a, b in zip(pts, pts[1:])]
    return _check("garbling.principal_nondecreasing_in_eps", pairs)


def inv_prices_monotone() -> Check:
    pairs = []
    for sid in mlrp_concave_ids():
        pts = garbling_sweep(sid)
        for a, b in zip(pts, pts[1:]):
            pairs.append((b.p0 - a.p0 + 1e-9, f"{sid} p0 eps={b.eps:.2f}"))
            pairs.append((a.p1 - b.p1 + 1e-9, f"{sid} p1 eps={b.eps:.2f}"))
    return _check("garbling.prices_spread_with_eps", pairs)


def _price_fd(s: Scenario, eps: float, which: int) -> float:
    return eps_derivative(lambda e: solve_garbled(s, HALF, e).prices[which], eps)


def inv_price_derivatives() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        for pt in garbling_sweep(sid)[::5]:
            for which, analytic in ((0, pt.p0_prime), (1, pt.p1_prime)):
                if not math.isfinite(analytic):
                    continue
                stencil = [solve_garbled(s, HALF, e).prices[which] for e in _stencil(pt.eps)]
                if any(p == 0.0 for p in stencil) and not all(p == 0.0 for p in stencil):
                    continue  # the price hits the corner inside the difference stencil
                fd = _price_fd(s, pt.eps, which)
                pairs.append((1e-4 * abs(fd) + 1e-8 - abs(analytic - fd), f"{sid} p{which}' eps={pt.eps:.2f}"))
    return _check("garbling.analytic_price_derivatives_match_fd", pairs)


def _stencil(eps: float) -> list[float]:
    h = EPS_STEP
    if eps - 2 * h < 0:
        return [eps, eps + h, eps + 2 * h]
    if eps + 2 * h > 1:
        return [eps, eps - h, eps - 2 * h]
    return [eps - h, eps, eps + h]


def inv_endpoints() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        for garb, ref in ((solve_garbled(s, s.theta, 0.0), solve_concealed(s)), (solve_garbled(s, 0.3, 1.0), solve_revealed(s))):
            for attr in ("principal_utility", "agent_utility", "welfare"):
                pairs.append((1e-9 - abs(getattr(garb, attr) - getattr(ref, attr)), f"{sid} eps={garb.param} {attr}"))
    return _check("garbling.endpoints_match_regimes", pairs)


def _welfare_of(s: Scenario):
    return lambda e: solve_garbled(s, HALF, e).welfare


def _agent_of(s: Scenario):
    return lambda e: solve_garbled(s, HALF, e).agent_utility


def inv_welfare_slope_at_zero() -> Check:
    pairs = [(eps_derivative(_welfare_of(s), 0.0) + 1e-6, sid) for sid, s in _scenarios().items()]
    return _check("garbling.welfare_slope_at_zero_nonnegative", pairs)


def inv_welfare_at_agent_optimum() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        pts = garbling_sweep(sid)
        i = int(np.argmax([p.v_garb for p in pts]))
        pairs.append((pts[i].w_garb - pts[0].w_garb + 1e-9, f"{sid} eps*={pts[i].eps:.2f}"))
    return _check("garbling.welfare_at_agent_optimum_beats_concealment", pairs)


def inv_welfare_slope_dominates() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        for pt in garbling_sweep(sid)[::4]:
            dw = eps_derivative(_welfare_of(s), pt.eps)
            pairs.append((dw - pt.v_garb_prime_fd + 1e-6, f"{sid} eps={pt.eps:.2f}"))
    return _check("garbling.welfare_slope_at_least_agent_slope", pairs)


def inv_delta() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        p0, p1 = solve_revealed(s).prices
        fosd = _fosd(s.f1, s.f0)
        if fosd and p0 > p1:
            pairs.append((agent_utility_dominance(s, p0, p1).value + 1e-9, sid))
    return _check("garbling.dominance_gap_nonnegative_under_fosd", pairs)


def _fosd(hi: CostModel, lo: CostModel) -> bool:
    """hi's cdf lies weakly above lo's everywhere on a grid."""
    c = np.linspace(0.0, 5.0, 2001)
    return bool(np.all(np.asarray(hi.cdf(c)) >= np.asarray(lo.cdf(c)) - 1e-15))


def inv_prop5_identity() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        rep = check_garbling_general(s)
        fd = rep.extras["vgarb_prime_at_one_fd"]
        implied = rep.extras["vgarb_prime_at_one_implied"]
        pairs.append((1e-6 + 1e-4 * abs(fd) - abs(fd - implied), sid))
    return _check("garbling.slope_at_one_matches_closed_form", pairs)


# -- restriction -----------------------------------------------------------------


def inv_restriction_endpoints() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        pts = restriction_sweep(sid)
        con, rev = solve_concealed(s), solve_revealed(s)
        for pt, eq, tag in ((pts[0], con, "r=0"), (pts[-1], rev, "r=max")):
            for a, b in ((pt.pi_const, eq.principal_utility), (pt.v_const, eq.agent_utility), (pt.w_const, eq.welfare)):
                pairs.append((1e-9 - abs(a - b), f"{sid} {tag}"))
    return _check("restriction.endpoints_match_regimes", pairs)


def inv_restriction_points() -> Check:
    pairs = []
    for sid in _scenarios():
        for pt in restriction_sweep(sid):
            pairs.append((1e-10 - abs(pt.p0 - pt.p1 - pt.r), f"{sid} r={pt.r:.4f} gap"))
            pairs.append((1e-10 - abs(pt.w_const - pt.pi_const - pt.v_const), f"{sid} r={pt.r:.4f} welfare"))
    return _check("restriction.sweep_point_accounting", pairs)


def inv_restriction_principal_monotone() -> Check:
    pairs = []
    for sid in _scenarios():
        if not is_concave(sid):
            continue
        pts = restriction_sweep(sid)
        pairs += [(b.pi_const - a.pi_const + 1e-9, f"{sid} r={b.r:.4f}") for a, b in zip(pts, pts[1:])]
    return _check("restriction.principal_nondecreasing_in_r", pairs)


def inv_quasiconvex() -> Check:
    pairs = []
    for sid in _scenarios():
        if is_concave(sid) and is_drc(sid):
            pairs.append((check_quasiconvexity(restriction_sweep(sid)).margin, sid))
    return _check("restriction.agent_value_quasiconvex_in_r", pairs, strict=True)


def inv_v_const_derivative() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        gap = revealed_gap(s)
        if gap <= 0:
            continue
        h = 1e-5 * gap
        for r in np.linspace(0.0, gap, 21):
            try:
                analytic = v_const_derivative(s, float(r))
            except ContractLabError:
                continue
            lo, hi = max(r - h, 0.0), min(r + h, gap)
            if lo == 0.0 or hi == gap:
                # one-sided, second order
                sgn = 1.0 if lo == 0.0 else -1.0
                v = [solve_restricted(s, float(r + sgn * k * h)).v_const for k in range(3)]
                fd = sgn * (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
            else:
                fd = (solve_restricted(s, float(hi)).v_const - solve_restricted(s, float(lo)).v_const) / (hi - lo)
            corner = [solve_restricted(s, float(x)).p1 == 0.0 for x in (lo, r, hi)]
            if any(corner) and not all(corner):
                continue
            pairs.append((1e-3 * abs(fd) + 1e-7 - abs(analytic - fd), f"{sid} r={r:.4f}"))
    return _check("restriction.v_const_derivative_matches_fd", pairs)


def inv_prop2() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        if s.f0.atoms or s.f1.atoms:
            continue
        if check_prop2(s).holds:
            pairs.append((solve_concealed(s).agent_utility - solve_revealed(s).agent_utility, sid))
    return _check("conditions.prop2_implies_concealment", pairs, strict=True)


def inv_prop3() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        if s.f0.atoms or s.f1.atoms:
            continue
        if check_prop3(s).holds:
            pairs.append((solve_revealed(s).agent_utility - solve_concealed(s).agent_utility, sid))
    return _check("conditions.prop3_implies_revelation", pairs, strict=True)


# -- conditions ------------------------------------------------------------------


def inv_prop1() -> Check:
    pairs = []
    for sid, s in _scenarios().items():
        if isinstance(s.f1, PointMass) and s.f1.atom == 0.0 and check_prop1(s).holds:
            pairs.append((solve_concealed(s).agent_utility - solve_revealed(s).agent_utility, sid))
    return _check("conditions.prop1_implies_concealment", pairs, strict=True)


def inv_prop4() -> Check:
    pairs = []
    step = 1.0 / (SWEEP_N - 1)
    for sid, s in _scenarios().items():
        if isinstance(s.f1, PointMass) and s.f1.atom == 0.0 and check_garbling_zerocost(s).holds:
            eps_star, _ = optimal_garbling(s, HALF, garbling_sweep(sid))
            pairs.append((1.0 - step - eps_star + 1e-12, f"{sid} eps*={eps_star:.4f}"))
    return _check("conditions.zero_cost_garbling_condition_implies_interior_optimum", pairs)


def inv_psi() -> Check:
    th = np.linspace(0.02, 0.98, 50)
    vals = [psi(float(t)) for t in th]
    pairs = [(a - b, f"theta={t:.3f}") for a, b, t in zip(vals, vals[1:], th[1:])]
    pairs += [(min(v, 1.0 - v), f"range theta={t:.3f}") for v, t in zip(vals, th)]
    return _check("conditions.psi_decreasing_in_unit_interval", pairs, strict=True)


def inv_mlrp_battery() -> Check:
    lams = (0.05, 0.2, 0.5, 0.9)
    pairs = []
    for a in lams:
        for c in lams:
            agrees = check_mlrp(Exponential(a), Exponential(c)).holds == (a > c)
            pairs.append((1.0 if agrees else -1.0, f"({a}, {c})"))
    return _check("conditions.exponential_mlrp_iff_mean_order", pairs)


# -- welfare ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def _trajectories(sid: str):
    return build_trajectories(_scenarios()[sid], SWEEP_N, sid)


def inv_anchors() -> Check:
    pairs = []
    for sid in _scenarios():
        garb, rest = _trajectories(sid)
        av, api = garb.anchors["A"]
        for tr in (garb, rest):
            first = tr.points[0]
            pairs.append((1e-9 - max(abs(first.v - av), abs(first.pi - api)), f"{sid} {tr.kind}"))
        fv, fpi = garb.anchors["F"]
        last = rest.points[-1]
        pairs.append((1e-9 - max(abs(last.v - fv), abs(last.pi - fpi)), f"{sid} restriction end"))
    return _check("welfare.trajectory_anchors", pairs)


def inv_trajectory_bounds() -> Check:
    pairs = []
    for sid in _scenarios():
        for tr in _trajectories(sid):
            wmax = tr.anchors["w_max"]
            floor = tr.anchors["A"][1]
            for pt in tr.points:
                pairs.append((wmax + 1e-9 - pt.w, f"{sid} {tr.kind} w at {pt.param:.3f}"))
                pairs.append((pt.pi - floor + 1e-9, f"{sid} {tr.kind} pi at {pt.param:.3f}"))
    return _check("welfare.trajectories_within_bounds", pairs)


def inv_trajectory_principal() -> Check:
    pairs = []
    for sid in _scenarios():
        if not is_mlrp(sid):
            continue
        pts = _trajectories(sid)[0].points
        pairs += [(b.pi - a.pi + 1e-9, f"{sid} eps={b.param:.2f}") for a, b in zip(pts, pts[1:])]
    return _check("welfare.garbling_trajectory_principal_monotone", pairs)


def inv_trajectory_quasiconvex() -> Check:
    pairs = []
    for sid in _scenarios():
        if not (is_drc(sid) and is_concave(sid)):
            continue
        v = [p.v for p in _trajectories(sid)[1].points]
        bumps = [min(v[i] - v[i - 1], v[i] - v[i + 1]) for i in range(1, len(v) - 1)]
        pairs.append((1e-9 - max(bumps), sid))
    return _check("welfare.restriction_trajectory_no_interior_peak", pairs)


def inv_grid_antisymmetry() -> Check:
    lams = [0.02, 0.1, 0.35, 0.8]
    cells = {(c.lambda0, c.lambda1): c.v_rev_minus_v_con for c in grid_revelation_preference(1.0, HALF, lams, lams)}
    pairs = [(1e-8 - abs(cells[(a, c)] - cells[(c, a)]), f"({a}, {c})") for a in lams for c in lams]
    return _check("welfare.grid_swap_symmetry", pairs)


# -- cli -------------------------------------------------------------------------


def inv_config_round_trip() -> Check:
    from .config import ScenarioConfig, builtin_configs

    pairs = []
    for name, raw in builtin_configs().items():
        cfg = ScenarioConfig.from_dict(raw)
        again = ScenarioConfig.from_dict(cfg.to_dict())
        pairs.append((1.0 if again == cfg else -1.0, name))
    return _check("cli.config_round_trip", pairs)


INVARIANTS: list[Callable[[], Check]] = [
    inv_integrate_cubics,
    inv_root_residual,
    inv_maximize_vs_foc,
    inv_determinism,
    inv_cdf_pdf,
    inv_partial_value,
    inv_restricted_mean,
    inv_mixture_linearity,
    inv_total_law,
    inv_mlrp_example,
    inv_principal_not_worse,
    inv_principal_strict_gain,
    inv_quantity_lemma,
    inv_theta_invariance,
    inv_foc,
    inv_welfare_routes,
    inv_equilibrium_fields,
    inv_revealed_order,
    inv_garbling_points,
    inv_interpolation,
    inv_garbling_principal_monotone,
    inv_prices_monotone,
    inv_price_derivatives,
    inv_endpoints,
    inv_welfare_slope_at_zero,
    inv_welfare_at_agent_optimum,
    inv_welfare_slope_dominates,
    inv_delta,
    inv_prop5_identity,
    inv_restriction_endpoints,
    inv_restriction_points,
    inv_restriction_principal_monotone,
    inv_quasiconvex,
    inv_v_const_derivative,
    inv_prop2,
    inv_prop3,
    inv_prop1,
    inv_prop4,
    inv_psi,
    inv_mlrp_battery,
    inv_anchors,
    inv_trajectory_bounds,
    inv_trajectory_principal,
    inv_trajectory_quasiconvex,
    inv_grid_antisymmetry,
    inv_config_round_trip,
]


def run_all() -> list[Check]:
    out = []
    for inv in INVARIANTS:
        try:
            out.append(inv())
        except ContractLabError as exc:
            out.append(Check(inv.__name__, False, math.nan, f"{type(exc).__name__}: {exc}"))
    return out
