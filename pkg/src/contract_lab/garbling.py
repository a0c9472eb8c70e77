"""The garbled regime: the principal sees a randomized-response copy Y of X.

With probability eps the signal reports X, otherwise an independent
Bernoulli(gamma) draw; eps=0 is concealment (when gamma=theta) and eps=1 is
revelation. The principal prices each posterior G_y separately.

Derivative formulas here are only valid at gamma = theta = 1/2, where
G_0 = (1+eps)/2 F_0 + (1-eps)/2 F_1 and G_1 mirrors it.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache, partial
from typing import Sequence

from .contract import (
    Scenario,
    _equilibrium,
    Equilibrium,
    optimal_price,
    principal_derivative,
    principal_second_derivative,
    sigma_curvature,
    solve_revealed,
)
from .distributions import PointMass, make_garbled_pair
from .errors import DomainError, NonConcaveAtOptimum, NumericalError, WrongAnchoring
from .numerics import Bracket, maximize_scalar, one_sided_difference
from .parallel import ordered_map
from .report import STRICT_STEP, ConditionReport, make_report

EPS_STEP = 1e-4
CONCAVITY_FLOOR = 1e-12
HALF = 0.5


@dataclass(frozen=True)
class GarblingPoint:
    eps: float
    p0: float
    p1: float
    pi_garb: float
    v_garb: float
    w_garb: float
    p0_prime: float
    p1_prime: float
    v_garb_prime_fd: float

    def to_record(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Delta:
    """Gap between the environments' agent-utility gains from raising p1 to p0."""

    value: float


@dataclass(frozen=True)
class GarblingPrimeCell:
    lambda0: float
    lambda1: float
    vgarb_prime_at_one: float
    prop5_margin: float

    def to_record(self) -> dict:
        return asdict(self)


def _require_half(s: Scenario) -> None:
    if s.theta != HALF:
        raise DomainError("garbling derivative formulas need theta = gamma = 1/2")


def _is_zero_anchor(m) -> bool:
    return isinstance(m, PointMass) and m.atom == 0.0


@lru_cache(maxsize=65536)
def solve_garbled(s: Scenario, gamma: float, eps: float) -> Equilibrium:
    g0, g1, q1 = make_garbled_pair(s.f0, s.f1, s.theta, gamma, eps)
    p0, _ = optimal_price(g0, s.b, s.solver)
    p1, _ = optimal_price(g1, s.b, s.solver)
    return _equilibrium("garbled", float(eps), (p0, p1), [(1.0 - q1, g0, s.b, p0), (q1, g1, s.b, p1)])


def _agent_value(s: Scenario, gamma: float, eps: float) -> float:
    return solve_garbled(s, gamma, eps).agent_utility


def _welfare_value(s: Scenario, gamma: float, eps: float) -> float:
    return solve_garbled(s, gamma, eps).welfare


def eps_derivative(value, eps: float, h: float = EPS_STEP) -> float:
    """d/d eps by central differences, switching to one-sided within h of 0 or 1."""
    if eps - 2 * h < 0.0:
        return one_sided_difference(value, eps, h, +1)
    if eps + 2 * h > 1.0:
        return one_sided_difference(value, eps, h, -1)
    return (value(eps + h) - value(eps - h)) / (2.0 * h)


def price_derivatives(s: Scenario, eps: float) -> tuple[float, float]:
    """Analytic (p0'(eps), p1'(eps)) at gamma = theta = 1/2.

    p_y' = (Pi_y'(p_y) - Pi_{1-y}'(p_y)) / (-2 Pi''_{Y=y}(p_y)), with Pi''
    from the analytic f'. A price stuck at the corner p = 0 has derivative 0.
    """
    _require_half(s)
    g0, g1, _ = make_garbled_pair(s.f0, s.f1, s.theta, HALF, eps)
    eq = solve_garbled(s, HALF, eps)
    out = []
    for own, other, post, p in ((s.f0, s.f1, g0, eq.prices[0]), (s.f1, s.f0, g1, eq.prices[1])):
        if p == 0.0:
            out.append(0.0)
            continue
        curv = principal_second_derivative(post, s.b, p)
        if not curv < -CONCAVITY_FLOOR:
            raise NonConcaveAtOptimum(f"posterior objective has Pi'' = {curv!r} at p = {p!r}")
        num = principal_derivative(own, s.b, p) - principal_derivative(other, s.b, p)
        out.append(num / (-2.0 * curv))
    return out[0], out[1]


def _sweep_point(s: Scenario, gamma: float, with_fd: bool, eps: float) -> GarblingPoint:
    eq = solve_garbled(s, gamma, eps)
    d0 = d1 = math.nan
    if gamma == HALF and s.theta == HALF:
        try:
            d0, d1 = price_derivatives(s, eps)
        except NumericalError:
            pass
    fd = math.nan
    if with_fd:
        fd = eps_derivative(partial(_agent_value, s, gamma), eps)
    p0, p1 = eq.prices
    return GarblingPoint(eps, p0, p1, eq.principal_utility, eq.agent_utility, eq.welfare, d0, d1, fd)


def sweep_garbling(
    s: Scenario,
    gamma: float,
    eps_grid: Sequence[float],
    *,
    with_fd: bool = True,
    workers: int = 1,
) -> list[GarblingPoint]:
    grid = [float(e) for e in eps_grid]
    if any(not 0.0 <= e <= 1.0 for e in grid):
        raise DomainError("eps grid values must lie in [0,1]")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("eps grid must be sorted")
    return ordered_map(partial(_sweep_point, s, gamma, with_fd), grid, workers)


def optimal_garbling(s: Scenario, gamma: float, points: Sequence[GarblingPoint]) -> tuple[float, float]:
    """Agent-optimal eps: grid argmax of V_garb, then golden refinement between its neighbours."""
    vs = [pt.v_garb for pt in points]
    i = max(range(len(vs)), key=lambda k: (vs[k], -k))
    if len(points) < 3:
        return points[i].eps, vs[i]
    lo = points[max(i - 1, 0)].eps
    hi = points[min(i + 1, len(points) - 1)].eps
    x, v = maximize_scalar(partial(_agent_value, s, gamma), Bracket(lo, hi), grid_n=5)
    if v > vs[i]:
        return x, v
    return points[i].eps, vs[i]


def agent_utility_dominance(s: Scenario, p0: float, p1: float) -> Delta:
    v1 = s.f1.agent_partial_value
    v0 = s.f0.agent_partial_value
    return Delta(float((v1(p0) - v1(p1)) - (v0(p0) - v0(p1))))


def _sufficiency_note(direction: str) -> str:
    return f"sufficiency only: holds => {direction}"


def check_garbling_zerocost(s: Scenario) -> ConditionReport:
    """Zero-cost anchor: (b - p0*)/(2 - sigma_0(p0*)) < g_0(p0*) implies some garbling helps the agent."""
    if not _is_zero_anchor(s.f1):
        raise WrongAnchoring("this check needs f1 = PointMass(0)")
    _require_half(s)
    p0, _ = optimal_price(s.f0, s.b, s.solver)
    lhs = (s.b - p0) / (2.0 - sigma_curvature(s.f0, p0))
    rhs = float(s.f0.restricted_mean(p0))
    notes = [_sufficiency_note("agent-optimal garbling eps* < 1")]
    if not s.f0.density_bounded:
        notes.append("f0 density is unbounded at 0, so the bounded-density premise fails")
    return make_report(
        "garbling_zerocost",
        lhs,
        rhs,
        rhs - lhs,
        notes,
        extras={"p0_star": p0, "density_bounded": s.f0.density_bounded},
    )


def vgarb_prime_at_one(s: Scenario, h: float = EPS_STEP) -> float:
    """One-sided (backward, second order) d V_garb / d eps at eps = 1, gamma = theta."""
    return one_sided_difference(partial(_agent_value, s, s.theta), 1.0, h, -1)


def check_garbling_general(s: Scenario) -> ConditionReport:
    """Sufficient condition for V_garb'(1) < 0 at gamma = theta = 1/2.

    lhs - Delta equals 4 V_garb'(1), so the finite-difference slope is
    reported alongside as an independent audit. A revealed price at the
    corner p = 0 does not move with eps near 1 and contributes no term.
    """
    _require_half(s)
    eq = solve_revealed(s)
    p0, p1 = eq.prices
    terms = []
    for own, other, p in ((s.f0, s.f1, p0), (s.f1, s.f0, p1)):
        if p == 0.0:
            terms.append(0.0)
            continue
        terms.append(-principal_derivative(other, s.b, p) * (s.b - p) / (2.0 - sigma_curvature(own, p)))
    lhs = terms[0] + terms[1]
    rhs = agent_utility_dominance(s, p0, p1).value
    fd = vgarb_prime_at_one(s)
    # Both sides vanish when the environments coincide; demand a strict gap
    # so that roundoff at a polished optimum cannot decide the verdict.
    return make_report(
        "garbling_general",
        lhs,
        rhs,
        rhs - lhs - STRICT_STEP,
        [_sufficiency_note("V_garb'(1) < 0, some garbling preferred")],
        extras={"vgarb_prime_at_one_fd": fd, "vgarb_prime_at_one_implied": (lhs - rhs) / 4.0, "gap": rhs - lhs},
    )


def _prime_cell(b: float, theta: float, pair: tuple[float, float]) -> GarblingPrimeCell:
    from .distributions import Exponential

    l0, l1 = pair
    s = Scenario(b, theta, Exponential(l0), Exponential(l1))
    rep = check_garbling_general(s)
    return GarblingPrimeCell(l0, l1, rep.extras["vgarb_prime_at_one_fd"], rep.margin)


def grid_vgarb_prime_at_one(
    b: float,
    theta: float,
    lambda0_grid: Sequence[float],
    lambda1_grid: Sequence[float] | None = None,
    *,
    workers: int = 1,
) -> list[GarblingPrimeCell]:
    """V_garb'(1) over exponential-mean pairs, row-major in lambda0 then lambda1."""
    if theta != HALF:
        raise DomainError("the garbling slope grid is defined at theta = 1/2")
    l1s = list(lambda0_grid if lambda1_grid is None else lambda1_grid)
    pairs = [(float(a), float(c)) for a in lambda0_grid for c in l1s]
    return ordered_map(partial(_prime_cell, b, theta), pairs, workers)
