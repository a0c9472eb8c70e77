"""Restricted price discrimination: the price gap p0 - p1 is pinned to r.

r = 0 is uniform pricing (the concealed equilibrium) and r = p0* - p1* lets
the revealed prices through, so r traces a path between the two regimes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache, partial
from typing import Sequence

import numpy as np

from .contract import (
    Scenario,
    alpha_curvature,
    principal_derivative,
    principal_second_derivative,
    sigma_curvature,
    solve_revealed,
)
from .errors import ContractLabError, NonConcaveAtOptimum, NumericalError, RangeError
from .numerics import Bracket, maximize_scalar
from .parallel import ordered_map
from .report import STRICT_STEP, ConditionReport, check_grid, make_report

RANGE_SLACK = 1e-12
QUASICONVEX_TOL = 1e-9
CONCAVITY_FLOOR = 1e-12


@dataclass(frozen=True)
class RestrictionPoint:
    r: float
    p0: float
    p1: float
    pi_const: float
    v_const: float
    w_const: float
    v_const_prime: float

    def to_record(self) -> dict:
        return asdict(self)


def revealed_gap(s: Scenario) -> float:
    p0, p1 = solve_revealed(s).prices
    return p0 - p1


@lru_cache(maxsize=65536)
def _restricted_prices(s: Scenario, r: float) -> tuple[float, float]:
    w0, w1 = s.weights()
    b = s.b

    def objective(p1):
        return w1 * s.f1.cdf(p1) * (b - p1) + w0 * s.f0.cdf(p1 + r) * (b - p1 - r)

    def grad(p1: float) -> float:
        return w1 * principal_derivative(s.f1, b, p1) + w0 * principal_derivative(s.f0, b, p1 + r)

    p1, _ = maximize_scalar(objective, Bracket(0.0, b), s.solver.grid_n, s.solver.tol, vectorized=True, grad=grad)
    return p1 + r, p1


def solve_restricted(s: Scenario, r: float) -> RestrictionPoint:
    """Principal's best price pair subject to p0 = p1 + r."""
    gap = revealed_gap(s)
    if r < -RANGE_SLACK or r > gap + RANGE_SLACK:
        raise RangeError(f"r = {r!r} is outside the binding range [0, {gap!r}]")
    r = min(max(float(r), 0.0), gap)
    p0, p1 = _restricted_prices(s, r)
    w0, w1 = s.weights()
    pi = w0 * float(s.f0.cdf(p0)) * (s.b - p0) + w1 * float(s.f1.cdf(p1)) * (s.b - p1)
    v = w0 * float(s.f0.agent_partial_value(p0)) + w1 * float(s.f1.agent_partial_value(p1))
    try:
        dv = v_const_derivative(s, r)
    except (NumericalError, ContractLabError):
        dv = math.nan
    return RestrictionPoint(r, p0, p1, pi, v, pi + v, dv)


def v_const_derivative(s: Scenario, r: float) -> float:
    """d V_const / d r along the constrained optimum.

    With A = Pi_0''(p0), B = Pi_1''(p1) and w_x = F_x / Pi_x'',
    V' = theta (1-theta) A B (w0 - w1) / (theta B + (1-theta) A),
    evaluated in the form theta (1-theta) (F_0 B - F_1 A) / (theta B + (1-theta) A)
    that stays finite when one of A, B vanishes.
    If p1 sits at the corner 0, only p0 = r moves and V' = (1-theta) F_0(r).
    """
    p0, p1 = _restricted_prices(s, min(max(float(r), 0.0), revealed_gap(s)))
    w0, w1 = s.weights()
    if p1 == 0.0:
        return w0 * float(s.f0.cdf(p0))
    a = principal_second_derivative(s.f0, s.b, p0)
    b = principal_second_derivative(s.f1, s.b, p1)
    # Only the curvature of the one-dimensional problem in p1 has to be
    # negative; a point-mass environment contributes Pi'' = 0 exactly.
    combined = w1 * b + w0 * a
    if not (combined < -CONCAVITY_FLOOR and a <= 0 and b <= 0):
        raise NonConcaveAtOptimum(f"Pi'' not negative at the restricted optimum ({a!r}, {b!r})")
    F0 = float(s.f0.cdf(p0))
    F1 = float(s.f1.cdf(p1))
    return w0 * w1 * (F0 * b - F1 * a) / combined


def sweep_restriction(s: Scenario, n: int, *, workers: int = 1) -> list[RestrictionPoint]:
    if n < 2:
        raise ValueError("a restriction sweep needs n >= 2")
    gap = revealed_gap(s)
    rs = [gap * i / (n - 1) for i in range(n)]
    rs[-1] = gap
    return ordered_map(partial(solve_restricted, s), rs, workers)


def check_quasiconvexity(points: Sequence[RestrictionPoint], tol: float = QUASICONVEX_TOL) -> ConditionReport:
    """No interior point of the sweep may beat both neighbours by more than tol."""
    v = [pt.v_const for pt in points]
    bumps = [min(v[i] - v[i - 1], v[i] - v[i + 1]) for i in range(1, len(v) - 1)]
    worst = max(bumps) if bumps else -math.inf
    notes = []
    if bumps and worst > tol:
        i = bumps.index(worst) + 1
        notes.append(f"interior strict maximum at r = {points[i].r!r}")
    lhs = worst if bumps else 0.0
    return make_report("quasiconvexity", lhs, tol, tol - lhs, notes, grid_used=len(points))


def _drc_one(m, b: float, grid: np.ndarray) -> tuple[float, bool, bool, list[str]]:
    """(largest step of w, concave?, sufficient condition?, notes) for one environment."""
    curv = np.array([principal_second_derivative(m, b, p) for p in grid])
    notes = []
    concave = bool(np.all(curv < -CONCAVITY_FLOOR))
    if not concave:
        notes.append(f"ConcavityFailure: Pi'' >= 0 at p = {grid[np.argmax(curv)]!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.asarray(m.cdf(grid)) / curv
    worst = float(np.max(np.diff(w)))
    sigma = np.array([sigma_curvature(m, p) for p in grid])
    alpha = np.array([alpha_curvature(m, p) for p in grid])
    sufficient = bool(np.all(sigma <= 1.0) and np.all(alpha > 0) and np.all(np.diff(alpha) >= -STRICT_STEP))
    return worst, concave, sufficient, notes


def check_drc(s: Scenario, p_grid: Sequence[float] | None = None) -> ConditionReport:
    """w_x(p) = F_x(p) / Pi_x''(p) strictly decreasing in p for both environments.

    The default grid is 512 interior points of (0, min(b, 99.9% quantile)),
    chosen per environment.
    """
    notes: list[str] = []
    worst = -math.inf
    ok_pre = True
    extras: dict = {}
    used = 0
    for label, m in (("f0", s.f0), ("f1", s.f1)):
        if m.atoms:
            notes.append(f"{label} has a point mass; not applicable")
            ok_pre = False
            extras[f"{label}_sufficient_condition"] = False
            continue
        grid = check_grid(m, s.b) if p_grid is None else np.asarray(p_grid, dtype=float)
        used = max(used, len(grid))
        try:
            step, concave, sufficient, msgs = _drc_one(m, s.b, grid)
        except ContractLabError as exc:
            notes.append(f"{label}: {type(exc).__name__}: {exc}")
            ok_pre = False
            continue
        notes += [f"{label}: {msg}" for msg in msgs]
        ok_pre = ok_pre and concave
        worst = max(worst, step)
        extras[f"{label}_sufficient_condition"] = sufficient
    if worst == -math.inf:
        worst = 0.0
    return make_report("drc", worst, -STRICT_STEP, -STRICT_STEP - worst, notes, used, ok_pre, extras)

