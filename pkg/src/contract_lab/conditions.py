"""Assumption and proposition checkers for a scenario.

Every checker returns a ConditionReport. The proposition checkers state
sufficient conditions only; a failed report says nothing about which regime
the agent prefers.
"""

from __future__ import annotations

import math

import numpy as np

from .contract import (
    Scenario,
    alpha_curvature,
    lerner_index,
    optimal_price,
    sigma_curvature,
    solve_concealed,
    solve_revealed,
)
from .distributions import CostModel, PointMass
from .errors import AtomPresent, ContractLabError, WrongAnchoring
from .report import DEFAULT_CHECK_GRID, STRICT_STEP, ConditionReport, check_grid, make_report
from .restriction import check_drc

CONCAVITY_THRESHOLD = 1e-8
WELFARE_SLACK = 1e-9
QUANTITY_SLACK = 1e-12


def check_mlrp(f0: CostModel, f1: CostModel, grid_n: int = DEFAULT_CHECK_GRID) -> ConditionReport:
    """f0/f1 strictly increasing over the common support.

    Checked through log f0 - log f1, which has the same monotonicity, on
    grid_n points capped at the larger of the two 99.9% quantiles. Points
    where either density underflows to zero are skipped.
    """
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    if f0.atoms or f1.atoms:
        raise AtomPresent("likelihood ratios need atomless distributions")
    lo = max(f0.support[0], f1.support[0])
    hi = min(f0.support[1], f1.support[1], max(f0.quantile(0.999), f1.quantile(0.999)))
    notes = []
    if f0.support != f1.support:
        notes.append(f"supports differ; ratio checked on the overlap ({lo:g}, {hi:g})")
    if not hi > lo:
        notes.append("supports do not overlap")
        return make_report("mlrp", math.nan, STRICT_STEP, math.nan, notes, 0)
    grid = np.linspace(lo, hi, grid_n + 2)[1:-1]
    d0 = np.asarray(f0.pdf(grid))
    d1 = np.asarray(f1.pdf(grid))
    keep = (d0 > 0) & (d1 > 0) & np.isfinite(d0) & np.isfinite(d1)
    if keep.sum() < 2:
        notes.append("densities vanish on the grid")
        return make_report("mlrp", math.nan, STRICT_STEP, math.nan, notes, int(keep.sum()))
    log_ratio = np.log(d0[keep]) - np.log(d1[keep])
    smallest = float(np.min(np.diff(log_ratio)))
    return make_report(
        "mlrp",
        smallest,
        STRICT_STEP,
        smallest - STRICT_STEP,
        notes,
        int(keep.sum()),
    )


def check_concavity(m: CostModel, b: float, grid_n: int = DEFAULT_CHECK_GRID) -> ConditionReport:
    """Pi(p) = F(p)(b - p) strictly concave, by second differences on (0, min(b, q_0.999))."""
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    if m.atoms:
        return make_report("concavity", math.nan, -CONCAVITY_THRESHOLD, math.nan, "point mass; not applicable", 0)
    grid = check_grid(m, b, grid_n)
    h = min(1e-3 * grid[-1], 0.5 * grid[0])

    def pi(p):
        return np.asarray(m.cdf(p)) * (b - p)

    second = (pi(grid + h) - 2.0 * pi(grid) + pi(grid - h)) / (h * h)
    worst = float(np.max(second))
    notes = []
    if worst >= -CONCAVITY_THRESHOLD:
        notes.append(f"Pi'' >= -1e-8 near p = {grid[int(np.argmax(second))]!r}")
    return make_report("concavity", worst, -CONCAVITY_THRESHOLD, -CONCAVITY_THRESHOLD - worst, notes, grid_n)


def _require_zero_anchor(s: Scenario) -> None:
    if not (isinstance(s.f1, PointMass) and s.f1.atom == 0.0):
        raise WrongAnchoring("this check needs f1 = PointMass(0)")


def psi(theta: float) -> float:
    """Threshold factor for exponential f0 with a zero-cost f1: concealment if mean < b psi(theta)."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0,1)")
    a = 1.0 / (1.0 - theta)
    return theta / (a ** (1.0 / theta) - a ** ((1.0 - theta) / theta) - theta)


def _concave_cdf_checks(m: CostModel, b: float) -> tuple[bool, bool]:
    grid = check_grid(m, b)
    dens = np.asarray(m.pdf(grid))
    ratio = np.asarray(m.cdf(grid)) / dens
    concave_cdf = bool(np.all(np.diff(dens) <= 0.0))
    ratio_increasing = bool(np.all(np.diff(ratio) > STRICT_STEP))
    return concave_cdf, ratio_increasing


def check_prop1(s: Scenario) -> ConditionReport:
    """Concealment condition with a zero-cost environment X=1.

    theta > (1-theta)/eta((1-theta) p0*) - 1/eta_0(p0*), where
    eta(p) = p (1-theta) f0(p) / ((1-theta) F0(p) + theta) and eta_0 = p f0 / F0.
    """
    _require_zero_anchor(s)
    th = s.theta
    p0, _ = optimal_price(s.f0, s.b, s.solver)
    f0 = s.f0

    def eta(p: float) -> float:
        return p * (1.0 - th) * f0.pdf(p) / ((1.0 - th) * f0.cdf(p) + th)

    def eta0(p: float) -> float:
        return p * f0.pdf(p) / f0.cdf(p)

    rhs = (1.0 - th) / eta((1.0 - th) * p0) - 1.0 / eta0(p0)
    concave_cdf, ratio_increasing = _concave_cdf_checks(f0, s.b)
    notes = ["sufficiency only: holds => V_con > V_rev"]
    if not concave_cdf:
        notes.append("precondition failed: F0 is not concave on the grid")
    if not ratio_increasing:
        notes.append("precondition failed: F0/f0 is not strictly increasing on the grid")
    return make_report(
        "prop1_zero_cost_concealment",
        th,
        rhs,
        th - rhs,
        notes,
        DEFAULT_CHECK_GRID,
        concave_cdf and ratio_increasing,
        {"p0_star": p0, "cdf_concave": concave_cdf, "hazard_ratio_increasing": ratio_increasing},
    )


def path_grid(s: Scenario, n: int = DEFAULT_CHECK_GRID) -> np.ndarray | None:
    """Prices visited by the restriction path, [p1*, p0*]; None if p0* <= p1*."""
    p0, p1 = solve_revealed(s).prices
    if not p0 > p1:
        return None
    grid = np.linspace(p1, p0, n)
    return grid[grid > 0.0]


def _prerequisites(s: Scenario) -> tuple[bool, list[str], dict]:
    """Concavity and DRC where the sufficiency argument uses them.

    The argument only differentiates along the restriction path, so both are
    checked on [p1*, p0*] and the path must be nonempty (p0* > p1*). The
    whole-range concavity verdicts are recorded as well.
    """
    notes = []
    extras = {
        "concavity_f0_global": check_concavity(s.f0, s.b).holds,
        "concavity_f1_global": check_concavity(s.f1, s.b).holds,
    }
    grid = path_grid(s)
    if grid is None or len(grid) < 2:
        notes.append("prerequisite failed: revealed prices not ordered p0* > p1*")
        return False, notes, {**extras, "ordered_prices": False, "drc_on_path": False}
    drc = check_drc(s, grid)
    if not drc.holds:
        notes.append("prerequisite failed: concavity or DRC on [p1*, p0*]")
        notes += [f"  {n}" for n in drc.notes]
    return drc.holds, notes, {**extras, "ordered_prices": True, "drc_on_path": drc.holds}


def check_prop2(s: Scenario) -> ConditionReport:
    """(1-theta)(b-p0*)/(2-sigma_0(p0*)) < theta(b-p1*)/(2-sigma_1(p1*)) at the revealed prices."""
    p0, p1 = solve_revealed(s).prices
    th = s.theta
    lhs = (1.0 - th) * (s.b - p0) / (2.0 - sigma_curvature(s.f0, p0))
    rhs = th * (s.b - p1) / (2.0 - sigma_curvature(s.f1, p1))
    ok, notes, extras = _prerequisites(s)
    notes.insert(0, "sufficient-for-concealment: holds => V_con > V_rev")
    return make_report("prop2_concealment", lhs, rhs, rhs - lhs, notes, DEFAULT_CHECK_GRID, ok, extras)


def check_prop3(s: Scenario) -> ConditionReport:
    """(2 + L alpha_1)/(2 + L alpha_0) > (theta F1/f1)/((1-theta) F0/f0) at the concealed price."""
    p = solve_concealed(s).prices[0]
    th = s.theta
    L = lerner_index(s.b, p)
    lhs = (2.0 + L * alpha_curvature(s.f1, p)) / (2.0 + L * alpha_curvature(s.f0, p))
    rhs = (th * s.f1.cdf(p) / s.f1.pdf(p)) / ((1.0 - th) * s.f0.cdf(p) / s.f0.pdf(p))
    ok, notes, extras = _prerequisites(s)
    notes.insert(0, "sufficient-for-revelation: holds => V_con < V_rev")
    return make_report("prop3_revelation", lhs, rhs, lhs - rhs, notes, DEFAULT_CHECK_GRID, ok, extras)


def check_quantity_lemma(s: Scenario) -> ConditionReport:
    """Welfare can rise under revelation only if the completion quantity rises.

    The audit passes unless W_rev > W_con while quantity did not increase.
    lhs is W_rev - W_con and rhs is q_rev - q_con.
    """
    con, rev = solve_concealed(s), solve_revealed(s)
    dw = rev.welfare - con.welfare
    dq = rev.quantity - con.quantity
    margin = max(WELFARE_SLACK - dw, dq + QUANTITY_SLACK)
    notes = [f"quantity concealed {con.quantity!r}, revealed {rev.quantity!r}"]
    return make_report(
        "quantity_lemma",
        dw,
        dq,
        margin,
        notes,
        extras={"w_con": con.welfare, "w_rev": rev.welfare, "q_con": con.quantity, "q_rev": rev.quantity},
    )


def applicable_checks(s: Scenario) -> list[ConditionReport]:
    """Every checker that applies to the scenario, errors recorded as failed reports."""
    from .garbling import check_garbling_general, check_garbling_zerocost

    anchored = isinstance(s.f1, PointMass) and s.f1.atom == 0.0
    atomless = not (s.f0.atoms or s.f1.atoms)
    half = s.theta == 0.5
    checks = []
    if atomless:
        checks.append(("mlrp", lambda: check_mlrp(s.f0, s.f1)))
    checks.append(("concavity_f0", lambda: _renamed(check_concavity(s.f0, s.b), "concavity_f0")))
    checks.append(("concavity_f1", lambda: _renamed(check_concavity(s.f1, s.b), "concavity_f1")))
    checks.append(("drc", lambda: check_drc(s)))
    if anchored:
        checks.append(("prop1_zero_cost_concealment", lambda: check_prop1(s)))
    if atomless:
        checks.append(("prop2_concealment", lambda: check_prop2(s)))
        checks.append(("prop3_revelation", lambda: check_prop3(s)))
    if anchored and half:
        checks.append(("garbling_zerocost", lambda: check_garbling_zerocost(s)))
    if half:
        checks.append(("garbling_general", lambda: check_garbling_general(s)))
    checks.append(("quantity_lemma", lambda: check_quantity_lemma(s)))
    out = []
    for name, run in checks:
        try:
            out.append(run())
        except ContractLabError as exc:
            out.append(make_report(name, math.nan, math.nan, math.nan, f"{type(exc).__name__}: {exc}"))
    return out


def _renamed(r: ConditionReport, name: str) -> ConditionReport:
    r.name = name
    return r
