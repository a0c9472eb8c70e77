"""Utility trajectories over eps and r, exponential-mean grids, and the surplus ceiling."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Sequence

import numpy as np

from .contract import Scenario, solve_concealed, solve_revealed, welfare_integral
from .distributions import Exponential
from .garbling import sweep_garbling
from .parallel import ordered_map
from .restriction import sweep_restriction


@dataclass(frozen=True)
class TrajectoryPoint:
    param: float
    v: float
    pi: float
    w: float


@dataclass
class Trajectory:
    scenario_id: str
    kind: str
    points: list[TrajectoryPoint]
    anchors: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "kind": self.kind,
            "points": [asdict(p) for p in self.points],
            "anchors": {k: list(v) if isinstance(v, tuple) else v for k, v in self.anchors.items()},
        }


@dataclass(frozen=True)
class RevelationCell:
    lambda0: float
    lambda1: float
    v_rev_minus_v_con: float
    w_con: float
    w_rev: float

    def to_record(self) -> dict:
        return asdict(self)


def efficient_welfare(s: Scenario) -> float:
    """E[(b - C)^+]: surplus when the task is done exactly when C <= b."""
    return welfare_integral(s, s.b, s.b)


def anchors(s: Scenario) -> dict:
    con, rev = solve_concealed(s), solve_revealed(s)
    return {
        "A": (con.agent_utility, con.principal_utility),
        "F": (rev.agent_utility, rev.principal_utility),
        "w_max": efficient_welfare(s),
    }


def build_trajectories(
    s: Scenario,
    n: int = 101,
    scenario_id: str = "",
    *,
    gamma: float | None = None,
    workers: int = 1,
) -> tuple[Trajectory, Trajectory]:
    """(garbling, restriction) paths of (V, Pi, W) sharing the concealed/revealed anchors.

    The garbling noise defaults to gamma = theta so that eps = 0 is exactly
    the concealed regime.
    """
    if n < 11:
        raise ValueError("trajectories need n >= 11")
    g = s.theta if gamma is None else gamma
    shared = anchors(s)
    garb = sweep_garbling(s, g, np.linspace(0.0, 1.0, n), with_fd=False, workers=workers)
    rest = sweep_restriction(s, n, workers=workers)
    return (
        Trajectory(scenario_id, "garbling", [TrajectoryPoint(p.eps, p.v_garb, p.pi_garb, p.w_garb) for p in garb], dict(shared)),
        Trajectory(scenario_id, "restriction", [TrajectoryPoint(p.r, p.v_const, p.pi_const, p.w_const) for p in rest], dict(shared)),
    )


def _revelation_cell(b: float, theta: float, pair: tuple[float, float]) -> RevelationCell:
    l0, l1 = pair
    s = Scenario(b, theta, Exponential(l0), Exponential(l1))
    con, rev = solve_concealed(s), solve_revealed(s)
    return RevelationCell(l0, l1, rev.agent_utility - con.agent_utility, con.welfare, rev.welfare)


def grid_revelation_preference(
    b: float,
    theta: float,
    lambda0_grid: Sequence[float],
    lambda1_grid: Sequence[float],
    *,
    workers: int = 1,
) -> list[RevelationCell]:
    """V_rev - V_con for exponential-mean pairs, row-major in lambda0 then lambda1."""
    if any(x <= 0 for x in [*lambda0_grid, *lambda1_grid]):
        raise ValueError("exponential means must be positive")
    pairs = [(float(a), float(c)) for a in lambda0_grid for c in lambda1_grid]
    return ordered_map(partial(_revelation_cell, b, theta), pairs, workers)


def sign_changes(values: Sequence[float], zero_tol: float = 0.0) -> int:
    """Number of strict sign flips in a row, ignoring entries within zero_tol of 0."""
    signs = [np.sign(v) for v in values if abs(v) > zero_tol]
    return sum(1 for a, c in zip(signs, signs[1:]) if a != c)
