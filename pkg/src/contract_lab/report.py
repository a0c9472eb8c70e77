"""The common envelope for every checked inequality, plus grid helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import CostModel

STRICT_STEP = 1e-12
DEFAULT_CHECK_GRID = 512


@dataclass
class ConditionReport:
    """Outcome of one inequality check.

    ``margin`` is oriented so that it is positive exactly when ``holds``.
    When preconditions fail, holds is False and a positive raw margin is
    clipped to 0 (the raw value stays in ``extras``).
    """

    name: str
    holds: bool
    lhs: float
    rhs: float
    margin: float
    notes: str = ""
    grid_used: int = 0
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def clean(v):
            if isinstance(v, float) and not math.isfinite(v):
                return None
            return v

        return {
            "name": self.name,
            "holds": self.holds,
            "lhs": clean(self.lhs),
            "rhs": clean(self.rhs),
            "margin": clean(self.margin),
            "notes": self.notes,
            "grid_used": self.grid_used,
            "extras": {k: clean(v) for k, v in self.extras.items()},
        }


def make_report(
    name: str,
    lhs: float,
    rhs: float,
    margin: float,
    notes: list[str] | str = "",
    grid_used: int = 0,
    preconditions_ok: bool = True,
    extras: dict | None = None,
) -> ConditionReport:
    extras = dict(extras or {})
    if isinstance(notes, list):
        notes = "; ".join(notes)
    lhs, rhs, margin = float(lhs), float(rhs), float(margin)
    if not (math.isfinite(lhs) and math.isfinite(rhs) and math.isfinite(margin)):
        notes = f"{notes}; non-finite side, verdict withheld" if notes else "non-finite side, verdict withheld"
        return ConditionReport(name, False, lhs, rhs, math.nan, notes, grid_used, extras)
    extras.setdefault("inequality_holds", margin > 0)
    if not preconditions_ok and margin > 0:
        extras["raw_margin"] = margin
        margin = 0.0
    return ConditionReport(name, margin > 0, lhs, rhs, margin, notes, grid_used, extras)


def check_grid(m: CostModel, b: float, n: int = DEFAULT_CHECK_GRID) -> np.ndarray:
    """n interior points of (0, min(b, 99.9% quantile of m))."""
    upper = min(b, m.quantile(0.999))
    return np.linspace(0.0, upper, n + 2)[1:-1]
