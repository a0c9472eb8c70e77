"""Concealed and revealed equilibria, utilities, and curvature primitives.

The principal posts a transfer p and the agent works iff its cost C <= p.
Per cost model m and task value b:

    principal  Pi(p) = F(p) (b - p)
    agent      V(p)  = integral_0^p F

In the concealed regime one price is set against the theta-marginal of the
two environment models; in the revealed regime each environment gets its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .distributions import CostModel, PointMass, expected_cost_below, make_mixture
from .errors import ConfigError, NumericalError, ZeroDensity, ZeroPrice, ZeroQuantity
from .numerics import Bracket, Tolerance, maximize_scalar

WELFARE_AGREEMENT = 1e-8


@dataclass(frozen=True)
class SolverSettings:
    """Knobs for every price optimization done on behalf of a scenario."""

    grid_n: int = 2048
    tol: Tolerance = field(default_factory=Tolerance)

    def __post_init__(self) -> None:
        if self.grid_n < 3:
            raise ConfigError("grid_n must be at least 3")


@dataclass(frozen=True)
class Scenario:
    b: float
    theta: float
    f0: CostModel
    f1: CostModel
    solver: SolverSettings = field(default_factory=SolverSettings)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.b) and self.b > 0):
            raise ConfigError("b must be a positive finite number")
        if not (0.0 < self.theta < 1.0):
            raise ConfigError("theta must lie in (0,1)")
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def marginal(self) -> CostModel:
        return make_mixture([(1.0 - self.theta, self.f0), (self.theta, self.f1)])

    def weights(self) -> tuple[float, float]:
        return 1.0 - self.theta, self.theta


@dataclass(frozen=True)
class Equilibrium:
    regime: str
    param: float | None
    prices: tuple[float, ...]
    principal_utility: float
    agent_utility: float
    welfare: float
    quantity: float

    def to_record(self) -> dict:
        p0 = self.prices[0]
        p1 = self.prices[1] if len(self.prices) > 1 else self.prices[0]
        return {
            "regime": self.regime,
            "param": self.param,
            "p0": p0,
            "p1": p1,
            "principal_utility": self.principal_utility,
            "agent_utility": self.agent_utility,
            "welfare": self.welfare,
            "quantity": self.quantity,
        }


def principal_utility(m: CostModel, b: float, p):
    return m.cdf(p) * (b - p)


def agent_utility(m: CostModel, p):
    return m.agent_partial_value(p)


def principal_derivative(m: CostModel, b: float, p: float) -> float:
    """Pi'(p) = f(p)(b - p) - F(p)."""
    return m.pdf(p) * (b - p) - m.cdf(p)


def principal_second_derivative(m: CostModel, b: float, p: float) -> float:
    """Pi''(p) = f'(p)(b - p) - 2 f(p)."""
    return m.pdf_derivative(p) * (b - p) - 2.0 * m.pdf(p)


@lru_cache(maxsize=65536)
def optimal_price(m: CostModel, b: float, solver: SolverSettings = SolverSettings()) -> tuple[float, float]:
    """Smallest maximizer of F(p)(b - p) over [0, min(b, top of support)].

    A lone point mass at c0 is priced in closed form: p = c0 if c0 < b, else
    every price earns zero and the smallest, 0, is returned.
    """
    if isinstance(m, PointMass):
        p = m.atom if m.atom < b else 0.0
        return p, float(principal_utility(m, b, p))
    hi = min(b, m.support[1])
    if hi <= 0.0:
        return 0.0, float(principal_utility(m, b, 0.0))

    def grad(p: float) -> float:
        return principal_derivative(m, b, p)

    return maximize_scalar(
        lambda p: m.cdf(p) * (b - p),
        Bracket(0.0, hi),
        solver.grid_n,
        solver.tol,
        vectorized=True,
        grad=grad,
    )


def _equilibrium(regime: str, param, prices, parts) -> Equilibrium:
    """Aggregate (weight, model, price) parts into an Equilibrium."""
    pi = v = q = 0.0
    for w, m, b, p in parts:
        pi += w * float(principal_utility(m, b, p))
        v += w * float(m.agent_partial_value(p))
        q += w * float(m.cdf(p))
    return Equilibrium(regime, param, tuple(float(x) for x in prices), pi, v, pi + v, q)


@lru_cache(maxsize=4096)
def solve_concealed(s: Scenario) -> Equilibrium:
    m = s.marginal
    p, _ = optimal_price(m, s.b, s.solver)
    return _equilibrium("concealed", None, (p,), [(1.0, m, s.b, p)])


@lru_cache(maxsize=4096)
def solve_revealed(s: Scenario) -> Equilibrium:
    p0, _ = optimal_price(s.f0, s.b, s.solver)
    p1, _ = optimal_price(s.f1, s.b, s.solver)
    w0, w1 = s.weights()
    return _equilibrium("revealed", None, (p0, p1), [(w0, s.f0, s.b, p0), (w1, s.f1, s.b, p1)])


def welfare_sum(s: Scenario, p0: float, p1: float) -> float:
    w0, w1 = s.weights()
    total = 0.0
    for w, m, p in ((w0, s.f0, p0), (w1, s.f1, p1)):
        total += w * (float(principal_utility(m, s.b, p)) + float(m.agent_partial_value(p)))
    return total


def welfare_integral(s: Scenario, p0: float, p1: float) -> float:
    """E[(b - C) 1(C <= p_X)] evaluated as b F(p) - E[C; C <= p] by quadrature."""
    w0, w1 = s.weights()
    return sum(
        w * (s.b * float(m.cdf(p)) - expected_cost_below(m, p))
        for w, m, p in ((w0, s.f0, p0), (w1, s.f1, p1))
    )


def welfare(s: Scenario, *prices: float) -> float:
    """Total surplus at one common price or at (p0, p1).

    Computed as principal plus agent utility and again as an expected surplus
    integral; a disagreement beyond 1e-8 raises NumericalError.
    """
    if len(prices) == 1:
        p0 = p1 = prices[0]
    elif len(prices) == 2:
        p0, p1 = prices
    else:
        raise TypeError("welfare takes one or two prices")
    if p0 < 0 or p1 < 0:
        raise ValueError("prices must be nonnegative")
    by_sum = welfare_sum(s, p0, p1)
    by_integral = welfare_integral(s, p0, p1)
    if abs(by_sum - by_integral) > WELFARE_AGREEMENT:
        raise NumericalError(f"welfare routes disagree: sum {by_sum!r} vs integral {by_integral!r}")
    return by_sum


def foc_residual(m: CostModel, b: float, p: float) -> float:
    """p + F(p)/f(p) - b, zero at an interior optimum."""
    f = m.pdf(p)
    if f <= 0:
        raise ZeroDensity(f"density vanishes at {p!r}")
    return p + m.cdf(p) / f - b


def elasticity(m: CostModel, p: float) -> float:
    F = m.cdf(p)
    if F <= 0:
        raise ZeroQuantity(f"no completion at price {p!r}")
    return p * m.pdf(p) / F


def _density(m: CostModel, p: float) -> float:
    f = m.pdf(p)
    if not f > 0:
        raise ZeroDensity(f"density vanishes at {p!r}")
    return f


def sigma_curvature(m: CostModel, p: float) -> float:
    """F f' / f^2, curvature of the inverse quantity function."""
    f = _density(m, p)
    return m.cdf(p) * m.pdf_derivative(p) / (f * f)


def alpha_curvature(m: CostModel, p: float) -> float:
    """-p f' / f, curvature of the quantity function."""
    f = _density(m, p)
    return -p * m.pdf_derivative(p) / f


def lerner_index(b: float, p: float) -> float:
    if p <= 0:
        raise ZeroPrice("the Lerner index needs a positive price")
    return (b - p) / p

