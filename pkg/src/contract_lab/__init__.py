"""Numerical engine for a principal-agent contract where the agent chooses what the principal learns.

The agent's cost C depends on a binary environment X. The principal posts a
price for effort either blind to X (concealed), conditioned on X (revealed),
on a noisy copy of X (garbled), or with the price gap capped (restricted).
"""

from .contract import (
    Equilibrium,
    Scenario,
    SolverSettings,
    optimal_price,
    solve_concealed,
    solve_revealed,
    welfare,
)
from .distributions import Exponential, Mixture, PointMass, Uniform, Weibull, make_garbled_pair, make_mixture
from .errors import ConfigError, ContractLabError, DomainError, NumericalError
from .garbling import solve_garbled, sweep_garbling
from .numerics import Bracket, Tolerance, find_root, integrate, maximize_scalar
from .restriction import solve_restricted, sweep_restriction

__version__ = "0.1.0"

__all__ = [
    "Bracket",
    "ConfigError",
    "ContractLabError",
    "DomainError",
    "Equilibrium",
    "Exponential",
    "Mixture",
    "NumericalError",
    "PointMass",
    "Scenario",
    "SolverSettings",
    "Tolerance",
    "Uniform",
    "Weibull",
    "find_root",
    "integrate",
    "make_garbled_pair",
    "make_mixture",
    "maximize_scalar",
    "optimal_price",
    "solve_concealed",
    "solve_garbled",
    "solve_restricted",
    "solve_revealed",
    "sweep_garbling",
    "sweep_restriction",
    "welfare",
]
