"""Exception hierarchy.

Everything raised on purpose derives from ``ContractLabError`` so the CLI can
map failures to exit codes: configuration problems to 2, numerical ones to 3.
"""

from __future__ import annotations


class ContractLabError(Exception):
    pass


class ConfigError(ContractLabError, ValueError):
    """Malformed or out-of-range user input."""


class DomainError(ContractLabError, ValueError):
    """An operation was called outside the inputs it is defined for."""


class BadWeights(DomainError):
    pass


class WrongAnchoring(DomainError):
    """A zero-cost anchored check was given a scenario whose f1 is not PointMass(0)."""


class RangeError(DomainError):
    pass


class AtomPresent(DomainError):
    pass


class ZeroPrice(DomainError):
    pass


class NumericalError(ContractLabError, ArithmeticError):
    pass


class NonConvergence(NumericalError):
    pass


class NoSignChange(NumericalError):
    pass


class InvalidObjective(NumericalError):
    pass


class NonConcaveAtOptimum(NumericalError):
    pass


class ZeroDensity(NumericalError):
    pass


class ZeroQuantity(NumericalError):
    pass


class NotDifferentiable(NumericalError):
    pass


class AtomAtPoint(NumericalError):
    """A density was requested exactly at a point mass."""


class DegeneratePosterior(NumericalError):
    pass
