"""Cost distributions and the mixtures built from them.

Every model is an immutable, hashable dataclass whose methods accept a float
or a numpy array and answer in kind. Quantities needed by the equilibrium
formulas:

    cdf F(c), pdf f(c), pdf_derivative f'(c),
    agent_partial_value V(p) = integral_0^p F,
    restricted_mean g(p) = integral_0^p (1 - F) = p - V(p).

Effort is exerted when C <= p, so ``cdf`` counts atom mass at p while an atom
at exactly p adds nothing to V (the agent's surplus there is zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Union

import numpy as np
from scipy import special

from .errors import AtomAtPoint, BadWeights, ConfigError, DegeneratePosterior, NotDifferentiable
from .numerics import Bracket, Tolerance, find_root, integrate

ArrayLike = Union[float, np.ndarray]

# Inside this distance of a uniform support endpoint f' does not exist.
KINK_WINDOW = 1e-9


def _scalar(x: Any) -> bool:
    return isinstance(x, (float, int)) and not isinstance(x, bool)


def _out(x: Any, value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(x) == 0 else value


def _positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be a positive finite number, got {value!r}")


def _as_floats(obj: Any, *names: str) -> None:
    for n in names:
        object.__setattr__(obj, n, float(getattr(obj, n)))


class CostModel:
    """Interface shared by all cost distributions."""

    def cdf(self, c: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def pdf(self, c: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def pdf_derivative(self, c: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def agent_partial_value(self, p: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def restricted_mean(self, p: ArrayLike) -> ArrayLike:
        x = np.asarray(p, dtype=float)
        return _out(p, x - np.asarray(self.agent_partial_value(x)))

    def quantile(self, q: float) -> float:
        raise NotImplementedError

    @property
    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    @property
    def atoms(self) -> tuple[tuple[float, float], ...]:
        return ()

    @property
    def expectation(self) -> float:
        raise NotImplementedError

    @property
    def density_bounded(self) -> bool:
        return True

    def leaves(self) -> Iterator[tuple[float, "CostModel"]]:
        """(weight, family) pairs of the fully flattened model."""
        yield 1.0, self

    def breakpoints(self) -> tuple[float, ...]:
        pts: set[float] = set()
        for _, leaf in self.leaves():
            lo, hi = leaf.support
            pts.update(x for x in (lo, hi) if math.isfinite(x))
        return tuple(sorted(pts))


@dataclass(frozen=True)
class Exponential(CostModel):
    mean: float

    def __post_init__(self) -> None:
        _positive("exponential mean", self.mean)
        _as_floats(self, "mean")

    def cdf(self, c):
        if _scalar(c):
            return -math.expm1(-c / self.mean) if c >= 0 else 0.0
        x = np.asarray(c, dtype=float)
        return _out(c, np.where(x >= 0, -np.expm1(-np.maximum(x, 0.0) / self.mean), 0.0))

    def pdf(self, c):
        if _scalar(c):
            return math.exp(-c / self.mean) / self.mean if c >= 0 else 0.0
        x = np.asarray(c, dtype=float)
        return _out(c, np.where(x >= 0, np.exp(-np.maximum(x, 0.0) / self.mean) / self.mean, 0.0))

    def pdf_derivative(self, c):
        if _scalar(c):
            return -self.pdf(c) / self.mean
        x = np.asarray(c, dtype=float)
        return _out(c, -np.asarray(self.pdf(x)) / self.mean)

    def agent_partial_value(self, p):
        x = np.maximum(np.asarray(p, dtype=float), 0.0)
        return _out(p, x - self.mean * np.asarray(self.cdf(x)))

    def restricted_mean(self, p):
        x = np.maximum(np.asarray(p, dtype=float), 0.0)
        return _out(p, self.mean * np.asarray(self.cdf(x)))

    def quantile(self, q: float) -> float:
        return -self.mean * math.log1p(-q)

    @property
    def support(self):
        return 0.0, math.inf

    @property
    def expectation(self) -> float:
        return self.mean


@dataclass(frozen=True)
class Weibull(CostModel):
    scale: float
    shape: float

    def __post_init__(self) -> None:
        _positive("weibull scale", self.scale)
        _positive("weibull shape", self.shape)
        _as_floats(self, "scale", "shape")

    def cdf(self, c):
        if _scalar(c):
            return -math.expm1(-((c / self.scale) ** self.shape)) if c > 0 else 0.0
        x = np.maximum(np.asarray(c, dtype=float), 0.0)
        return _out(c, -np.expm1(-((x / self.scale) ** self.shape)))

    def pdf(self, c):
        k, lam = self.shape, self.scale
        if _scalar(c) and c > 0:
            z = c / lam
            return (k / lam) * z ** (k - 1.0) * math.exp(-(z**k))
        x = np.asarray(c, dtype=float)
        z = np.maximum(x, 0.0) / lam
        with np.errstate(divide="ignore"):
            val = (k / lam) * z ** (k - 1.0) * np.exp(-(z**k))
        return _out(c, np.where(x >= 0, val, 0.0))

    def pdf_derivative(self, c):
        # f'(c) = (k/lam^2) z^(k-2) (k-1 - k z^k) exp(-z^k)
        x = np.asarray(c, dtype=float)
        k, lam = self.shape, self.scale
        z = np.maximum(x, 0.0) / lam
        with np.errstate(divide="ignore", invalid="ignore"):
            val = (k / lam**2) * z ** (k - 2.0) * (k - 1.0 - k * z**k) * np.exp(-(z**k))
        if k == 1.0:
            val = np.where(z == 0, -1.0 / lam**2, val)
        return _out(c, np.where(x >= 0, val, 0.0))

    def restricted_mean(self, p):
        # lam * Gamma(1 + 1/k) * P(1/k, (p/lam)^k), the regularized lower incomplete gamma
        x = np.maximum(np.asarray(p, dtype=float), 0.0)
        k = self.shape
        val = self.scale * special.gamma(1.0 + 1.0 / k) * special.gammainc(1.0 / k, (x / self.scale) ** k)
        return _out(p, val)

    def agent_partial_value(self, p):
        x = np.maximum(np.asarray(p, dtype=float), 0.0)
        return _out(p, x - np.asarray(self.restricted_mean(x)))

    def quantile(self, q: float) -> float:
        return self.scale * (-math.log1p(-q)) ** (1.0 / self.shape)

    @property
    def support(self):
        return 0.0, math.inf

    @property
    def expectation(self) -> float:
        return self.scale * math.gamma(1.0 + 1.0 / self.shape)

    @property
    def density_bounded(self) -> bool:
        return self.shape >= 1.0


@dataclass(frozen=True)
class Uniform(CostModel):
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ConfigError("uniform bounds must be finite")
        if self.lo < 0:
            raise ConfigError("uniform lower bound must be nonnegative")
        if not self.lo < self.hi:
            raise ConfigError("uniform needs lo < hi")
        _as_floats(self, "lo", "hi")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def cdf(self, c):
        if _scalar(c):
            return min(max((c - self.lo) / self.width, 0.0), 1.0)
        x = np.asarray(c, dtype=float)
        return _out(c, np.clip((x - self.lo) / self.width, 0.0, 1.0))

    def pdf(self, c):
        if _scalar(c):
            return 1.0 / self.width if self.lo <= c <= self.hi else 0.0
        x = np.asarray(c, dtype=float)
        return _out(c, np.where((x >= self.lo) & (x <= self.hi), 1.0 / self.width, 0.0))

    def pdf_derivative(self, c):
        x = np.asarray(c, dtype=float)
        near = (np.abs(x - self.lo) < KINK_WINDOW) | (np.abs(x - self.hi) < KINK_WINDOW)
        if np.any(near):
            raise NotDifferentiable(f"uniform density jumps at {self.lo} and {self.hi}")
        return _out(c, np.zeros_like(x))

    def agent_partial_value(self, p):
        x = np.asarray(p, dtype=float)
        w = self.width
        inside = (x - self.lo) ** 2 / (2.0 * w)
        above = 0.5 * w + (x - self.hi)
        val = np.where(x <= self.lo, 0.0, np.where(x < self.hi, inside, above))
        return _out(p, val)

    def quantile(self, q: float) -> float:
        return self.lo + q * self.width

    @property
    def support(self):
        return self.lo, self.hi

    @property
    def expectation(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class PointMass(CostModel):
    atom: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.atom) and self.atom >= 0):
            raise ConfigError("point mass location must be finite and nonnegative")
        _as_floats(self, "atom")

    def cdf(self, c):
        if _scalar(c):
            return 1.0 if c >= self.atom else 0.0
        x = np.asarray(c, dtype=float)
        return _out(c, np.where(x >= self.atom, 1.0, 0.0))

    def _no_density_at_atom(self, x: np.ndarray) -> None:
        if np.any(x == self.atom):
            raise AtomAtPoint(f"no density at the point mass {self.atom}")

    def pdf(self, c):
        x = np.asarray(c, dtype=float)
        self._no_density_at_atom(x)
        return _out(c, np.zeros_like(x))

    def pdf_derivative(self, c):
        x = np.asarray(c, dtype=float)
        self._no_density_at_atom(x)
        return _out(c, np.zeros_like(x))

    def agent_partial_value(self, p):
        x = np.asarray(p, dtype=float)
        return _out(p, np.maximum(x - self.atom, 0.0))

    def quantile(self, q: float) -> float:
        return self.atom

    @property
    def support(self):
        return self.atom, self.atom

    @property
    def atoms(self):
        return ((self.atom, 1.0),)

    @property
    def expectation(self) -> float:
        return self.atom


@dataclass(frozen=True)
class Mixture(CostModel):
    components: tuple[tuple[float, CostModel], ...]

    def _combine(self, method: str, c):
        if _scalar(c):
            return float(sum(w * getattr(m, method)(c) for w, m in self.components))
        x = np.asarray(c, dtype=float)
        total = np.zeros_like(x)
        for w, m in self.components:
            total = total + w * np.asarray(getattr(m, method)(x))
        return _out(c, total)

    def cdf(self, c):
        return self._combine("cdf", c)

    def pdf(self, c):
        return self._combine("pdf", c)

    def pdf_derivative(self, c):
        return self._combine("pdf_derivative", c)

    def agent_partial_value(self, p):
        return self._combine("agent_partial_value", p)

    def restricted_mean(self, p):
        return self._combine("restricted_mean", p)

    def quantile(self, q: float) -> float:
        lo, _ = self.support
        hi = max(m.quantile(q) for _, m in self.components)
        if hi <= lo or self.cdf(lo) >= q:
            return lo
        return find_root(lambda c: self.cdf(c) - q, Bracket(lo, hi), Tolerance(abs_tol=1e-13))

    @property
    def support(self):
        los, his = zip(*(m.support for _, m in self.components))
        return min(los), max(his)

    @property
    def atoms(self):
        merged: dict[float, float] = {}
        for w, m in self.components:
            for loc, mass in m.atoms:
                merged[loc] = merged.get(loc, 0.0) + w * mass
        return tuple(sorted(merged.items()))

    @property
    def expectation(self) -> float:
        return sum(w * m.expectation for w, m in self.components)

    @property
    def density_bounded(self) -> bool:
        return all(m.density_bounded for _, m in self.components)

    def leaves(self):
        for w, m in self.components:
            for v, leaf in m.leaves():
                yield w * v, leaf


WEIGHT_TOL = 1e-12


def make_mixture(weights_and_models: Iterable[tuple[float, CostModel]]) -> CostModel:
    """Convex combination of cost models.

    Zero-weight components are dropped, and a lone survivor is returned
    unchanged, so for example the no-noise garbling posterior is exactly the
    environment model rather than a one-term mixture of it.
    """
    pairs = [(float(w), m) for w, m in weights_and_models]
    if not pairs:
        raise BadWeights("a mixture needs at least one component")
    for w, _ in pairs:
        if not (0.0 <= w <= 1.0):
            raise BadWeights(f"mixture weight {w!r} outside [0, 1]")
    total = sum(w for w, _ in pairs)
    if abs(total - 1.0) > WEIGHT_TOL:
        raise BadWeights(f"mixture weights sum to {total!r}, not 1")
    kept = tuple((w, m) for w, m in pairs if w > 0.0)
    if len(kept) == 1:
        return kept[0][1]
    return Mixture(kept)


def make_garbled_pair(
    f0: CostModel, f1: CostModel, theta: float, gamma: float, eps: float
) -> tuple[CostModel, CostModel, float]:
    """Posterior cost models given the randomized-response signal Y.

    Y reports X with probability eps and an independent Bernoulli(gamma) draw
    otherwise. Returns (G_0, G_1, P(Y=1)).
    """
    for name, v in (("theta", theta), ("gamma", gamma), ("eps", eps)):
        if not 0.0 <= v <= 1.0:
            raise ConfigError(f"{name} must lie in [0,1], got {v!r}")
    y0_given_x0 = eps + (1.0 - eps) * (1.0 - gamma)
    y0_given_x1 = (1.0 - eps) * (1.0 - gamma)
    joint = {
        (0, 0): (1.0 - theta) * y0_given_x0,
        (0, 1): theta * y0_given_x1,
        (1, 0): (1.0 - theta) * (1.0 - y0_given_x0),
        (1, 1): theta * (1.0 - y0_given_x1),
    }
    posteriors = []
    for y in (0, 1):
        py = joint[(y, 0)] + joint[(y, 1)]
        if py <= 0.0:
            raise DegeneratePosterior(f"P(Y={y}) = 0, posterior undefined")
        w1 = joint[(y, 1)] / py
        posteriors.append(make_mixture([(1.0 - w1, f0), (w1, f1)]))
    prob_y1 = joint[(1, 0)] + joint[(1, 1)]
    return posteriors[0], posteriors[1], prob_y1


def expected_cost_below(m: CostModel, p: float, tol: Tolerance = Tolerance(abs_tol=1e-12, rel_tol=1e-12)) -> float:
    """E[C; C <= p] by quadrature of c*f(c), plus atoms at or below p.

    Deliberately independent of the closed-form partial values so welfare can
    be cross-checked through two routes.
    """
    total = 0.0
    for w, leaf in m.leaves():
        for loc, mass in leaf.atoms:
            if loc <= p:
                total += w * mass * loc
        if leaf.atoms:
            continue
        lo, hi = leaf.support
        top = min(p, hi)
        if top <= lo:
            continue

        def integrand(c: float, leaf: CostModel = leaf) -> float:
            return 0.0 if c == 0.0 else c * leaf.pdf(c)

        total += w * integrate(integrand, lo, top, tol)
    return total


def restricted_mean_quadrature(m: CostModel, p: float) -> float:
    """integral_0^p (1 - F) by adaptive quadrature, the oracle for closed forms."""
    if p <= 0:
        return 0.0
    return integrate(lambda c: 1.0 - m.cdf(c), 0.0, p, Tolerance(abs_tol=1e-13, rel_tol=1e-13), m.breakpoints())


# Thin functional wrappers, one per functional of a cost model.
def eval_cdf(m: CostModel, c: ArrayLike) -> ArrayLike:
    return m.cdf(c)


def eval_pdf(m: CostModel, c: ArrayLike) -> ArrayLike:
    return m.pdf(c)


def eval_pdf_derivative(m: CostModel, c: ArrayLike) -> ArrayLike:
    return m.pdf_derivative(c)


def restricted_mean(m: CostModel, p: ArrayLike) -> ArrayLike:
    return m.restricted_mean(p)


def agent_partial_value(m: CostModel, p: ArrayLike) -> ArrayLike:
    return m.agent_partial_value(p)


_FAMILY_FIELDS = {
    "exponential": ("mean",),
    "weibull": ("scale", "shape"),
    "uniform": ("lo", "hi"),
    "point_mass": ("atom",),
}


def from_dict(d: dict) -> CostModel:
    """Build a family from its config form, e.g. {"family": "exponential", "mean": 0.5}."""
    if not isinstance(d, dict) or "family" not in d:
        raise ConfigError(f"distribution needs a 'family' key, got {d!r}")
    family = d["family"]
    if family not in _FAMILY_FIELDS:
        raise ConfigError(f"unknown distribution family {family!r}")
    fields = _FAMILY_FIELDS[family]
    extra = set(d) - {"family", *fields}
    missing = [f for f in fields if f not in d]
    if extra:
        raise ConfigError(f"unknown field(s) for {family}: {sorted(extra)}")
    if missing:
        raise ConfigError(f"{family} is missing {missing}")
    args = []
    for f in fields:
        v = d[f]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{family}.{f} must be a number")
        args.append(float(v))
    return {"exponential": Exponential, "weibull": Weibull, "uniform": Uniform, "point_mass": PointMass}[family](*args)


def to_dict(m: CostModel) -> dict:
    if isinstance(m, Exponential):
        return {"family": "exponential", "mean": m.mean}
    if isinstance(m, Weibull):
        return {"family": "weibull", "scale": m.scale, "shape": m.shape}
    if isinstance(m, Uniform):
        return {"family": "uniform", "lo": m.lo, "hi": m.hi}
    if isinstance(m, PointMass):
        return {"family": "point_mass", "atom": m.atom}
    raise ConfigError("mixtures have no config form")


def describe(m: CostModel) -> str:
    if isinstance(m, Exponential):
        return f"Exp(mean={m.mean:g})"
    if isinstance(m, Weibull):
        return f"Weibull(scale={m.scale:g}, shape={m.shape:g})"
    if isinstance(m, Uniform):
        return f"Unif({m.lo:g}, {m.hi:g})"
    if isinstance(m, PointMass):
        return f"PointMass({m.atom:g})"
    return " + ".join(f"{w:.3g}*{describe(c)}" for w, c in m.components)
