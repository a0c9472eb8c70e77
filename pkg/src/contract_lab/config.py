"""Scenario config files: parsing, validation and the shipped example configs.

A config is a JSON object. Unknown keys are rejected at every level and
numbers are validated by the same constructors the library uses, so a config
that loads is one the solvers accept.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .contract import Scenario, SolverSettings
from .distributions import CostModel
from .distributions import from_dict as dist_from_dict
from .distributions import to_dict as dist_to_dict
from .errors import ConfigError
from .numerics import Tolerance

FORMATS = ("csv", "json")


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    return float(value)


def _integer(value: Any, where: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{where} must be at least {minimum}")
    return value


def _only(d: Any, allowed: tuple[str, ...], where: str) -> dict:
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object")
    extra = sorted(set(d) - set(allowed))
    if extra:
        raise ConfigError(f"unknown field(s) in {where}: {extra}")
    return d


@dataclass(frozen=True)
class LambdaGrid:
    """Exponential means for a grid axis: an explicit list or an evenly spaced {lo, hi, n}."""

    values: tuple[float, ...] | None = None
    lo: float | None = None
    hi: float | None = None
    n: int | None = None

    @classmethod
    def from_value(cls, raw: Any, where: str) -> "LambdaGrid":
        if isinstance(raw, list):
            if not raw:
                raise ConfigError(f"{where} must not be empty")
            vals = tuple(_number(v, where) for v in raw)
            grid = cls(values=vals)
        else:
            d = _only(raw, ("lo", "hi", "n"), where)
            missing = [k for k in ("lo", "hi", "n") if k not in d]
            if missing:
                raise ConfigError(f"{where} is missing {missing}")
            grid = cls(lo=_number(d["lo"], f"{where}.lo"), hi=_number(d["hi"], f"{where}.hi"), n=_integer(d["n"], f"{where}.n", 1))
            if grid.n > 1 and not grid.lo < grid.hi:
                raise ConfigError(f"{where} needs lo < hi")
        if any(v <= 0 for v in grid.points()):
            raise ConfigError(f"{where} values must be positive")
        return grid

    def points(self) -> list[float]:
        if self.values is not None:
            return list(self.values)
        if self.n == 1:
            return [self.lo]
        return [float(x) for x in np.linspace(self.lo, self.hi, self.n)]

    def to_value(self) -> Any:
        if self.values is not None:
            return list(self.values)
        return {"lo": self.lo, "hi": self.hi, "n": self.n}


@dataclass(frozen=True)
class GridConfig:
    eps_n: int | None = None
    r_n: int | None = None
    lambda0: LambdaGrid | None = None
    lambda1: LambdaGrid | None = None

    @classmethod
    def from_dict(cls, raw: Any) -> "GridConfig":
        d = _only(raw, ("eps_n", "r_n", "lambda0", "lambda1"), "grids")
        return cls(
            eps_n=None if d.get("eps_n") is None else _integer(d["eps_n"], "grids.eps_n", 2),
            r_n=None if d.get("r_n") is None else _integer(d["r_n"], "grids.r_n", 2),
            lambda0=None if d.get("lambda0") is None else LambdaGrid.from_value(d["lambda0"], "grids.lambda0"),
            lambda1=None if d.get("lambda1") is None else LambdaGrid.from_value(d["lambda1"], "grids.lambda1"),
        )

    def to_dict(self) -> dict:
        out: dict = {}
        if self.eps_n is not None:
            out["eps_n"] = self.eps_n
        if self.r_n is not None:
            out["r_n"] = self.r_n
        if self.lambda0 is not None:
            out["lambda0"] = self.lambda0.to_value()
        if self.lambda1 is not None:
            out["lambda1"] = self.lambda1.to_value()
        return out


@dataclass(frozen=True)
class OutputConfig:
    format: str = "csv"
    path: str | None = None

    @classmethod
    def from_dict(cls, raw: Any) -> "OutputConfig":
        d = _only(raw, ("format", "path"), "output")
        fmt = d.get("format", "csv")
        if fmt not in FORMATS:
            raise ConfigError(f"output.format must be one of {FORMATS}, got {fmt!r}")
        path = d.get("path")
        if path is not None and not isinstance(path, str):
            raise ConfigError("output.path must be a string")
        return cls(fmt, path)

    def to_dict(self) -> dict:
        out: dict = {"format": self.format}
        if self.path is not None:
            out["path"] = self.path
        return out


def _tolerance(raw: Any) -> Tolerance:
    d = _only(raw, ("abs_tol", "rel_tol", "max_iter"), "tolerances")
    kwargs: dict = {}
    for key in ("abs_tol", "rel_tol"):
        if key in d:
            kwargs[key] = _number(d[key], f"tolerances.{key}")
    if "max_iter" in d:
        kwargs["max_iter"] = _integer(d["max_iter"], "tolerances.max_iter", 1)
    try:
        return Tolerance(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"tolerances: {exc}") from None


@dataclass(frozen=True)
class ScenarioConfig:
    b: float
    theta: float
    f0: CostModel | None = None
    f1: CostModel | None = None
    gamma: float = 0.5
    grids: GridConfig = field(default_factory=GridConfig)
    tolerances: Tolerance | None = None
    output: OutputConfig = field(default_factory=OutputConfig)

    @classmethod
    def from_dict(cls, raw: Any) -> "ScenarioConfig":
        d = _only(raw, ("b", "theta", "f0", "f1", "gamma", "grids", "tolerances", "output"), "config")
        for key in ("b", "theta"):
            if key not in d:
                raise ConfigError(f"config is missing {key!r}")
        b = _number(d["b"], "b")
        theta = _number(d["theta"], "theta")
        if not b > 0:
            raise ConfigError("b must be a positive finite number")
        if not 0.0 < theta < 1.0:
            raise ConfigError("theta must lie in (0,1)")
        gamma = _number(d.get("gamma", 0.5), "gamma")
        if not 0.0 <= gamma <= 1.0:
            raise ConfigError("gamma must lie in [0,1]")
        try:
            f0 = None if d.get("f0") is None else dist_from_dict(d["f0"])
            f1 = None if d.get("f1") is None else dist_from_dict(d["f1"])
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"distribution: {exc}") from None
        if (f0 is None) != (f1 is None):
            raise ConfigError("f0 and f1 must be given together")
        return cls(
            b=b,
            theta=theta,
            f0=f0,
            f1=f1,
            gamma=gamma,
            grids=GridConfig.from_dict(d.get("grids", {})),
            tolerances=None if d.get("tolerances") is None else _tolerance(d["tolerances"]),
            output=OutputConfig.from_dict(d.get("output", {})),
        )

    def to_dict(self) -> dict:
        out: dict = {"b": self.b, "theta": self.theta}
        if self.f0 is not None:
            out["f0"] = dist_to_dict(self.f0)
            out["f1"] = dist_to_dict(self.f1)
        out["gamma"] = self.gamma
        grids = self.grids.to_dict()
        if grids:
            out["grids"] = grids
        if self.tolerances is not None:
            t = self.tolerances
            out["tolerances"] = {"abs_tol": t.abs_tol, "rel_tol": t.rel_tol, "max_iter": t.max_iter}
        out["output"] = self.output.to_dict()
        return out

    def solver(self, grid_n: int | None = None) -> SolverSettings:
        base = SolverSettings()
        return SolverSettings(
            grid_n=base.grid_n if grid_n is None else grid_n,
            tol=self.tolerances if self.tolerances is not None else base.tol,
        )

    def scenario(self, grid_n: int | None = None) -> Scenario:
        if self.f0 is None:
            raise ConfigError("this command needs f0 and f1 in the config")
        return Scenario(self.b, self.theta, self.f0, self.f1, self.solver(grid_n))


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {str(path)!r} is not valid JSON: {exc}") from None
    return ScenarioConfig.from_dict(raw)


def builtin_configs() -> dict[str, dict]:
    """The example configs shipped in configs/, keyed by file stem."""
    exp = lambda mean: {"family": "exponential", "mean": mean}  # noqa: E731
    lam = {"lo": 0.01, "hi": 1.0, "n": 40}
    return {
        "uniform-3.6.1": {
            "b": 1.0,
            "theta": 0.5,
            "f0": {"family": "uniform", "lo": 0.5, "hi": 1.5},
            "f1": {"family": "uniform", "lo": 0.0, "hi": 1.0},
            "output": {"format": "json"},
        },
        "fig2-grid": {
            "b": 1.0,
            "theta": 0.5,
            "grids": {"lambda0": dict(lam), "lambda1": dict(lam)},
            "output": {"format": "csv"},
        },
        "fig5-grid": {
            "b": 1.0,
            "theta": 0.5,
            "grids": {"lambda0": dict(lam), "lambda1": dict(lam)},
            "output": {"format": "csv"},
        },
        "fig6-trajectories": {
            "b": 1.0,
            "theta": 0.5,
            "f0": exp(0.5),
            "f1": exp(0.01),
            "gamma": 0.5,
            "grids": {"eps_n": 101, "r_n": 101},
            "output": {"format": "csv"},
        },
        "anchored-exponential": {
            "b": 1.0,
            "theta": 0.5,
            "f0": exp(0.2),
            "f1": {"family": "point_mass", "atom": 0.0},
            "grids": {"eps_n": 201},
            "output": {"format": "json"},
        },
    }
