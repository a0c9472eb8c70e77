"""Scalar numerical kernels: quadrature, root bracketing, maximization, differences.

All routines are deterministic and keep no state between calls.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ContractLabError, InvalidObjective, NoSignChange, NonConvergence

Fn = Callable[[float], float]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_EPS = float(np.finfo(float).eps)
FD_POLISH_STEP = 1e-6


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("bracket endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")


DEFAULT_TOL = Tolerance()
# Used when polishing an optimizer's argmax through its first-order condition;
# the root is then limited by floating point, not by the bracket width.
POLISH_TOL = Tolerance(abs_tol=1e-15, rel_tol=1e-15, max_iter=400)


def _simpson(fa: float, fm: float, fb: float, width: float) -> float:
    return width * (fa + 4.0 * fm + fb) / 6.0


def integrate(
    f: Fn,
    a: float,
    b: float,
    tol: Tolerance = DEFAULT_TOL,
    breakpoints: Sequence[float] = (),
) -> float:
    """Globally adaptive Simpson quadrature of ``f`` over ``[a, b]``.

    ``breakpoints`` inside the interval split it into panels up front, so kinks
    and jumps at known locations never sit inside a Simpson panel. The panel
    with the largest error estimate is bisected until the summed estimate is at
    most ``max(abs_tol, rel_tol*|result|)``. Subdivision deeper than
    ``tol.max_iter`` levels raises NonConvergence.
    """
    if b < a:
        raise ValueError("integrate needs a <= b")
    if a == b:
        return 0.0
    cuts = sorted({a, b, *(x for x in breakpoints if a < x < b)})

    def evaluate(x: float) -> float:
        y = float(f(x))
        if not math.isfinite(y):
            raise InvalidObjective(f"integrand is not finite at {x!r}")
        return y

    # A panel carries f at its five Simpson-pair nodes, so scoring it needs no
    # new evaluations and bisecting it costs two per child.
    def panel(lo, hi, f0, f2, f4, depth):
        f1 = evaluate(lo + 0.25 * (hi - lo))
        f3 = evaluate(lo + 0.75 * (hi - lo))
        whole = _simpson(f0, f2, f4, hi - lo)
        pair = _simpson(f0, f1, f2, 0.5 * (hi - lo)) + _simpson(f2, f3, f4, 0.5 * (hi - lo))
        diff = pair - whole
        return (lo, hi, f0, f1, f2, f3, f4, depth), pair + diff / 15.0, abs(diff) / 15.0

    heap: list = []
    total = 0.0
    total_err = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        # Cut points are sampled one ulp inside the panel so a jump located
        # there contributes its one-sided limit, not the value across it.
        f_lo = evaluate(math.nextafter(lo, hi))
        f_hi = evaluate(math.nextafter(hi, lo))
        node, est, err = panel(lo, hi, f_lo, evaluate(0.5 * (lo + hi)), f_hi, 0)
        total += est
        total_err += err
        heapq.heappush(heap, (-err, len(heap), node, est))
    counter = len(heap)

    while total_err > max(tol.abs_tol, tol.rel_tol * abs(total)):
        neg_err, _, node, est = heapq.heappop(heap)
        lo, hi, f0, f1, f2, f3, f4, depth = node
        if depth >= tol.max_iter:
            raise NonConvergence(f"quadrature exceeded {tol.max_iter} subdivision levels")
        total -= est
        total_err += neg_err
        mid = 0.5 * (lo + hi)
        for child in (panel(lo, mid, f0, f1, f2, depth + 1), panel(mid, hi, f2, f3, f4, depth + 1)):
            c_node, c_est, c_err = child
            total += c_est
            total_err += c_err
            counter += 1
            heapq.heappush(heap, (-c_err, counter, c_node, c_est))
        if not heap[0][0] < 0 and total_err > 0:
            # every panel reports zero error; the residual is rounding in the running sum
            break
    return total


def find_root(g: Fn, bracket: Bracket, tol: Tolerance = DEFAULT_TOL) -> float:
    """Root of ``g`` in a sign-changing bracket by bisection with secant steps.

    Secant steps use the Illinois rule (the stale endpoint's value is halved
    when the same side is kept twice) so both ends of the bracket move.
    Every third step is a plain bisection, which bounds the worst case.
    """
    a, b = bracket.lo, bracket.hi
    ga, gb = float(g(a)), float(g(b))
    if ga == 0.0:
        return a
    if gb == 0.0:
        return b
    if math.isnan(ga) or math.isnan(gb) or ga * gb > 0:
        raise NoSignChange(f"g({a})={ga!r} and g({b})={gb!r} do not bracket a root")
    fa, fb = ga, gb  # possibly down-weighted values used for secant steps
    side = 0
    for step in range(tol.max_iter):
        width = b - a
        if width <= tol.abs_tol:
            break
        x = 0.5 * (a + b)
        if step % 3 != 2 and math.isfinite(fa) and math.isfinite(fb) and fa != fb:
            s = b - fb * (b - a) / (fb - fa)
            if a < s < b:
                x = s
        if not a < x < b:
            break
        gx = float(g(x))
        if gx == 0.0:
            return x
        if math.isnan(gx):
            raise InvalidObjective(f"g is NaN at {x!r}")
        if (gx < 0) == (ga < 0):
            a, ga, fa = x, gx, gx
            if side == -1:
                fb *= 0.5
            side = -1
        else:
            b, gb, fb = x, gx, gx
            if side == 1:
                fa *= 0.5
            side = 1
    else:
        if b - a > tol.abs_tol:
            raise NonConvergence(f"root bracket still {b - a:.3g} wide after {tol.max_iter} steps")
    return a if abs(ga) <= abs(gb) else b


def _golden(f: Fn, lo: float, hi: float, tol: Tolerance) -> float:
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(tol.max_iter):
        if hi - lo <= tol.abs_tol:
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def maximize_scalar(
    f: Fn,
    bracket: Bracket,
    grid_n: int = 2048,
    tol: Tolerance = DEFAULT_TOL,
    *,
    vectorized: bool = False,
    grad: Fn | None = None,
) -> tuple[float, float]:
    """Global-ish maximizer: coarse grid scan, then golden section.

    The scan picks the best grid point (ties go to the smallest) and golden
    section refines inside its two neighbours. Golden section cannot resolve
    an argmax much below sqrt(machine eps), so the result is then polished
    by ``find_root`` on the derivative: ``grad`` when supplied, otherwise a
    central difference of ``f``. The polished point is kept only if it is at
    least as good. The best grid point wins whenever refinement fails to beat
    it, which keeps corner optima exactly on the boundary.

    ``vectorized=True`` lets the scan call ``f`` once on a numpy array.
    """
    if grid_n < 3:
        raise ValueError("grid_n must be at least 3")
    xs = np.linspace(bracket.lo, bracket.hi, grid_n)
    if vectorized:
        ys = np.asarray(f(xs), dtype=float)
    else:
        ys = np.array([f(float(x)) for x in xs], dtype=float)
    if not np.all(np.isfinite(ys)):
        bad = xs[~np.isfinite(ys)][0]
        raise InvalidObjective(f"objective is not finite at {bad!r}")
    i = int(np.argmax(ys))

    def fs(x: float) -> float:
        y = float(f(x))
        if not math.isfinite(y):
            raise InvalidObjective(f"objective is not finite at {x!r}")
        return y

    lo = float(xs[max(i - 1, 0)])
    hi = float(xs[min(i + 1, grid_n - 1)])
    best_x, best_y = float(xs[i]), float(ys[i])

    if grad is not None:
        x_ref = _polish(grad, lo, hi)
        if x_ref is None:
            x_ref = _golden(fs, lo, hi, tol)
    else:
        x_ref = _golden(fs, lo, hi, tol)
        if 0 < i < grid_n - 1:
            h = FD_POLISH_STEP * max(1.0, abs(x_ref))
            x_fd = _polish(lambda x: (fs(x + h) - fs(x - h)) / (2.0 * h), lo, hi)
            if x_fd is not None and fs(x_fd) >= fs(x_ref) - 4.0 * _EPS * max(1.0, abs(best_y)):
                x_ref = x_fd
    y_ref = fs(x_ref)
    if y_ref > best_y:
        best_x, best_y = x_ref, y_ref
    return best_x, best_y


def _polish(grad: Fn, lo: float, hi: float) -> float | None:
    try:
        glo, ghi = float(grad(lo)), float(grad(hi))
        if not (glo > 0 > ghi):
            return None
        return find_root(grad, Bracket(lo, hi), POLISH_TOL)
    except (ContractLabError, ValueError, ZeroDivisionError):
        return None


def finite_difference(f: Fn, x: float, h: float = 1e-6) -> float:
    """Central difference (f(x+h) - f(x-h)) / 2h."""
    if not h > 0:
        raise ValueError("step must be positive")
    return (f(x + h) - f(x - h)) / (2.0 * h)


def one_sided_difference(f: Fn, x: float, h: float, direction: int) -> float:
    """Second-order one-sided difference; ``direction=-1`` only looks left of x."""
    if direction not in (-1, 1):
        raise ValueError("direction must be +1 or -1")
    s = direction * h
    return (-3.0 * f(x) + 4.0 * f(x + s) - f(x + 2.0 * s)) / (2.0 * s)
