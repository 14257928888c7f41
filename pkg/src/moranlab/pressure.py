"""Finite-depth topological pressure and its zeros.

The depth-``n`` pressure of a diameter model is::

    P_n(t) = (1/n) * log( sum( diam(i)**t for i in level n ) )

computed in log space throughout.  ``P_n`` is continuous and strictly
decreasing in ``t`` once every level-``n`` diameter is below 1, so its zero
is found by plain bisection.  The zero of the limiting pressure upper-bounds
the Minkowski dimension of the limit set; for models whose per-level
statistics drift (weak control only), the finite-depth zeros drift too, and
``pressure_zero`` reports a two-depth stability diagnostic alongside the
value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DomainError
from .models import DiameterModel
from .words import SubTree

_STABILITY_TOL = 1e-6


def pressure_at(
    model: DiameterModel, t: float, depth: int, subtree: SubTree | None = None
) -> float:
    """Depth-``depth`` pressure of the model at exponent ``t``.

    For multiplicative models with seed diameter 1 the value is independent
    of the depth and equals the true pressure.  Restricting to a sub-tree
    (an extension of the construction proper: only the retained words are
    summed) is supported for the sub-construction workflows.
    """
    if t < 0:
        raise DomainError("pressure exponent must be >= 0, got %r" % t)
    if depth < 1:
        raise DomainError("depth must be >= 1")
    return model.level_log_sum(t, depth, subtree) / depth


def _bisect_zero(f: Callable[[float], float], tol: float) -> float:
    """Zero of a continuous strictly decreasing ``f`` with ``f(0) >= 0``."""
    lo, flo = 0.0, f(0.0)
    if flo < 0:
        raise DomainError("pressure is negative already at t = 0")
    if flo == 0.0:
        return 0.0
    hi = 1.0
    while f(hi) > 0:
        lo = hi
        hi *= 2.0
        if hi > 2.0**40:
            raise DomainError("no pressure zero at this depth: P(t) stays positive")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class PressureZero:
    """A finite-depth pressure zero with a two-depth stability diagnostic.

    ``drift`` is ``value - reference_value``; when it exceeds the stability
    tolerance the model's zeros are still moving with depth and
    ``extrapolated`` (the linear Richardson guess ``2*value - reference``)
    hints where they are headed.
    """

    value: float
    depth: int
    reference_value: float
    reference_depth: int
    tol: float

    @property
    def drift(self) -> float:
        return self.value - self.reference_value

    @property
    def stable(self) -> bool:
        return abs(self.drift) <= max(_STABILITY_TOL, 10 * self.tol)

    @property
    def extrapolated(self) -> float:
        return 2.0 * self.value - self.reference_value

    def __float__(self) -> float:
        return self.value


def pressure_zero(
    model: DiameterModel,
    depth: int,
    tol: float = 1e-12,
    subtree: SubTree | None = None,
) -> PressureZero:
    """Unique zero of the depth-``depth`` pressure, to within ``tol`` in t.

    Also solves at half the depth and reports the drift between the two
    zeros; a drifting zero means the finite-depth value has not converged
    (typical for weakly controlled models, where per-level contraction
    rates change with the level).
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    value = _bisect_zero(lambda t: pressure_at(model, t, depth, subtree), tol)
    ref_depth = max(1, depth // 2)
    if ref_depth == depth:
        ref = value
    else:
        ref = _bisect_zero(lambda t: pressure_at(model, t, ref_depth, subtree), tol)
    return PressureZero(value, depth, ref, ref_depth, tol)


def moran_dimension(ratios: Sequence[float], tol: float = 1e-12) -> float:
    """The unique ``t >= 0`` with ``sum(r**t) == 1``.

    For similarity maps with these contraction ratios (and separated
    images) this is the similarity dimension.  A single ratio gives 0.
    """
    ratios = [float(r) for r in ratios]
    if not ratios:
        raise DomainError("need at least one ratio")
    if any(not 0.0 < r < 1.0 for r in ratios):
        raise DomainError("ratios must lie in (0, 1): %r" % (ratios,))

    def f(t: float) -> float:
        return sum(r**t for r in ratios) - 1.0

    return _bisect_zero(f, tol)


def self_affine_pressure(a0: float, a1: float, b0: float, b1: float, t: float) -> float:
    """Limiting pressure of the two-map axis-aligned rectangle system.

    The rectangles have x-contractions ``a0, a1`` and y-contractions
    ``b0, b1`` with disjoint interiors inside the unit square; the pressure
    is ``max(log(a0**t + a1**t), log(b0**t + b1**t))``.
    """
    _check_feasible(a0, a1, b0, b1)
    if t < 0:
        raise DomainError("pressure exponent must be >= 0")
    return max(math.log(a0**t + a1**t), math.log(b0**t + b1**t))


def self_affine_dimension(a0: float, a1: float, b0: float, b1: float) -> float:
    """Zero of :func:`self_affine_pressure` in ``t``; always in (0, 1].

    The max of two decreasing functions vanishes where the slower one
    does, so the zero is the larger of the two single-row dimensions.
    """
    _check_feasible(a0, a1, b0, b1)
    s = max(moran_dimension([a0, a1]), moran_dimension([b0, b1]))
    if not 0.0 < s <= 1.0:
        raise DomainError("self-affine dimension escaped (0, 1]: %r" % s)
    return s


def _check_feasible(a0, a1, b0, b1) -> None:
    for v in (a0, a1, b0, b1):
        if not 0.0 < v < 1.0:
            raise DomainError("contraction %r outside (0, 1)" % (v,))
    if a0 + a1 > 1.0 or b0 + b1 > 1.0:
        raise DomainError("rectangles must fit disjointly: a0+a1 <= 1 and b0+b1 <= 1")


@dataclass(frozen=True)
class PressureCurve:
    """Sampled map ``t -> P_depth(t)`` for plotting and CSV export."""

    depth: int
    t_values: tuple[float, ...]
    p_values: tuple[float, ...]

    def to_csv(self) -> str:
        lines = ["t,pressure,depth"]
        for t, p in zip(self.t_values, self.p_values):
            lines.append("%.12g,%.12g,%d" % (t, p, self.depth))
        return "\n".join(lines) + "\n"


def pressure_curve(
    model: DiameterModel,
    t_values: Sequence[float],
    depth: int,
    subtree: SubTree | None = None,
) -> PressureCurve:
    ts = tuple(float(t) for t in t_values)
    ps = tuple(pressure_at(model, t, depth, subtree) for t in ts)
    return PressureCurve(depth, ts, ps)
