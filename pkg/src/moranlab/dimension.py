"""Box counting, Minkowski slope fits, cover sums, and packings.

All estimators here work on finite point clouds and are deliberately
one-sided: a greedy cover never undercounts the optimum by more than its
greedy factor, a maximal packing never exceeds the packing number.  Both
scan candidates in input order and use closed balls, so on identical
inputs the cover at ``2r`` and the packing at ``r`` accept exactly the
same centers; the sandwich ``cover(2r) <= packing(r) <= cover(r/2)``
follows and is checked in the tests at exact radii.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .spaces import EuclideanSpace


def box_count(cloud, r: float, method: str = "greedy") -> int:
    """Number of radius-``r`` sets needed to cover the cloud.

    ``greedy``
        scan points in cloud order, open a new ball at the first point
        not yet covered (covered means ``d <= r``).  Works in any metric
        space; the result is within the space's doubling factor of the
        true covering number.
    ``grid``
        count occupied cells of the axis-aligned grid of mesh ``r``
        anchored at the coordinate-wise minimum.  A coordinate within a
        relative 1e-9 below a cell boundary is counted to the upper cell
        so that float dust cannot split one construction piece over two
        cells.
    """
    if r <= 0:
        raise DomainError("radius must be positive")
    if not cloud.points:
        warnings.warn("empty cloud: covering number reported as 0", stacklevel=2)
        return 0
    if method == "greedy":
        dist = cloud.space.distance
        centers: list = []
        for p in cloud.points:
            if all(dist(p, c) > r for c in centers):
                centers.append(p)
        return len(centers)
    if method == "grid":
        pts = cloud.array()
        mins = pts.min(axis=0)
        cells = np.floor((pts - mins) / r + 1e-9).astype(np.int64)
        return len({tuple(row) for row in cells})
    raise DomainError("unknown box-count method %r" % method)


@dataclass(frozen=True)
class MinkowskiEstimate:
    """Least-squares slope of ``log N(r)`` against ``log(1/r)``.

    Unpacks as ``slope, r_squared = estimate``; the radii, counts and
    per-scale log-log residuals are kept for inspection and plotting.
    """

    slope: float
    r_squared: float
    radii: tuple[float, ...]
    counts: tuple[int, ...]
    residuals: tuple[float, ...]

    def __iter__(self):
        return iter((self.slope, self.r_squared))

    def to_json(self) -> dict:
        return {
            "slope": self.slope,
            "r_squared": self.r_squared,
            "radii": list(self.radii),
            "counts": list(self.counts),
        }

    def to_csv(self) -> str:
        lines = ["r,count,residual"]
        for r, n, e in zip(self.radii, self.counts, self.residuals):
            lines.append("%.12g,%d,%.12g" % (r, n, e))
        return "\n".join(lines) + "\n"


def _nearest_neighbor_gap(cloud, max_probes: int = 256) -> float:
    """Largest nearest-neighbor distance over a strided probe sample."""
    pts = cloud.points
    n = len(pts)
    if n < 2:
        return math.inf
    if isinstance(cloud.space, EuclideanSpace):
        arr = cloud.array()
        stride = max(1, n // max_probes)
        worst = 0.0
        for i in range(0, n, stride):
            d = np.linalg.norm(arr - arr[i], axis=1)
            d[i] = np.inf
            worst = max(worst, float(d.min()))
        return worst
    dist = cloud.space.distance
    stride = max(1, n // min(max_probes, 64))
    worst = 0.0
    for i in range(0, n, stride):
        p = pts[i]
        best = min(dist(p, q) for j, q in enumerate(pts) if j != i)
        worst = max(worst, best)
    return worst


def minkowski_estimate(
    cloud,
    r_min: float,
    r_max: float,
    n_scales: int,
    method: str | None = None,
) -> MinkowskiEstimate:
    """Fit the box-counting dimension over geometrically spaced scales.

    Counts ``N(r)`` at ``n_scales`` radii running geometrically from
    ``r_max`` down to ``r_min`` and returns the least-squares slope of
    ``log N`` against ``-log r`` with its regression quality.  The cloud
    must resolve the finest scale: if its sampled nearest-neighbor
    spacing is not below ``r_min / 10`` the counts would saturate at the
    number of points and silently flatten the slope, so the call is
    rejected instead.

    ``method`` defaults to the axis-grid count on Euclidean clouds and
    to the greedy cover elsewhere.
    """
    if not 0 < r_min < r_max:
        raise DomainError("need 0 < r_min < r_max")
    if n_scales < 2:
        raise DomainError("need at least two scales")
    if len(cloud.points) < 2:
        raise DomainError("cannot fit a slope through a cloud of %d points" % len(cloud.points))
    if method is None:
        method = "grid" if isinstance(cloud.space, EuclideanSpace) else "greedy"
    dist = cloud.space.distance
    anchor = cloud.points[0]
    reach = max(dist(anchor, p) for p in cloud.points)
    if r_max > 2 * reach:
        raise DomainError(
            "r_max=%g exceeds the cloud diameter (at most %g)" % (r_max, 2 * reach)
        )
    gap = _nearest_neighbor_gap(cloud)
    if not gap < r_min / 10:
        raise DomainError(
            "cloud (depth %d) does not resolve r_min=%g: sample spacing ~%g "
            "must stay below r_min/10; regenerate the cloud at greater depth"
            % (cloud.depth, r_min, gap)
        )
    step = (r_min / r_max) ** (1.0 / (n_scales - 1))
    radii = [r_max * step**k for k in range(n_scales)]
    radii[-1] = r_min
    counts = [box_count(cloud, r, method=method) for r in radii]
    x = np.log(1.0 / np.array(radii))
    y = np.log(np.array(counts, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return MinkowskiEstimate(
        float(slope), r2, tuple(radii), tuple(counts), tuple(float(e) for e in resid)
    )


def hausdorff_upper_sum(model, t: float, depth: int, subtree=None) -> float:
    """Level-``depth`` cover sum ``sum diam(X_w)^t`` over the chosen words.

    The level-``n`` pieces always cover the limit set, so this is a valid
    Hausdorff premeasure upper bound at gauge ``max diam``;
    its failure to blow up as ``depth`` grows is evidence of ``dim_H <= t``.
    """
    if t < 0:
        raise DomainError("exponent must be non-negative")
    return math.exp(model.level_log_sum(t, depth, subtree=subtree))


def maximal_packing(space, center, R: float, r: float, candidates) -> list:
    """Greedy maximal ``r``-packing of ``B(center, R)`` from candidate points.

    Scans the candidates inside the closed ball ``B(center, R)`` in input
    order and keeps those whose closed ``r``-balls stay disjoint from the
    balls already placed (``d > 2r`` to every kept center; ``d > r`` in an
    ultrametric space, where balls at distance above ``r`` are already
    disjoint).  Greedy termination means the kept centers' ``2r``-balls
    cover every candidate, which is the maximality half of the
    packing/covering sandwich.  ``r >= R`` is allowed and degenerates to
    a single ball: the window has diameter at most ``2R <= 2r``.
    """
    if r <= 0 or R <= 0:
        raise DomainError("radii must be positive; got r=%r, R=%r" % (r, R))
    pts = list(candidates.points) if hasattr(candidates, "points") else list(candidates)
    dist = space.distance
    window = [p for p in pts if dist(p, center) <= R]
    if not window:
        warnings.warn("no candidates inside B(center, R): empty packing", stacklevel=2)
        return []
    sep = r if space.ultrametric else 2 * r
    chosen: list = []
    for p in window:
        if all(dist(p, c) > sep for c in chosen):
            chosen.append(p)
    return chosen


@dataclass(frozen=True)
class PackingGrowth:
    """Witnessed two-sided growth of packing counts in the ratio ``R/r``.

    ``(R/r)^alpha2 / c <= #H <= c * (R/r)^alpha1`` holds at every sampled
    pair with the reported constant; ``alpha1``/``alpha2`` are the
    largest/smallest adjacent log-log slopes, so the witnessed exponent
    window is ``[alpha2, alpha1]``.  Unpacks as ``a1, a2, c = growth``.
    """

    alpha1: float
    alpha2: float
    c: float
    ratios: tuple[float, ...]
    counts: tuple[float, ...]

    def __iter__(self):
        return iter((self.alpha1, self.alpha2, self.c))


def packing_growth_check(space, trials, R_grid, r_grid) -> PackingGrowth:
    """Fit the packing-count exponent window over a grid of ball sizes.

    ``trials`` is a sequence of ``(center, candidates)`` pairs; every
    combination with ``r < R`` contributes one packing count at ratio
    ``R/r``.  Counts at equal ratios are merged by geometric mean before
    the adjacent-slope fit.
    """
    data: list[tuple[float, int]] = []
    for center, candidates in trials:
        for R in R_grid:
            for r in r_grid:
                if not 0 < r < R:
                    continue
                n = len(maximal_packing(space, center, R, r, candidates))
                if n == 0:
                    warnings.warn(
                        "packing at R=%g, r=%g is empty; pair skipped" % (R, r),
                        stacklevel=2,
                    )
                    continue
                data.append((R / r, n))
    merged: dict[float, list[float]] = {}
    for ratio, n in data:
        merged.setdefault(ratio, []).append(math.log(n))
    if len(merged) < 2:
        raise DomainError("need counts at two distinct R/r ratios; grids too small")
    ratios = sorted(merged)
    counts = [math.exp(sum(v) / len(v)) for v in (merged[q] for q in ratios)]
    slopes = [
        math.log(counts[k + 1] / counts[k]) / math.log(ratios[k + 1] / ratios[k])
        for k in range(len(ratios) - 1)
    ]
    alpha1, alpha2 = max(slopes), min(slopes)
    c = 1.0
    for ratio, n in data:
        c = max(c, n / ratio**alpha1, ratio**alpha2 / n)
    return PackingGrowth(alpha1, alpha2, c, tuple(ratios), tuple(counts))
