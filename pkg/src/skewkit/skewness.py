"""Skewness measures built from quantiles.

Pointwise kinds compare tail quantiles against the median (generalized Bowley
ratio and its half-range variant); AUC kinds integrate the corresponding
skewness curve over p in [0, 0.5] with a J-point midpoint rule; b3 is the
(mean - median) / mean-absolute-deviation ratio.

Convention: AUC values are the *integral* of the curve, i.e. the midpoint sum
carries the cell width 0.5/J.  The companion "mean skew" reading of an AUC
figure is half of it (see :func:`mean_skew`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegenerateScaleError, MissingProbabilityError
from .quantiles import (
    DEFAULT_BANDWIDTH,
    BandwidthRule,
    SortedSample,
    quantile_density_profile,
    quantile_type8,
)

DEFAULT_GRID_POINTS = 100


class MeasureKind(str, Enum):
    GAMMA = "gamma"
    LAMBDA = "lambda"
    GAMMA_STAR = "gamma_star"
    LAMBDA_STAR = "lambda_star"
    AUC_GAMMA = "auc_gamma"
    AUC_LAMBDA = "auc_lambda"
    AUC_GAMMA_STAR = "auc_gamma_star"
    AUC_LAMBDA_STAR = "auc_lambda_star"
    B3 = "b3"


class Direction(str, Enum):
    RIGHT = "right"
    LEFT = "left"


_POINTWISE = {
    MeasureKind.GAMMA,
    MeasureKind.LAMBDA,
    MeasureKind.GAMMA_STAR,
    MeasureKind.LAMBDA_STAR,
}
_AUC = {
    MeasureKind.AUC_GAMMA,
    MeasureKind.AUC_LAMBDA,
    MeasureKind.AUC_GAMMA_STAR,
    MeasureKind.AUC_LAMBDA_STAR,
}
_LAMBDA_FAMILY = {
    MeasureKind.LAMBDA,
    MeasureKind.LAMBDA_STAR,
    MeasureKind.AUC_LAMBDA,
    MeasureKind.AUC_LAMBDA_STAR,
}
_WEIGHTED = {
    MeasureKind.GAMMA_STAR,
    MeasureKind.LAMBDA_STAR,
    MeasureKind.AUC_GAMMA_STAR,
    MeasureKind.AUC_LAMBDA_STAR,
}


@dataclass(frozen=True)
class SkewMeasure:
    """One skewness measure plus its parameters.

    ``p`` is required for pointwise kinds and must lie in (0, 0.5);
    ``j_points`` is the midpoint-grid resolution for AUC kinds; ``direction``
    matters only for the lambda family (which half-range is the denominator).
    """

    kind: MeasureKind
    p: float | None = None
    direction: Direction = Direction.RIGHT
    j_points: int = DEFAULT_GRID_POINTS

    def __post_init__(self):
        if self.kind in _POINTWISE:
            if self.p is None or not (0.0 < self.p < 0.5):
                raise ValueError(f"{self.kind.value} needs a probability in (0, 0.5)")
        elif self.p is not None:
            raise ValueError(f"{self.kind.value} takes no probability parameter")
        if self.kind in _AUC and self.j_points < 2:
            raise ValueError("AUC kinds need at least 2 grid points")

    @property
    def is_pointwise(self) -> bool:
        return self.kind in _POINTWISE

    @property
    def is_auc(self) -> bool:
        return self.kind in _AUC

    @property
    def is_lambda_family(self) -> bool:
        return self.kind in _LAMBDA_FAMILY

    @property
    def weighted(self) -> bool:
        return self.kind in _WEIGHTED

    def label(self) -> str:
        if self.is_pointwise:
            return f"{self.kind.value}@{self.p:g}"
        return self.kind.value

    def __str__(self) -> str:
        return self.label()


def parse_measure(
    token: str,
    direction: Direction = Direction.RIGHT,
    j_points: int = DEFAULT_GRID_POINTS,
) -> SkewMeasure:
    """Parse one measure token: ``gamma@0.25``, ``auc_lambda_star``, ``b3``, ..."""
    text = token.strip().lower()
    name, _, param = text.partition("@")
    try:
        kind = MeasureKind(name)
    except ValueError:
        known = ", ".join(k.value for k in MeasureKind)
        raise ValueError(f"unknown measure {token!r}; known kinds: {known}") from None
    if kind in _POINTWISE:
        if not param:
            raise ValueError(f"{name} requires '@p', e.g. '{name}@0.25'")
        p = float(param)
        return SkewMeasure(kind, p=p, direction=direction, j_points=j_points)
    if param:
        raise ValueError(f"{name} takes no '@p' parameter")
    return SkewMeasure(kind, direction=direction, j_points=j_points)


def midpoint_probs(j_points: int) -> np.ndarray:
    """Midpoint grid p_j = 0.5 (j - 1/2) / J for j = 1..J."""
    if j_points < 2:
        raise ValueError("need at least 2 grid points")
    j = np.arange(1, j_points + 1)
    return 0.5 * (j - 0.5) / j_points


@dataclass(frozen=True)
class QuantileGrid:
    """Per-sample cache of quantiles and quantile densities.

    For each base probability p_j in (0, 0.5) the grid stores the quantile and
    quantile-density values at p_j and 1 - p_j, plus the median pair; every
    value is computed exactly once.  ``n`` is None for population grids built
    from exact distribution functions.
    """

    base_probs: np.ndarray
    x_low: np.ndarray
    x_high: np.ndarray
    x_median: float
    g_low: np.ndarray
    g_high: np.ndarray
    g_median: float
    n: int | None
    j_points: int | None
    xhat_at: dict = field(repr=False)
    ghat_at: dict = field(repr=False)
    _index: dict = field(repr=False)

    @staticmethod
    def _assemble(base_probs, x_low, x_high, x_med, g_low, g_high, g_med, n, j_points):
        xhat = {0.5: float(x_med)}
        ghat = {0.5: float(g_med)}
        index = {}
        for i, p in enumerate(base_probs):
            pf = float(p)
            index[pf] = i
            xhat[pf] = float(x_low[i])
            xhat[1.0 - pf] = float(x_high[i])
            ghat[pf] = float(g_low[i])
            ghat[1.0 - pf] = float(g_high[i])
        return QuantileGrid(
            base_probs=base_probs,
            x_low=x_low,
            x_high=x_high,
            x_median=float(x_med),
            g_low=g_low,
            g_high=g_high,
            g_median=float(g_med),
            n=n,
            j_points=j_points,
            xhat_at=xhat,
            ghat_at=ghat,
            _index=index,
        )

    def index_of(self, p: float) -> int:
        try:
            return self._index[float(p)]
        except KeyError:
            raise MissingProbabilityError(p) from None

    # -- vector views used by the AUC summations -------------------------------
    def s_values(self) -> np.ndarray:
        return self.x_high + self.x_low - 2.0 * self.x_median

    def r1_values(self) -> np.ndarray:
        return self.x_high - self.x_low

    def r2_values(self, direction: Direction = Direction.RIGHT) -> np.ndarray:
        if direction is Direction.LEFT:
            return self.x_high - self.x_median
        return self.x_median - self.x_low


def _sample_grid(sample, base, rule, j_points):
    probs = np.concatenate([base, 1.0 - base, [0.5]])
    quant = quantile_type8(sample, probs)
    gdens = quantile_density_profile(sample, probs, rule)
    k = base.size
    return QuantileGrid._assemble(
        base, quant[:k], quant[k : 2 * k], quant[2 * k],
        gdens[:k], gdens[k : 2 * k], gdens[2 * k],
        sample.n, j_points,
    )


def grid_for_probs(
    sample: SortedSample, base_probs, rule: BandwidthRule = DEFAULT_BANDWIDTH
) -> QuantileGrid:
    base = np.asarray(base_probs, dtype=float)
    if np.any((base <= 0.0) | (base >= 0.5)):
        raise ValueError("grid base probabilities must lie in (0, 0.5)")
    return _sample_grid(sample, base, rule, None)


def build_grid(
    sample: SortedSample,
    j_points: int = DEFAULT_GRID_POINTS,
    rule: BandwidthRule = DEFAULT_BANDWIDTH,
) -> QuantileGrid:
    """Build the J-point midpoint grid (all 2J+1 quantiles and densities)."""
    return _sample_grid(sample, midpoint_probs(j_points), rule, j_points)


def population_grid(dist, j_points: int | None = None, base_probs=None) -> QuantileGrid:
    """Exact-quantile grid for a distribution (population plug-in path)."""
    if base_probs is None:
        if j_points is None:
            j_points = DEFAULT_GRID_POINTS
        base = midpoint_probs(j_points)
    else:
        base = np.asarray(base_probs, dtype=float)
        j_points = None
    probs = np.concatenate([base, 1.0 - base, [0.5]])
    quant = np.asarray(dist.quantile(probs), dtype=float)
    gdens = np.asarray(dist.quantile_density(probs), dtype=float)
    k = base.size
    return QuantileGrid._assemble(
        base, quant[:k], quant[k : 2 * k], quant[2 * k],
        gdens[:k], gdens[k : 2 * k], gdens[2 * k],
        None, j_points,
    )


def s_p(grid: QuantileGrid, p: float) -> float:
    """Interquantile skewness x_{1-p} + x_p - 2 x_{0.5}."""
    i = grid.index_of(p)
    return float(grid.x_high[i] + grid.x_low[i] - 2.0 * grid.x_median)


def r1_p(grid: QuantileGrid, p: float) -> float:
    """Interquantile range x_{1-p} - x_p."""
    i = grid.index_of(p)
    return float(grid.x_high[i] - grid.x_low[i])


def r2_p(grid: QuantileGrid, p: float, direction: Direction = Direction.RIGHT) -> float:
    """Half-range: median - x_p (right skew) or x_{1-p} - median (left skew)."""
    i = grid.index_of(p)
    if direction is Direction.LEFT:
        return float(grid.x_high[i] - grid.x_median)
    return float(grid.x_median - grid.x_low[i])


def estimate_pointwise(grid: QuantileGrid, measure: SkewMeasure) -> float:
    """Pointwise skewness estimate at the measure's probability."""
    if not measure.is_pointwise:
        raise ValueError(f"{measure} is not a pointwise measure")
    p = measure.p
    numer = s_p(grid, p)
    if measure.is_lambda_family:
        denom = r2_p(grid, p, measure.direction)
    else:
        denom = r1_p(grid, p)
    if denom <= 0.0:
        raise DegenerateScaleError([p])
    value = numer / denom
    if measure.weighted:
        value *= p
    return value


def estimate_auc(grid: QuantileGrid, measure: SkewMeasure) -> float:
    """Area under the skewness curve over p in [0, 0.5], midpoint rule.

    Each grid cell has width 0.5/J, so the sum is (0.5/J) * sum_j curve(p_j);
    weighted kinds integrate p * curve(p).
    """
    if not measure.is_auc:
        raise ValueError(f"{measure} is not an AUC measure")
    if grid.j_points is None or grid.j_points != measure.j_points:
        raise ValueError(
            f"grid was not built on the measure's {measure.j_points}-point midpoint rule"
        )
    numer = grid.s_values()
    if measure.is_lambda_family:
        denom = grid.r2_values(measure.direction)
    else:
        denom = grid.r1_values()
    if np.any(denom <= 0.0):
        raise DegenerateScaleError(grid.base_probs[denom <= 0.0])
    curve = numer / denom
    if measure.weighted:
        curve = grid.base_probs * curve
    return float(curve.mean() * 0.5)


def mean_skew(auc_value: float) -> float:
    """Half the AUC: the mean-skewness reading of an AUC figure."""
    return 0.5 * auc_value


def estimate_b3(sample: SortedSample) -> float:
    """(mean - median) / E|X - median| with the Type-8 median plug-in."""
    med = quantile_type8(sample, 0.5)
    mad = float(np.abs(sample.values - med).mean())
    if mad <= 0.0:
        raise DegenerateScaleError([0.5], detail="constant sample has zero MAD")
    return (float(sample.values.mean()) - med) / mad


def estimate(sample: SortedSample, measure: SkewMeasure, rule: BandwidthRule = DEFAULT_BANDWIDTH) -> float:
    """Point estimate of any measure from a sorted sample."""
    if measure.kind is MeasureKind.B3:
        return estimate_b3(sample)
    if measure.is_auc:
        grid = build_grid(sample, measure.j_points, rule)
        return estimate_auc(grid, measure)
    grid = grid_for_probs(sample, [measure.p], rule)
    return estimate_pointwise(grid, measure)


def population_measure(dist, measure: SkewMeasure, j_points: int | None = None) -> float:
    """Population value of a measure via exact quantiles.

    AUC kinds reuse the estimation-side midpoint summation so that simulated
    coverage is judged against the same discretization.
    """
    from .distributions import median_absolute_moment

    if measure.kind is MeasureKind.B3:
        mu = dist.mean()
        if not math.isfinite(mu):
            raise ValueError(f"b3 needs a finite mean; {dist} has none")
        return (mu - float(dist.quantile(0.5))) / median_absolute_moment(dist)
    if measure.is_auc:
        grid = population_grid(dist, j_points=j_points or measure.j_points)
        if j_points is not None and j_points != measure.j_points:
            measure = SkewMeasure(measure.kind, direction=measure.direction, j_points=j_points)
        return estimate_auc(grid, measure)
    grid = population_grid(dist, base_probs=[measure.p])
    return estimate_pointwise(grid, measure)
