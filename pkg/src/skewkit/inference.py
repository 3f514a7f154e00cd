"""Wald confidence intervals for skewness measures, one- and two-sample."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special

from . import asymptotics, skewness
from .errors import UnsupportedMeasureError
from .quantiles import DEFAULT_BANDWIDTH, BandwidthRule, SortedSample
from .skewness import MeasureKind, SkewMeasure


def z_quantile(alpha: float) -> float:
    """Standard normal quantile Phi^{-1}(alpha)."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie strictly inside (0, 1)")
    return float(special.ndtri(alpha))


@dataclass(frozen=True)
class Estimate:
    """A point estimate; ``se`` is None for measures without one (b3)."""

    measure: SkewMeasure
    value: float
    se: float | None
    n: int


@dataclass(frozen=True)
class IntervalEstimate:
    measure: SkewMeasure
    estimate: float
    se: float
    level: float
    lower: float
    upper: float
    n: int

    def mean_skew(self) -> "IntervalEstimate":
        """The mean-skew interval: estimate and both bounds halved."""
        if not self.measure.is_auc:
            raise UnsupportedMeasureError("mean-skew halving applies to AUC measures")
        return IntervalEstimate(
            measure=self.measure,
            estimate=0.5 * self.estimate,
            se=0.5 * self.se,
            level=self.level,
            lower=0.5 * self.lower,
            upper=0.5 * self.upper,
            n=self.n,
        )

    def to_dict(self) -> dict:
        return {
            "measure": self.measure.label(),
            "direction": self.measure.direction.value,
            "estimate": self.estimate,
            "se": self.se,
            "level": self.level,
            "lower": self.lower,
            "upper": self.upper,
            "n": self.n,
        }


@dataclass(frozen=True)
class DifferenceEstimate:
    """Independent-sample Wald interval for measure(a) - measure(b)."""

    measure: SkewMeasure
    a: IntervalEstimate
    b: IntervalEstimate
    difference: float
    se: float
    level: float
    lower: float
    upper: float

    def to_dict(self) -> dict:
        return {
            "measure": self.measure.label(),
            "a": self.a.to_dict(),
            "b": self.b.to_dict(),
            "difference": self.difference,
            "se": self.se,
            "level": self.level,
            "lower": self.lower,
            "upper": self.upper,
        }


def point_estimate(
    sample: SortedSample, measure: SkewMeasure, rule: BandwidthRule = DEFAULT_BANDWIDTH
) -> Estimate:
    """Point estimate without interval machinery (the only route for b3)."""
    value = skewness.estimate(sample, measure, rule)
    return Estimate(measure=measure, value=value, se=None, n=sample.n)


def _estimator_variance(measure: SkewMeasure, grid, kernel) -> float:
    """Asymptotic (times-n) variance of the measure's estimator.

    AUC kinds carry the 0.5/J midpoint cell width, so the double sum for the
    plain (1/J)-mean statistic is scaled by 1/4.
    """
    if measure.is_auc:
        family = "lambda" if measure.is_lambda_family else "gamma"
        double_sum = asymptotics.auc_variance(
            kernel, grid, family=family, weighted=measure.weighted,
            direction=measure.direction,
        )
        return 0.25 * double_sum
    if measure.is_lambda_family:
        base = asymptotics.sigma2_sq(kernel, grid, measure.p, measure.direction)
    else:
        base = asymptotics.sigma1_sq(kernel, grid, measure.p)
    if measure.weighted:
        base *= measure.p**2
    return base


def interval(
    sample: SortedSample,
    measure: SkewMeasure,
    level: float = 0.95,
    rule: BandwidthRule = DEFAULT_BANDWIDTH,
) -> IntervalEstimate:
    """Wald interval: estimate +/- z_{1-alpha/2} * SE.

    The SE comes from the delta-method asymptotic variance with kernel
    quantile-density plug-ins, divided by n.
    """
    if not (0.0 < level < 1.0):
        raise ValueError("confidence level must lie strictly inside (0, 1)")
    if measure.kind is MeasureKind.B3:
        raise UnsupportedMeasureError("no standard error is defined for b3")

    if measure.is_auc:
        grid = skewness.build_grid(sample, measure.j_points, rule)
        est = skewness.estimate_auc(grid, measure)
    else:
        grid = skewness.grid_for_probs(sample, [measure.p], rule)
        est = skewness.estimate_pointwise(grid, measure)

    kernel = asymptotics.XiKernel.from_grid(grid)
    var = asymptotics.VarianceEstimate.from_asymptotic(
        measure, _estimator_variance(measure, grid, kernel), sample.n
    )
    z = z_quantile(1.0 - 0.5 * (1.0 - level))
    half = z * var.se
    return IntervalEstimate(
        measure=measure,
        estimate=est,
        se=var.se,
        level=level,
        lower=est - half,
        upper=est + half,
        n=sample.n,
    )


def difference_interval(
    sample_a: SortedSample,
    sample_b: SortedSample,
    measure: SkewMeasure,
    level: float = 0.95,
    rule: BandwidthRule = DEFAULT_BANDWIDTH,
) -> DifferenceEstimate:
    """Interval for the between-sample difference of one measure.

    The two samples are independent, so se^2 is the sum of the per-sample
    estimator variances.
    """
    ia = interval(sample_a, measure, level, rule)
    ib = interval(sample_b, measure, level, rule)
    diff = ia.estimate - ib.estimate
    se = math.sqrt(ia.se**2 + ib.se**2)
    z = z_quantile(1.0 - 0.5 * (1.0 - level))
    return DifferenceEstimate(
        measure=measure,
        a=ia,
        b=ib,
        difference=diff,
        se=se,
        level=level,
        lower=diff - z * se,
        upper=diff + z * se,
    )
