"""First-order asymptotic variances and covariances of the skewness estimators.

Everything rests on the large-sample quantile covariance
Cov(xhat_p, xhat_q) =~ min(p,q)(1 - max(p,q)) g(p) g(q) / n with g the
quantile density.  The covariance expansions for the interquantile statistics
are signed sums of those xi terms; delta-method plug-ins then give the
variances of the skewness ratios, and a J x J double sum gives the AUC
variance.  All population quantities are replaced by sample plug-ins.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import DegenerateScaleError, MissingProbabilityError, NumericalError
from .skewness import Direction, QuantileGrid, SkewMeasure, r1_p, r2_p, s_p


@dataclass(frozen=True)
class XiKernel:
    """Quantile-covariance kernel: sample size plus a prob -> g(p) table.

    ``g_at`` may hold kernel estimates (inference) or exact quantile densities
    (population oracles); every probability any expansion will touch must be
    present up front.
    """

    n: int
    g_at: Mapping[float, float]

    def __post_init__(self):
        for p, g in self.g_at.items():
            if not g > 0.0:
                raise ValueError(f"quantile density at p={p:g} must be positive, got {g!r}")

    @classmethod
    def from_grid(cls, grid: QuantileGrid) -> "XiKernel":
        if grid.n is None:
            raise ValueError("grid has no sample size; use an explicit n")
        return cls(n=grid.n, g_at=grid.ghat_at)

    @classmethod
    def exact(cls, dist, probs, n: int) -> "XiKernel":
        """Exact-g kernel for a distribution (simulation/test oracles)."""
        table = {}
        for p in probs:
            pf = float(p)
            table[pf] = float(dist.quantile_density(pf))
        return cls(n=n, g_at=table)

    def g(self, p: float) -> float:
        try:
            return self.g_at[p]
        except KeyError:
            raise MissingProbabilityError(p) from None


def xi(k: XiKernel, p: float, q: float) -> float:
    """Cov(xhat_p, xhat_q) = min(p,q)(1 - max(p,q)) g(p) g(q) / n."""
    if not (0.0 < p < 1.0 and 0.0 < q < 1.0):
        raise ValueError("xi probabilities must lie inside (0, 1)")
    lo, hi = (p, q) if p <= q else (q, p)
    gg = k.g(p) * k.g(q)  # grouped so xi(p, q) == xi(q, p) exactly
    return lo * (1.0 - hi) * gg / k.n


def cov_s_s(k: XiKernel, p: float, q: float) -> float:
    """Cov(s_p, s_q) where s_p = xhat_{1-p} + xhat_p - 2 xhat_{0.5}."""
    return (
        xi(k, 1 - p, 1 - q) + xi(k, 1 - p, q) + xi(k, p, 1 - q) + xi(k, p, q)
        - 2 * xi(k, 1 - p, 0.5) - 2 * xi(k, p, 0.5)
        - 2 * xi(k, 0.5, 1 - q) - 2 * xi(k, 0.5, q)
        + 4 * xi(k, 0.5, 0.5)
    )


def cov_s_r1(k: XiKernel, p: float, q: float) -> float:
    """Cov(s_p, r1_q) where r1_q = xhat_{1-q} - xhat_q."""
    return (
        xi(k, 1 - p, 1 - q) - xi(k, 1 - p, q) + xi(k, p, 1 - q) - xi(k, p, q)
        - 2 * xi(k, 0.5, 1 - q) + 2 * xi(k, 0.5, q)
    )


def cov_r1_s(k: XiKernel, p: float, q: float) -> float:
    # Cov is symmetric in its arguments, so this is cov_s_r1 transposed;
    # delegating keeps the transpose identity exact in floating point.
    return cov_s_r1(k, q, p)


def cov_r1_r1(k: XiKernel, p: float, q: float) -> float:
    """Cov(r1_p, r1_q)."""
    return (
        xi(k, 1 - p, 1 - q) - xi(k, 1 - p, q) - xi(k, p, 1 - q) + xi(k, p, q)
    )


def cov_s_r2(k: XiKernel, p: float, q: float, direction: Direction = Direction.RIGHT) -> float:
    """Cov(s_p, r2_q) with r2_q = xhat_{0.5} - xhat_q (right) or
    xhat_{1-q} - xhat_{0.5} (left)."""
    if direction is Direction.LEFT:
        return (
            xi(k, 1 - p, 1 - q) - xi(k, 1 - p, 0.5) + xi(k, p, 1 - q) - xi(k, p, 0.5)
            - 2 * xi(k, 0.5, 1 - q) + 2 * xi(k, 0.5, 0.5)
        )
    return (
        xi(k, 1 - p, 0.5) - xi(k, 1 - p, q) + xi(k, p, 0.5) - xi(k, p, q)
        + 2 * xi(k, 0.5, q) - 2 * xi(k, 0.5, 0.5)
    )


def cov_r2_s(k: XiKernel, p: float, q: float, direction: Direction = Direction.RIGHT) -> float:
    return cov_s_r2(k, q, p, direction)


def cov_r2_r2(k: XiKernel, p: float, q: float, direction: Direction = Direction.RIGHT) -> float:
    """Cov(r2_p, r2_q), same direction on both sides."""
    if direction is Direction.LEFT:
        return (
            xi(k, 1 - p, 1 - q) - xi(k, 1 - p, 0.5) - xi(k, 0.5, 1 - q) + xi(k, 0.5, 0.5)
        )
    return xi(k, p, q) - xi(k, 0.5, q) - xi(k, p, 0.5) + xi(k, 0.5, 0.5)


def _plugin_ratio(grid: QuantileGrid, p: float, lambda_family: bool, direction: Direction):
    s = s_p(grid, p)
    r = r2_p(grid, p, direction) if lambda_family else r1_p(grid, p)
    if r <= 0.0:
        raise DegenerateScaleError([p])
    return s, r, s / r


def sigma_cross(
    k: XiKernel,
    grid: QuantileGrid,
    p: float,
    q: float,
    family: str = "gamma",
    direction: Direction = Direction.RIGHT,
) -> float:
    """n Cov(ratio_p, ratio_q) by the delta method with sample plug-ins.

    ``family`` selects gamma (full-range denominator) or lambda (half-range).
    Setting p = q recovers the pointwise asymptotic variances; the expansion
    never divides by s_p, so symmetric data (s_p = 0) is handled exactly.
    """
    lam = family == "lambda"
    _, rp, cp = _plugin_ratio(grid, p, lam, direction)
    _, rq, cq = _plugin_ratio(grid, q, lam, direction)
    if lam:
        a = cov_s_s(k, p, q)
        b = cov_s_r2(k, p, q, direction)
        c = cov_r2_s(k, p, q, direction)
        d = cov_r2_r2(k, p, q, direction)
    else:
        a = cov_s_s(k, p, q)
        b = cov_s_r1(k, p, q)
        c = cov_r1_s(k, p, q)
        d = cov_r1_r1(k, p, q)
    return k.n * (a - cq * b - cp * c + cp * cq * d) / (rp * rq)


def sigma1_sq(k: XiKernel, grid: QuantileGrid, p: float) -> float:
    """n Var of the gamma_p estimator (delta method, plug-in form)."""
    return sigma_cross(k, grid, p, p, family="gamma")


def sigma2_sq(
    k: XiKernel, grid: QuantileGrid, p: float, direction: Direction = Direction.RIGHT
) -> float:
    """n Var of the lambda_p estimator (delta method, plug-in form)."""
    return sigma_cross(k, grid, p, p, family="lambda", direction=direction)


@dataclass(frozen=True)
class VarianceEstimate:
    """Estimator-scale variance (asymptotic value / n) and its square root."""

    measure: SkewMeasure
    variance: float
    se: float

    @classmethod
    def from_asymptotic(cls, measure: SkewMeasure, asymptotic: float, n: int) -> "VarianceEstimate":
        if asymptotic < 0.0:
            raise NumericalError(
                f"negative asymptotic variance {asymptotic:g} for {measure}"
            )
        variance = asymptotic / n
        return cls(measure=measure, variance=variance, se=float(np.sqrt(variance)))


def _gather_grid_densities(k: XiKernel, grid: QuantileGrid):
    base = grid.base_probs
    g_low = np.array([k.g(float(p)) for p in base])
    g_high = np.array([k.g(1.0 - float(p)) for p in base])
    return g_low, g_high, k.g(0.5)


def auc_variance(
    k: XiKernel,
    grid: QuantileGrid,
    family: str = "gamma",
    weighted: bool = False,
    direction: Direction = Direction.RIGHT,
) -> float:
    """(1/J^2) sum_{j,k} sigma_cross(p_j, p_k): the AUC double sum.

    This is the asymptotic (times-n) variance of the plain (1/J)-mean of the
    pointwise estimates; weighted kinds multiply each term by p_j p_k.  The
    xi inputs are assembled once into J x J blocks, so the double sum costs a
    handful of dense matrix operations regardless of J.
    """
    if grid.j_points is None:
        raise ValueError("AUC variance needs a midpoint grid (build_grid)")
    pj = grid.base_probs
    n = k.n
    g_low, g_high, g_med = _gather_grid_densities(k, grid)

    lam = family == "lambda"
    numer = grid.s_values()
    denom = grid.r2_values(direction) if lam else grid.r1_values()
    if np.any(denom <= 0.0):
        raise DegenerateScaleError(pj[denom <= 0.0])
    ratio = numer / denom

    # xi blocks over the 2J+1 grid probabilities; L = lower p_j, U = upper
    # 1 - p_j, M = median.  min(p,q)(1-max(p,q)) = min(p,q) - p q throughout.
    mn = np.minimum.outer(pj, pj)
    pp = np.outer(pj, pj)
    x_ll = (mn - pp) * np.outer(g_low, g_low) / n
    x_uu = (mn - pp) * np.outer(g_high, g_high) / n
    x_lu = pp * np.outer(g_low, g_high) / n   # xi(p_j, 1 - p_k)
    x_ul = pp * np.outer(g_high, g_low) / n   # xi(1 - p_j, p_k)
    x_lm = pj * 0.5 * g_low * g_med / n       # xi(p_j, 0.5)
    x_um = pj * 0.5 * g_high * g_med / n      # xi(1 - p_j, 0.5)
    x_mm = 0.25 * g_med * g_med / n

    col = np.newaxis
    cov_ss = (
        x_uu + x_ul + x_lu + x_ll
        - 2.0 * x_um[:, col] - 2.0 * x_lm[:, col]
        - 2.0 * x_um[col, :] - 2.0 * x_lm[col, :]
        + 4.0 * x_mm
    )
    if lam and direction is Direction.LEFT:
        cov_sr = x_uu - x_um[:, col] + x_lu - x_lm[:, col] - 2.0 * x_um[col, :] + 2.0 * x_mm
        cov_rs = x_uu + x_ul - 2.0 * x_um[:, col] - x_um[col, :] - x_lm[col, :] + 2.0 * x_mm
        cov_rr = x_uu - x_um[col, :] - x_um[:, col] + x_mm
    elif lam:
        cov_sr = x_um[:, col] - x_ul + x_lm[:, col] - x_ll + 2.0 * x_lm[col, :] - 2.0 * x_mm
        cov_rs = x_um[col, :] + x_lm[col, :] - x_lu - x_ll + 2.0 * x_lm[:, col] - 2.0 * x_mm
        cov_rr = x_ll - x_lm[col, :] - x_lm[:, col] + x_mm
    else:
        cov_sr = x_uu - x_ul + x_lu - x_ll - 2.0 * x_um[col, :] + 2.0 * x_lm[col, :]
        cov_rs = x_uu + x_ul - 2.0 * x_um[:, col] - x_lu - x_ll + 2.0 * x_lm[:, col]
        cov_rr = x_uu - x_ul - x_lu + x_ll

    sigma = (
        n
        * (cov_ss - ratio[col, :] * cov_sr - ratio[:, col] * cov_rs
           + np.outer(ratio, ratio) * cov_rr)
        / np.outer(denom, denom)
    )
    if weighted:
        sigma = pp * sigma
    total = float(sigma.mean())
    if total < 0.0:
        raise NumericalError(
            f"AUC variance double sum came out negative ({total:g}) for "
            f"family={family} weighted={weighted} on a sample of n={k.n} "
            f"with J={grid.j_points}: the plug-in covariance matrix is not PSD"
        )
    return total
