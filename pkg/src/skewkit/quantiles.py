"""Sample quantile estimation (Hyndman-Fan Type 8) and kernel quantile-density
estimation with a pluggable bandwidth rule.

The quantile-density estimator differentiates the kernel-smoothed empirical
quantile function, which reduces to an Epanechnikov-weighted sum of order
statistic spacings.  It is exactly location-invariant and scale-equivariant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import QuantileDensityError

Z_975 = float(special.ndtri(0.975))


@dataclass(frozen=True)
class SortedSample:
    """An ascending, finite data vector of size >= 4."""

    values: np.ndarray

    @classmethod
    def from_data(cls, data) -> "SortedSample":
        arr = np.asarray(data, dtype=float)
        if arr.ndim != 1:
            arr = arr.reshape(-1)
        if not np.all(np.isfinite(arr)):
            bad = int(np.count_nonzero(~np.isfinite(arr)))
            raise ValueError(f"sample contains {bad} non-finite value(s)")
        if arr.size < 4:
            raise ValueError(f"need at least 4 observations, got {arr.size}")
        return cls(values=np.sort(arr))

    @property
    def n(self) -> int:
        return self.values.size

    def transformed(self, scale: float, shift: float) -> "SortedSample":
        """Affine image scale*x + shift (scale > 0 keeps the ordering)."""
        if scale <= 0:
            raise ValueError("scale must be positive")
        return SortedSample(values=self.values * scale + shift)

    def negated(self) -> "SortedSample":
        return SortedSample(values=-self.values[::-1])


def quantile_type8(sample: SortedSample, p):
    """Hyndman-Fan Type 8 sample quantile at probability p (scalar or array).

    Uses the plotting position h = (n + 1/3) p + 1/3, clamped to [1, n], and
    linear interpolation between the two adjacent order statistics.
    """
    probs = np.asarray(p, dtype=float)
    if np.any((probs <= 0.0) | (probs >= 1.0)):
        raise ValueError("probability must lie strictly inside (0, 1)")
    x = sample.values
    n = x.size
    h = np.clip((n + 1.0 / 3.0) * probs + 1.0 / 3.0, 1.0, float(n))
    floor = np.floor(h).astype(np.intp)
    frac = h - floor
    lower = x[floor - 1]
    upper = x[np.minimum(floor + 1, n) - 1]  # h == n falls back on x_(n)
    result = lower + frac * (upper - lower)
    if np.ndim(p) == 0:
        return float(result)
    return result


def default_bandwidth(n: int, p):
    """Distribution-free bandwidth z_0.975 * sqrt(p(1-p)/n), clamped.

    The cap min(p, 1-p) keeps the kernel window inside the unit interval at
    interior probabilities; the floor 1/n guarantees the window always spans
    at least one order-statistic spacing, which matters for extreme grid
    probabilities in small samples (there the floor overrides the cap).
    """
    if n < 4:
        raise ValueError("bandwidth rule needs n >= 4")
    probs = np.asarray(p, dtype=float)
    b = Z_975 * np.sqrt(probs * (1.0 - probs) / n)
    b = np.minimum(b, np.minimum(probs, 1.0 - probs))
    b = np.maximum(b, 1.0 / n)
    if np.ndim(p) == 0:
        return float(b)
    return b


@dataclass(frozen=True)
class BandwidthRule:
    """Either the default rule above or a fixed bandwidth in (0, 0.5)."""

    fixed: float | None = None

    def __post_init__(self):
        if self.fixed is not None and not (0.0 < self.fixed < 0.5):
            raise ValueError("fixed bandwidth must lie in (0, 0.5)")

    def bandwidth(self, n: int, p):
        if self.fixed is not None:
            b = np.full_like(np.asarray(p, dtype=float), self.fixed)
            return float(b) if np.ndim(p) == 0 else b
        return default_bandwidth(n, p)


DEFAULT_BANDWIDTH = BandwidthRule()


def _epanechnikov(u: np.ndarray) -> np.ndarray:
    return np.where(np.abs(u) < 1.0, 0.75 * (1.0 - u * u), 0.0)


def quantile_density_profile(
    sample: SortedSample, probs, rule: BandwidthRule = DEFAULT_BANDWIDTH
) -> np.ndarray:
    """Kernel quantile-density estimates ghat(p) at an array of probabilities.

    ghat(p) = sum_j (X_(j+1) - X_(j)) * k_b(j/n - p), the derivative of the
    Epanechnikov-smoothed empirical quantile function.  Raises
    QuantileDensityError listing every p whose estimate is not strictly
    positive (possible only under ties).
    """
    probs = np.asarray(probs, dtype=float)
    x = sample.values
    n = x.size
    spacings = np.diff(x)
    positions = np.arange(1, n) / n
    b = rule.bandwidth(n, probs)

    out = np.empty(probs.size)
    for i, (p, bw) in enumerate(zip(probs, b)):
        lo = np.searchsorted(positions, p - bw, side="right")
        hi = np.searchsorted(positions, p + bw, side="left")
        u = (positions[lo:hi] - p) / bw
        out[i] = _epanechnikov(u) @ spacings[lo:hi] / bw

    if np.any(out <= 0.0):
        bad = out <= 0.0
        raise QuantileDensityError(probs[bad], np.broadcast_to(b, probs.shape)[bad])
    return out


def quantile_density_estimate(
    sample: SortedSample, p: float, rule: BandwidthRule = DEFAULT_BANDWIDTH
) -> float:
    """Single-probability kernel estimate of 1/f(x_p)."""
    if not (0.0 < p < 1.0):
        raise ValueError("probability must lie strictly inside (0, 1)")
    return float(quantile_density_profile(sample, np.array([p]), rule)[0])
