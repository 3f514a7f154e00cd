"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SkewkitError(Exception):
    """Base class for all skewkit errors."""


class DegenerateScaleError(SkewkitError):
    """A quantile-based denominator is zero (too many ties in the data).

    ``probabilities`` lists every p at which the scale collapsed.
    """

    def __init__(self, probabilities, detail: str = ""):
        self.probabilities = tuple(float(p) for p in probabilities)
        ps = ", ".join(f"{p:g}" for p in self.probabilities)
        msg = f"degenerate scale (zero denominator) at p = {ps}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class QuantileDensityError(SkewkitError):
    """Kernel quantile-density estimate came out non-positive.

    Happens in tiny samples or under heavy ties; the standard error for the
    affected probability cannot be formed.
    """

    def __init__(self, probabilities, bandwidths):
        self.probabilities = tuple(float(p) for p in probabilities)
        self.bandwidths = tuple(float(b) for b in bandwidths)
        pairs = ", ".join(
            f"(p={p:g}, b={b:g})" for p, b in zip(self.probabilities, self.bandwidths)
        )
        super().__init__(f"non-positive quantile-density estimate at {pairs}")


class MissingProbabilityError(SkewkitError):
    """A covariance expansion referenced a probability the kernel never saw."""

    def __init__(self, p: float):
        self.p = float(p)
        super().__init__(
            f"probability {p:g} was not precomputed in the xi kernel"
        )


class UnsupportedMeasureError(SkewkitError):
    """The requested operation is undefined for this measure (e.g. a CI for b3)."""


class NumericalError(SkewkitError):
    """A computation produced a value outside its mathematically valid range."""
