"""Seeded Monte Carlo coverage studies.

Each trial draws its own generator from the (master seed, trial index) pair,
so trials are order-independent and the report is identical for any thread
count.  Results land in arrays indexed by trial and are reduced in fixed
index order.
"""

from __future__ import annotations

import json
import os
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distributions import DistributionSpec, parse_distribution
from .errors import SkewkitError
from .inference import interval
from .quantiles import BandwidthRule, DEFAULT_BANDWIDTH, SortedSample
from .skewness import Direction, MeasureKind, SkewMeasure, parse_measure, population_measure

MAX_FAILURE_RATE = 0.01


def coverage_standard_error(trials: int, p0: float) -> float:
    """Binomial standard error sqrt(p0 (1 - p0) / trials) of a coverage estimate."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    return float(np.sqrt(p0 * (1.0 - p0) / trials))


@dataclass(frozen=True)
class SimConfig:
    dist: DistributionSpec
    n: int
    trials: int
    measures: tuple[SkewMeasure, ...]
    seed: int
    level: float = 0.95
    threads: int | str = "auto"
    bandwidth: BandwidthRule = DEFAULT_BANDWIDTH

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.n < 10:
            raise ValueError("per-trial sample size must be at least 10")
        if not self.measures:
            raise ValueError("at least one measure is required")
        for m in self.measures:
            if m.kind is MeasureKind.B3:
                raise ValueError("b3 has no interval estimator; drop it from coverage runs")
        if not (0.0 < self.level < 1.0):
            raise ValueError("level must lie strictly inside (0, 1)")
        if isinstance(self.threads, str):
            if self.threads != "auto":
                raise ValueError("threads must be a positive integer or 'auto'")
        elif self.threads < 1:
            raise ValueError("threads must be a positive integer or 'auto'")

    @classmethod
    def from_dict(cls, doc: dict) -> "SimConfig":
        """Build from the JSON document schema used by the CLI."""
        try:
            dist = parse_distribution(doc["dist"])
            direction = Direction(doc.get("direction", "right"))
            j_points = int(doc.get("j", 100))
            measures = tuple(
                parse_measure(tok, direction=direction, j_points=j_points)
                for tok in doc["measures"]
            )
            bw = doc.get("bandwidth", "default")
            rule = DEFAULT_BANDWIDTH if bw == "default" else BandwidthRule(fixed=float(bw))
            return cls(
                dist=dist,
                n=int(doc["n"]),
                trials=int(doc["trials"]),
                measures=measures,
                seed=int(doc["seed"]),
                level=float(doc.get("level", 0.95)),
                threads=doc.get("threads", "auto"),
                bandwidth=rule,
            )
        except KeyError as exc:
            raise ValueError(f"simulation config is missing required key {exc}") from None

    def to_dict(self) -> dict:
        # Execution knobs (threads) are deliberately not echoed: the report
        # content is identical for every thread count.
        bw = "default" if self.bandwidth.fixed is None else self.bandwidth.fixed
        return {
            "dist": repr(self.dist),
            "n": self.n,
            "trials": self.trials,
            "level": self.level,
            "measures": [m.label() for m in self.measures],
            "direction": self.measures[0].direction.value,
            "seed": self.seed,
            "bandwidth": bw,
        }

    def resolved_threads(self) -> int:
        if self.threads == "auto":
            return os.cpu_count() or 1
        return int(self.threads)


@dataclass(frozen=True)
class MeasureCoverage:
    measure: SkewMeasure
    truth: float
    coverage: float
    mean_width: float
    failures: int

    def to_dict(self) -> dict:
        return {
            "measure": self.measure.label(),
            "truth": self.truth,
            "coverage": self.coverage,
            "mean_width": self.mean_width,
            "failures": self.failures,
        }


@dataclass(frozen=True)
class CoverageReport:
    config: SimConfig
    results: tuple[MeasureCoverage, ...]
    failure_reasons: dict = field(default_factory=dict)
    elapsed_seconds: float = 0.0

    @property
    def failure_rate_exceeded(self) -> bool:
        return any(
            r.failures > MAX_FAILURE_RATE * self.config.trials for r in self.results
        )

    def to_dict(self) -> dict:
        # elapsed_seconds is wall time, reported on stderr by the CLI instead,
        # so that equal-seed runs serialize byte-identically.
        return {
            "config": self.config.to_dict(),
            "results": [r.to_dict() for r in self.results],
            "failure_reasons": dict(self.failure_reasons),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def render_text(self) -> str:
        """Aligned table with the coverage(width) cell layout, e.g. 0.961(1.98)."""
        lines = [f"{'measure':<18} {'truth':>12}  cp(w)"]
        for r in self.results:
            cell = f"{r.coverage:.3f}({r.mean_width:.3g})"
            lines.append(f"{r.measure.label():<18} {r.truth:>12.6g}  {cell}")
        return "\n".join(lines)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, trial)))


def _run_trial(cfg: SimConfig, trial: int, truths, covered, widths, failed, reasons: Counter):
    rng = _trial_rng(cfg.seed, trial)
    sample = SortedSample.from_data(cfg.dist.sample(cfg.n, rng))
    for mi, (measure, truth) in enumerate(zip(cfg.measures, truths)):
        try:
            iv = interval(sample, measure, cfg.level, cfg.bandwidth)
        except SkewkitError as exc:
            failed[trial, mi] = True
            reasons[type(exc).__name__] += 1
            continue
        covered[trial, mi] = iv.lower <= truth <= iv.upper
        widths[trial, mi] = iv.upper - iv.lower


def run_coverage(cfg: SimConfig) -> CoverageReport:
    """Estimate coverage probability and mean CI width for every measure.

    Per-measure failures (degenerate scale, non-positive density estimates)
    are excluded from the coverage denominator and tallied; they are never
    silently dropped.
    """
    start = time.perf_counter()
    truths = [population_measure(cfg.dist, m) for m in cfg.measures]
    trials, n_measures = cfg.trials, len(cfg.measures)
    covered = np.zeros((trials, n_measures), dtype=bool)
    widths = np.full((trials, n_measures), np.nan)
    failed = np.zeros((trials, n_measures), dtype=bool)

    workers = min(cfg.resolved_threads(), trials)
    if workers <= 1:
        reasons = Counter()
        for t in range(trials):
            _run_trial(cfg, t, truths, covered, widths, failed, reasons)
    else:
        chunk = max(1, -(-trials // (4 * workers)))
        ranges = [(lo, min(lo + chunk, trials)) for lo in range(0, trials, chunk)]

        def run_range(bounds):
            local = Counter()
            for t in range(*bounds):
                _run_trial(cfg, t, truths, covered, widths, failed, local)
            return local

        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run_range, ranges))
        reasons = Counter()
        for part in partials:  # merge in submission order
            reasons.update(part)

    results = []
    for mi, (measure, truth) in enumerate(zip(cfg.measures, truths)):
        n_failed = int(failed[:, mi].sum())
        n_ok = trials - n_failed
        if n_ok > 0:
            cov = float(covered[:, mi].sum()) / n_ok
            width = float(np.where(failed[:, mi], 0.0, widths[:, mi]).sum()) / n_ok
        else:
            cov = float("nan")
            width = float("nan")
        results.append(
            MeasureCoverage(
                measure=measure, truth=truth, coverage=cov,
                mean_width=width, failures=n_failed,
            )
        )
    elapsed = time.perf_counter() - start
    return CoverageReport(
        config=cfg,
        results=tuple(results),
        failure_reasons=dict(sorted(reasons.items())),
        elapsed_seconds=elapsed,
    )
