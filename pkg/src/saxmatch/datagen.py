"""Synthetic dataset generation with controlled component strength.

Each series starts from a Gaussian random walk. The walk's own incidental
season (or trend) is removed first, leaving a component-free base; a fresh
deterministic component (a random centered season mask tiled over the
series, or a centered unit-slope line) is then added at a scale found by
bisection so the measured post-normalization strength lands within the
requested tolerance. Removing the incidental component first is what makes
every target in [0, 1) reachable: a raw random walk routinely carries a
large incidental trend strength of its own.

Generation is deterministic and embarrassingly parallel: series ``i`` of a
dataset draws from a PCG64 generator seeded with ``SeedSequence((seed, i))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, component_strength, normalize
from .errors import ConvergenceFailure, ValidationError
from .season import extract_season
from .trend import fit_trend

KINDS = ("season", "trend")

BISECTION_MAX_SCALE = 1e4
BISECTION_MAX_ITER = 200
MAX_REGENERATIONS = 50


@dataclass(frozen=True)
class GenSpec:
    """Recipe for one synthetic dataset."""

    kind: str
    count: int
    length: int
    season_length: int = 10
    target_strength: float = 0.5
    tolerance: float = 0.005
    seed: int = 0
    strength_spread: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.count < 1 or self.length < 2:
            raise ValidationError("need count >= 1 and length >= 2")
        if self.kind == "season" and self.length % self.season_length != 0:
            raise ValidationError(
                f"season length {self.season_length} must divide series length {self.length}"
            )
        if not 0.0 < self.tolerance < 0.5:
            raise ValidationError(f"tolerance must lie in (0, 0.5), got {self.tolerance}")
        if not 0.0 <= self.target_strength <= 1.0 - self.tolerance:
            raise ValidationError(
                f"target strength {self.target_strength} +/- {self.tolerance} must stay below 1"
            )
        if self.strength_spread < 0.0:
            raise ValidationError("strength spread must be non-negative")


def series_rng(seed: int, i: int) -> np.random.Generator:
    """Deterministic per-series generator: PCG64 over SeedSequence((seed, i))."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed & (2**64 - 1), i))))


def random_walk(T: int, rng: np.random.Generator) -> np.ndarray:
    """Cumulative sum of i.i.d. standard normal steps; starts at the first step."""
    if T < 2:
        raise ValidationError(f"need T >= 2, got {T}")
    return np.cumsum(rng.standard_normal(T))


def _component_free_base(walk: np.ndarray, spec: GenSpec) -> np.ndarray:
    if spec.kind == "season":
        _, base = extract_season(walk, spec.season_length)
    else:
        base = fit_trend(walk).residuals
    return base


def _draw_component(spec: GenSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.kind == "season":
        mask = rng.standard_normal(spec.season_length)
        mask -= mask.mean()
        return np.tile(mask, spec.length // spec.season_length)
    t = np.arange(spec.length, dtype=np.float64)
    return t - (spec.length - 1) / 2.0


def measure_strength(x: np.ndarray, spec: GenSpec) -> float:
    """Strength of the spec's component kind, measured by the real extractor."""
    if spec.kind == "season":
        _, residuals = extract_season(x, spec.season_length)
    else:
        residuals = fit_trend(x).residuals
    return component_strength(x, residuals)


def gen_series(
    spec: GenSpec, rng: np.random.Generator, target: float | None = None
) -> tuple[np.ndarray, float]:
    """One normalized series whose measured strength is within tolerance.

    Returns the series and its measured strength. Raises
    :class:`ConvergenceFailure` if bisection cannot reach tolerance even
    after regenerating the base walk.
    """
    target = spec.target_strength if target is None else target
    for _ in range(MAX_REGENERATIONS):
        walk = random_walk(spec.length, rng)
        base = _component_free_base(walk, spec)
        if float(base.max()) == float(base.min()):
            continue
        component = _draw_component(spec, rng)

        def measured(scale: float) -> float:
            return measure_strength(normalize(base + scale * component), spec)

        # strength grows monotonically with the scale: the base is exactly
        # orthogonal to the injected component under both extractors
        lo, hi = 0.0, BISECTION_MAX_SCALE
        if abs(measured(lo) - target) <= spec.tolerance:
            scale = lo
        elif measured(hi) < target:
            continue
        else:
            scale = None
            for _ in range(BISECTION_MAX_ITER):
                mid = 0.5 * (lo + hi)
                value = measured(mid)
                if abs(value - target) <= 0.2 * spec.tolerance:
                    scale = mid
                    break
                if value < target:
                    lo = mid
                else:
                    hi = mid
            if scale is None:
                continue
        series = normalize(base + scale * component)
        strength = measure_strength(series, spec)
        if abs(strength - target) <= spec.tolerance:
            return series, strength
    raise ConvergenceFailure(
        f"could not reach strength {target} +/- {spec.tolerance} after"
        f" {MAX_REGENERATIONS} walks"
    )


def _series_target(spec: GenSpec, rng: np.random.Generator) -> float:
    if spec.strength_spread == 0.0:
        return spec.target_strength
    lo = max(0.0, spec.target_strength - spec.strength_spread)
    hi = min(1.0 - spec.tolerance, spec.target_strength + spec.strength_spread)
    return float(rng.uniform(lo, hi))


def gen_dataset(spec: GenSpec) -> Dataset:
    """Generate all series of a dataset, recording both measured strengths.

    The season strength of every series is measured with the spec's season
    length whenever it divides the series length (NaN otherwise); the trend
    strength is always measured. Both feed the encoders' heuristics later.
    """
    values = np.empty((spec.count, spec.length), dtype=np.float64)
    season_strengths = np.full(spec.count, np.nan)
    trend_strengths = np.empty(spec.count)
    measure_season = spec.length % spec.season_length == 0
    for i in range(spec.count):
        rng = series_rng(spec.seed, i)
        target = _series_target(spec, rng)
        series, _ = gen_series(spec, rng, target=target)
        values[i] = series
        if measure_season:
            _, res = extract_season(series, spec.season_length)
            season_strengths[i] = component_strength(series, res)
        trend_strengths[i] = component_strength(series, fit_trend(series).residuals)
    return Dataset(
        values,
        kind=spec.kind,
        season_length=spec.season_length if measure_season else None,
        season_strengths=season_strengths,
        trend_strengths=trend_strengths,
    )
