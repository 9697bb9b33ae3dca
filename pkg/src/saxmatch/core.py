"""Fundamental time-series types, normalization, and distance primitives.

A time series is a fixed-length 1-D ``float64`` array of finite values.
A *normalized* series additionally has sample mean 0 and sample variance 1.
Throughout the package the variance divisor is ``T`` (population form);
:data:`VARIANCE_DDOF` records the convention, and every internal identity
(strengths, trend-angle bounds) uses the same divisor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatch, ValidationError, ZeroVariance

logger = logging.getLogger(__name__)

# Population variance (divisor T) everywhere.
VARIANCE_DDOF = 0

# Normalized-series guarantees: |mean| and |var - 1| stay below this.
NORMALIZATION_TOL = 1e-9

CLAMP_LOG_TOL = 1e-9


def as_series(values) -> np.ndarray:
    """Coerce ``values`` to a valid time series array.

    Returns a contiguous 1-D float64 copy-or-view with T >= 1 and all
    values finite.
    """
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"time series must be 1-D, got shape {arr.shape}")
    if arr.size < 1:
        raise ValidationError("time series must contain at least one value")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("time series contains NaN or infinite values")
    return arr


def normalize(x) -> np.ndarray:
    """Rescale a series to mean 0 and (population) variance 1.

    Raises
    ------
    ZeroVariance
        If the input is constant; such series are rejected at ingestion.
    """
    arr = as_series(x)
    if arr.size < 2:
        raise ValidationError("normalization requires T >= 2")
    if float(arr.max()) == float(arr.min()):
        raise ZeroVariance("constant series cannot be normalized")
    mean = float(np.mean(arr))
    sd = float(np.std(arr))
    if sd <= 0.0:
        raise ZeroVariance("constant series cannot be normalized")
    return (arr - mean) / sd


def is_normalized(x: np.ndarray, tol: float = NORMALIZATION_TOL) -> bool:
    """Check the normalized-series invariants (mean ~ 0, variance ~ 1)."""
    return abs(float(np.mean(x))) <= tol and abs(float(np.var(x)) - 1.0) <= tol


def euclidean_distance(x: np.ndarray, x2: np.ndarray) -> float:
    """Euclidean distance between two equal-length series."""
    if len(x) != len(x2):
        raise LengthMismatch(f"lengths differ: {len(x)} vs {len(x2)}")
    return float(np.linalg.norm(np.asarray(x, dtype=np.float64) - np.asarray(x2, dtype=np.float64)))


def component_strength(x: np.ndarray, residuals: np.ndarray) -> float:
    """Fraction of a series' variance explained by an extracted component.

    Computes ``1 - var(residuals) / var(x)`` and clamps to [0, 1]; a clamp
    larger than floating-point noise is logged. Both extractors in this
    package (season mask, fitted trend) never increase variance, so the raw
    ratio only leaves [0, 1] by rounding.
    """
    x = np.asarray(x, dtype=np.float64)
    residuals = np.asarray(residuals, dtype=np.float64)
    if len(x) != len(residuals):
        raise LengthMismatch(f"lengths differ: {len(x)} vs {len(residuals)}")
    var_x = float(np.var(x))
    if var_x <= 0.0:
        raise ZeroVariance("strength undefined for a constant series")
    raw = 1.0 - float(np.var(residuals)) / var_x
    clamped = min(1.0, max(0.0, raw))
    if abs(clamped - raw) > CLAMP_LOG_TOL:
        logger.warning("component strength %.6g clamped to %.1f", raw, clamped)
    return clamped


@dataclass(eq=False)
class Dataset:
    """An ordered collection of I normalized series of identical length.

    ``values`` has shape (I, T). Per-series measured component strengths and
    the season length used to measure them travel with the data; they feed
    the breakpoint heuristics of the season- and trend-aware encoders.
    """

    values: np.ndarray
    kind: str | None = None
    season_length: int | None = None
    season_strengths: np.ndarray | None = field(default=None, repr=False)
    trend_strengths: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] < 1:
            raise ValidationError("dataset requires a non-empty (I, T) array")

    @property
    def size(self) -> int:
        return int(self.values.shape[0])

    @property
    def length(self) -> int:
        return int(self.values.shape[1])

    @property
    def mean_season_strength(self) -> float | None:
        if self.season_strengths is None:
            return None
        finite = self.season_strengths[np.isfinite(self.season_strengths)]
        return float(np.mean(finite)) if finite.size else None

    @property
    def mean_trend_strength(self) -> float | None:
        if self.trend_strengths is None:
            return None
        finite = self.trend_strengths[np.isfinite(self.trend_strengths)]
        return float(np.mean(finite)) if finite.size else None
