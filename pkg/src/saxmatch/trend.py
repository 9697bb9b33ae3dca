"""Trend-aware representations (tPAA and tSAX).

A series with long-term drift is modeled as a fitted straight line plus
residuals. Ordinary least squares on the time axis gives an intercept and a
slope; for a normalized series the intercept is determined by the slope, so
a single angle ``arctan(slope)`` carries the whole trend component. The
angle is bounded by :func:`phi_max`, reached only by a perfect line, which
makes a uniform alphabet over ``[-phi_max, phi_max]`` natural. Distances
combine the angle-symbol minimum (one lookup) with the residual SAX
distance (W lookups) and lower-bound the Euclidean distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlphabetMismatch, DegenerateLength, OutOfRange, ShapeMismatch
from .paa_sax import paa
from .quantization import (
    BreakpointVector,
    CellTable,
    TrendCellTable,
    discretize,
    discretize_array,
    phi_limit,
)


@dataclass(eq=False)
class TrendFeatures:
    """Fitted line (intercept, slope), its angle, and the residual vector."""

    intercept: float
    slope: float
    angle: float
    residuals: np.ndarray


@dataclass(eq=False)
class TpaaRepresentation:
    """Trend angle plus residual segment means."""

    angle: float
    res_means: np.ndarray
    T: int
    W: int


@dataclass(eq=False)
class TsaxRepresentation:
    """Discretized trend angle and residual means."""

    angle_symbol: int
    res_symbols: np.ndarray
    T: int
    W: int
    trend_breakpoints: BreakpointVector
    res_breakpoints: BreakpointVector

    @property
    def trend_alphabet(self) -> int:
        return self.trend_breakpoints.alphabet_size

    @property
    def res_alphabet(self) -> int:
        return self.res_breakpoints.alphabet_size

    @property
    def bits(self) -> float:
        return float(np.log2(self.trend_alphabet)) + self.W * float(np.log2(self.res_alphabet))


def fit_trend(x: np.ndarray) -> TrendFeatures:
    """Least-squares line through the series over the time axis 0..T-1.

    The fit leaves residuals that sum to zero and are uncorrelated with the
    fitted line; for normalized input the slope and intercept additionally
    satisfy ``slope = -2 * intercept / (T - 1)``.
    """
    x = np.asarray(x, dtype=np.float64)
    T = x.size
    if T < 2:
        raise DegenerateLength(f"trend fit requires T >= 2, got {T}")
    t = np.arange(T, dtype=np.float64)
    tc = t - (T - 1) / 2.0
    slope = float(np.dot(tc, x) / np.dot(tc, tc))
    intercept = float(np.mean(x)) - slope * (T - 1) / 2.0
    residuals = x - (intercept + slope * t)
    return TrendFeatures(intercept, slope, float(np.arctan(slope)), residuals)


def phi_max(T: int) -> float:
    """Largest angle reachable by a normalized length-T series."""
    if T < 2:
        raise DegenerateLength(f"need T >= 2, got {T}")
    return phi_limit(T)


def trend_residual_sd(mean_strength: float) -> float:
    """Residual standard deviation assumed from the dataset's mean trend strength."""
    if not 0.0 <= mean_strength <= 1.0:
        raise OutOfRange(f"strength must lie in [0, 1], got {mean_strength}")
    return float(np.sqrt(1.0 - mean_strength))


def tpaa(x: np.ndarray, W: int) -> TpaaRepresentation:
    """Trend angle plus PAA of the trend-fit residuals."""
    features = fit_trend(x)
    rep = paa(features.residuals, W)
    return TpaaRepresentation(features.angle, rep.means, rep.T, rep.W)


def tsax_encode(
    x: np.ndarray, W: int, b_tr: BreakpointVector, b_res: BreakpointVector
) -> TsaxRepresentation:
    rep = tpaa(x, W)
    return TsaxRepresentation(
        discretize(rep.angle, b_tr),
        discretize_array(rep.res_means, b_res),
        rep.T,
        rep.W,
        b_tr,
        b_res,
    )


def d_tpaa(r1: TpaaRepresentation, r2: TpaaRepresentation) -> float:
    """tPAA distance: full-length sum over trend difference plus residual means.

    The trend component is recovered from the angle alone: slope from tan,
    intercept from the normalized-series identity.
    """
    if r1.T != r2.T or r1.W != r2.W:
        raise ShapeMismatch(
            f"representations disagree: (T={r1.T}, W={r1.W}) vs (T={r2.T}, W={r2.W})"
        )
    T, W = r1.T, r1.W
    t = np.arange(T, dtype=np.float64)
    d_slope = np.tan(r1.angle) - np.tan(r2.angle)
    d_intercept = -d_slope * (T - 1) / 2.0
    d_res = np.repeat(r1.res_means - r2.res_means, T // W)
    diffs = d_intercept + d_slope * t + d_res
    return float(np.sqrt(np.sum(diffs * diffs)))


def d_tsax(
    r1: TsaxRepresentation,
    r2: TsaxRepresentation,
    ct: TrendCellTable,
    cell_res: CellTable,
) -> float:
    """tSAX distance: one trend lookup plus W residual lookups."""
    if r1.T != r2.T or r1.W != r2.W or ct.length != r1.T:
        raise ShapeMismatch(
            f"representations disagree: (T={r1.T}, W={r1.W}) vs (T={r2.T}, W={r2.W});"
            f" trend table built for T={ct.length}"
        )
    if (
        r1.trend_alphabet != r2.trend_alphabet
        or r1.res_alphabet != r2.res_alphabet
        or ct.alphabet_size != r1.trend_alphabet
        or cell_res.alphabet_size != r1.res_alphabet
    ):
        raise AlphabetMismatch("symbol alphabets disagree")
    trend_term = ct.entries[r1.angle_symbol - 1, r2.angle_symbol - 1]
    cells = cell_res.entries[r1.res_symbols - 1, r2.res_symbols - 1]
    return float(np.sqrt(trend_term * trend_term + (r1.T / r1.W) * np.sum(cells * cells)))


def tsax_distances(
    query_angle_symbol: int,
    query_res_symbols: np.ndarray,
    angle_symbols: np.ndarray,
    res_symbols: np.ndarray,
    ct: TrendCellTable,
    cell_res: CellTable,
    T: int,
) -> np.ndarray:
    """tSAX distances from one query to I stored rows at once."""
    W = query_res_symbols.size
    trend_terms = ct.entries[query_angle_symbol - 1, angle_symbols - 1]
    cells = cell_res.entries[query_res_symbols[None, :] - 1, res_symbols - 1]
    return np.sqrt(trend_terms * trend_terms + (T / W) * np.sum(cells * cells, axis=1))
