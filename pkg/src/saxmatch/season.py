"""Season-aware representations (sPAA and sSAX).

A cyclical series is modeled additively as a repeating season mask plus
residuals. The mask holds the per-position averages over all repetitions;
subtracting its tiling leaves residuals whose per-position means are zero.
Encoding keeps the mask and the residual segment means (sPAA) or their
symbols (sSAX). Distances combine a season-symbol difference with a
residual-symbol difference through a four-symbol interval minimum backed by
two signed-bound tables, and lower-bound the Euclidean distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlphabetMismatch, OutOfRange, SeasonMismatch, SegmentMismatch, ShapeMismatch
from .paa_sax import paa
from .quantization import BreakpointVector, SignedBoundTable, discretize_array


@dataclass(eq=False)
class SpaaRepresentation:
    """Season mask (length L) plus residual segment means (length W)."""

    mask: np.ndarray
    res_means: np.ndarray
    T: int
    W: int
    L: int


@dataclass(eq=False)
class SsaxRepresentation:
    """Discretized season mask and residual means."""

    mask_symbols: np.ndarray
    res_symbols: np.ndarray
    T: int
    W: int
    L: int
    season_breakpoints: BreakpointVector
    res_breakpoints: BreakpointVector

    @property
    def season_alphabet(self) -> int:
        return self.season_breakpoints.alphabet_size

    @property
    def res_alphabet(self) -> int:
        return self.res_breakpoints.alphabet_size

    @property
    def bits(self) -> float:
        return self.L * float(np.log2(self.season_alphabet)) + self.W * float(
            np.log2(self.res_alphabet)
        )


def extract_season(x: np.ndarray, L: int) -> tuple[np.ndarray, np.ndarray]:
    """Split a series into its season mask and residuals.

    mask[l] averages all values at seasonal position l; residuals are the
    series minus the tiled mask, so adding the mask back reconstructs the
    series exactly and the residual mean at every position is zero.
    """
    x = np.asarray(x, dtype=np.float64)
    T = x.size
    if not 1 <= L <= T or T % L != 0:
        raise SeasonMismatch(f"L={L} must divide T={T}")
    mask = x.reshape(T // L, L).mean(axis=0)
    residuals = x - np.tile(mask, T // L)
    return mask, residuals


def season_sd_heuristics(mean_strength: float) -> tuple[float, float]:
    """Standard deviations assumed for residuals and season mask.

    Derived from the dataset's mean season strength of normalized series:
    the residual part keeps variance ``1 - strength`` and the season part
    the remainder.
    """
    if not 0.0 <= mean_strength <= 1.0:
        raise OutOfRange(f"strength must lie in [0, 1], got {mean_strength}")
    sd_res = float(np.sqrt(1.0 - mean_strength))
    sd_seas = float(np.sqrt(max(0.0, 1.0 - sd_res * sd_res)))
    return sd_res, sd_seas


def _check_season_segments(T: int, W: int, L: int) -> None:
    if not 1 <= L <= T or T % L != 0:
        raise SeasonMismatch(f"L={L} must divide T={T}")
    if not 1 <= W <= T or T % W != 0 or T % (W * L) != 0:
        raise SegmentMismatch(f"W*L={W}*{L} must divide T={T}")


def spaa(x: np.ndarray, L: int, W: int) -> SpaaRepresentation:
    """Season mask plus PAA of the residuals; requires W*L to divide T."""
    x = np.asarray(x, dtype=np.float64)
    _check_season_segments(x.size, W, L)
    mask, residuals = extract_season(x, L)
    return SpaaRepresentation(mask, paa(residuals, W).means, x.size, W, L)


def ssax_encode(
    x: np.ndarray,
    L: int,
    W: int,
    b_seas: BreakpointVector,
    b_res: BreakpointVector,
) -> SsaxRepresentation:
    rep = spaa(x, L, W)
    return SsaxRepresentation(
        discretize_array(rep.mask, b_seas),
        discretize_array(rep.res_means, b_res),
        rep.T,
        rep.W,
        rep.L,
        b_seas,
        b_res,
    )


def cell4(
    s: int,
    s2: int,
    r: int,
    r2: int,
    cs_seas: SignedBoundTable,
    cs_res: SignedBoundTable,
) -> float:
    """Minimum |(season + residual) - (season' + residual')| over the four intervals.

    Case analysis on the signed gaps: if the unprimed pair sits entirely
    above the primed pair the gap sum is the minimum; symmetrically below;
    otherwise the sum intervals overlap and the minimum is zero. Entries of
    ``-inf`` (sentinel bounds) can never satisfy either case, falling
    through to zero as extended-real comparison dictates.
    """
    g1 = float(cs_seas.entries[s - 1, s2 - 1])
    h1 = float(cs_res.entries[r - 1, r2 - 1])
    if g1 >= -h1:
        return g1 + h1
    g2 = float(cs_seas.entries[s2 - 1, s - 1])
    h2 = float(cs_res.entries[r2 - 1, r - 1])
    if g2 >= -h2:
        return g2 + h2
    return 0.0


def _check_ssax_pair(r1: SsaxRepresentation, r2: SsaxRepresentation) -> None:
    if r1.T != r2.T or r1.W != r2.W or r1.L != r2.L:
        raise ShapeMismatch(
            f"representations disagree: (T={r1.T}, W={r1.W}, L={r1.L})"
            f" vs (T={r2.T}, W={r2.W}, L={r2.L})"
        )
    if r1.season_alphabet != r2.season_alphabet or r1.res_alphabet != r2.res_alphabet:
        raise AlphabetMismatch("symbol alphabets disagree")


def d_spaa(r1: SpaaRepresentation, r2: SpaaRepresentation) -> float:
    """sPAA distance over all (season position, segment) combinations."""
    if r1.T != r2.T or r1.W != r2.W or r1.L != r2.L:
        raise ShapeMismatch(
            f"representations disagree: (T={r1.T}, W={r1.W}, L={r1.L})"
            f" vs (T={r2.T}, W={r2.W}, L={r2.L})"
        )
    dm = r1.mask - r2.mask
    dr = r1.res_means - r2.res_means
    total = np.sum((dm[:, None] + dr[None, :]) ** 2)
    return float(np.sqrt(r1.T / (r1.W * r1.L)) * np.sqrt(total))


def _cell4_grid(
    S1: np.ndarray, S2: np.ndarray, R1: np.ndarray, R2: np.ndarray
) -> np.ndarray:
    """Vectorized four-symbol minimum over season rows x residual columns.

    The two cases are mutually exclusive (their gap sums cannot both be
    non-negative), so the selection order does not matter.
    """
    with np.errstate(invalid="ignore"):
        case1 = S1[..., :, None] >= -R1[..., None, :]
        case2 = S2[..., :, None] >= -R2[..., None, :]
        v1 = S1[..., :, None] + R1[..., None, :]
        v2 = S2[..., :, None] + R2[..., None, :]
    return np.where(case1, v1, np.where(case2, v2, 0.0))


def d_ssax(
    r1: SsaxRepresentation,
    r2: SsaxRepresentation,
    cs_seas: SignedBoundTable,
    cs_res: SignedBoundTable,
) -> float:
    """sSAX distance: four-symbol minima across all (l, w) pairs."""
    _check_ssax_pair(r1, r2)
    if cs_seas.alphabet_size != r1.season_alphabet or cs_res.alphabet_size != r1.res_alphabet:
        raise AlphabetMismatch("lookup tables built for different alphabets")
    S1 = cs_seas.entries[r1.mask_symbols - 1, r2.mask_symbols - 1]
    S2 = cs_seas.entries[r2.mask_symbols - 1, r1.mask_symbols - 1]
    R1 = cs_res.entries[r1.res_symbols - 1, r2.res_symbols - 1]
    R2 = cs_res.entries[r2.res_symbols - 1, r1.res_symbols - 1]
    cells = _cell4_grid(S1, S2, R1, R2)
    return float(np.sqrt(r1.T / (r1.W * r1.L)) * np.sqrt(np.sum(cells * cells)))


def ssax_distances(
    query_mask_symbols: np.ndarray,
    query_res_symbols: np.ndarray,
    mask_symbols: np.ndarray,
    res_symbols: np.ndarray,
    cs_seas: SignedBoundTable,
    cs_res: SignedBoundTable,
    T: int,
) -> np.ndarray:
    """sSAX distances from one query to I stored rows at once.

    ``mask_symbols`` is (I, L) and ``res_symbols`` (I, W); the result is
    bit-identical to the pairwise :func:`d_ssax` per row.
    """
    L = query_mask_symbols.size
    W = query_res_symbols.size
    S1 = cs_seas.entries[query_mask_symbols[None, :] - 1, mask_symbols - 1]
    S2 = cs_seas.entries[mask_symbols - 1, query_mask_symbols[None, :] - 1]
    R1 = cs_res.entries[query_res_symbols[None, :] - 1, res_symbols - 1]
    R2 = cs_res.entries[res_symbols - 1, query_res_symbols[None, :] - 1]
    cells = _cell4_grid(S1, S2, R1, R2)
    return np.sqrt(T / (W * L)) * np.sqrt(np.sum(cells * cells, axis=(1, 2)))
