"""Piecewise aggregate approximation (PAA) and symbolic approximation (SAX).

PAA reduces a length-T series to W segment means; SAX discretizes those
means into a small alphabet. Both distance measures lower-bound the
Euclidean distance of the originating series, which is what makes them safe
for pruning during matching.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlphabetMismatch, SegmentMismatch, ShapeMismatch
from .quantization import BreakpointVector, CellTable, discretize_array


@dataclass(eq=False)
class PaaRepresentation:
    """W segment means of a length-T series."""

    means: np.ndarray
    T: int
    W: int


@dataclass(eq=False)
class SaxRepresentation:
    """W symbols over an alphabet defined by ``breakpoints``."""

    symbols: np.ndarray
    T: int
    W: int
    breakpoints: BreakpointVector

    @property
    def alphabet_size(self) -> int:
        return self.breakpoints.alphabet_size

    @property
    def bits(self) -> float:
        """Representation size in bits, fractional log2 accounting."""
        return self.W * float(np.log2(self.alphabet_size))


def _check_segments(T: int, W: int) -> None:
    if not 1 <= W <= T or T % W != 0:
        raise SegmentMismatch(f"W={W} must divide T={T}")


def paa(x: np.ndarray, W: int) -> PaaRepresentation:
    """Segment means: mean_w = (W/T) * sum of the w-th block of T/W values."""
    x = np.asarray(x, dtype=np.float64)
    T = x.size
    _check_segments(T, W)
    means = x.reshape(W, T // W).mean(axis=1)
    return PaaRepresentation(means, T, W)


def sax_encode(x: np.ndarray, W: int, b: BreakpointVector) -> SaxRepresentation:
    """Discretize the PAA means into the alphabet defined by ``b``."""
    rep = paa(x, W)
    return SaxRepresentation(discretize_array(rep.means, b), rep.T, rep.W, b)


def _check_shapes(r1, r2) -> None:
    if r1.T != r2.T or r1.W != r2.W:
        raise ShapeMismatch(
            f"representations disagree: (T={r1.T}, W={r1.W}) vs (T={r2.T}, W={r2.W})"
        )


def d_paa(r1: PaaRepresentation, r2: PaaRepresentation) -> float:
    """PAA distance: sqrt(T/W) * l2-norm of the mean differences."""
    _check_shapes(r1, r2)
    return float(np.sqrt(r1.T / r1.W) * np.linalg.norm(r1.means - r2.means))


def d_sax(r1: SaxRepresentation, r2: SaxRepresentation, table: CellTable) -> float:
    """SAX distance via W cell-table lookups."""
    _check_shapes(r1, r2)
    if r1.alphabet_size != r2.alphabet_size or table.alphabet_size != r1.alphabet_size:
        raise AlphabetMismatch("symbol alphabets disagree")
    cells = table.entries[r1.symbols - 1, r2.symbols - 1]
    return float(np.sqrt(r1.T / r1.W) * np.sqrt(np.sum(cells * cells)))


def sax_distances(
    query_symbols: np.ndarray, symbols: np.ndarray, table: CellTable, T: int, W: int
) -> np.ndarray:
    """SAX distances from one query symbol vector to I stored rows at once.

    ``symbols`` has shape (I, W); result is the (I,) vector of distances,
    bit-identical to calling :func:`d_sax` row by row.
    """
    cells = table.entries[query_symbols[None, :] - 1, symbols - 1]
    return np.sqrt(T / W) * np.sqrt(np.sum(cells * cells, axis=1))
