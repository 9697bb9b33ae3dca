"""Breakpoint construction, symbol discretization, and distance lookup tables.

Symbols are 1-based integers in [1, A]. Symbol ``a`` occupies the half-open
interval ``[b[a-1], b[a])`` with sentinels ``b[0] = -inf`` and ``b[A] = +inf``;
a value exactly on a breakpoint belongs to the upper interval. For display,
alphabets up to 26 use letters (symbol 1 = "a").

Three table shapes back the distance measures:

* :class:`CellTable` - pairwise minimum distance between two symbol
  intervals over the same breakpoints; zero on and adjacent to the diagonal.
* :class:`SignedBoundTable` - signed gap ``lower_bound(a) - upper_bound(a')``
  with ``-inf`` wherever a sentinel bound is involved; two of these combine
  into the four-symbol season/residual minimum (see :func:`saxmatch.season.cell4`).
* :class:`TrendCellTable` - minimum Euclidean distance between two
  full-length straight-line components whose angles fall into the respective
  intervals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import (
    BreakpointOutOfRange,
    InvalidAlphabet,
    InvalidRange,
    InvalidSd,
    OutOfDomain,
)

# Lookup tables are capped at 4 MB of 32-bit cells, i.e. a 1024-symbol alphabet.
MAX_ALPHABET = 1024


def normal_quantile(p: float) -> float:
    """Standard normal quantile, accurate to well below 1e-9 in CDF terms."""
    if not 0.0 < p < 1.0:
        raise OutOfDomain(f"quantile argument must lie in (0, 1), got {p}")
    return float(ndtri(p))


@dataclass(frozen=True, eq=False)
class BreakpointVector:
    """Strictly increasing interval boundaries defining an A-symbol alphabet."""

    bounds: np.ndarray

    def __post_init__(self) -> None:
        bounds = np.array(self.bounds, dtype=np.float64, copy=True)
        if bounds.ndim != 1:
            raise InvalidRange("breakpoints must form a 1-D vector")
        if bounds.size and not np.all(np.diff(bounds) > 0):
            raise InvalidRange("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(bounds)):
            raise InvalidRange("breakpoints must be finite")
        bounds.setflags(write=False)
        object.__setattr__(self, "bounds", bounds)

    @property
    def alphabet_size(self) -> int:
        return int(self.bounds.size) + 1

    def lower_bound(self, a: int) -> float:
        """Lower edge of symbol ``a``'s interval (-inf for a = 1)."""
        self._check_symbol(a)
        return -np.inf if a == 1 else float(self.bounds[a - 2])

    def upper_bound(self, a: int) -> float:
        """Upper edge of symbol ``a``'s interval (+inf for a = A)."""
        self._check_symbol(a)
        return np.inf if a == self.alphabet_size else float(self.bounds[a - 1])

    def _check_symbol(self, a: int) -> None:
        if not 1 <= a <= self.alphabet_size:
            raise InvalidAlphabet(f"symbol {a} outside [1, {self.alphabet_size}]")


def _check_alphabet(A: int, minimum: int = 2) -> None:
    if not isinstance(A, (int, np.integer)) or not minimum <= A <= MAX_ALPHABET:
        raise InvalidAlphabet(f"alphabet size must lie in [{minimum}, {MAX_ALPHABET}], got {A}")


def gaussian_breakpoints(A: int, sd: float) -> BreakpointVector:
    """Breakpoints splitting N(0, sd) into A equiprobable regions."""
    _check_alphabet(A)
    if not sd > 0.0:
        raise InvalidSd(f"standard deviation must be positive, got {sd}")
    probs = np.arange(1, A, dtype=np.float64) / A
    return BreakpointVector(sd * ndtri(probs))


def uniform_breakpoints(A: int, lo: float, hi: float) -> BreakpointVector:
    """Breakpoints splitting [lo, hi] into A equal-width intervals.

    A = 1 is tolerated (empty vector) to support the degenerate
    single-symbol trend table used in tests; user-facing configuration
    keeps alphabets at 2 or more.
    """
    _check_alphabet(A, minimum=1)
    if not lo < hi:
        raise InvalidRange(f"need lo < hi, got [{lo}, {hi}]")
    steps = np.arange(1, A, dtype=np.float64) / A
    return BreakpointVector(lo + (hi - lo) * steps)


def discretize(v: float, b: BreakpointVector) -> int:
    """Map a finite value to its 1-based symbol under the half-open rule."""
    return int(np.searchsorted(b.bounds, v, side="right")) + 1


def discretize_array(values: np.ndarray, b: BreakpointVector) -> np.ndarray:
    """Vectorized :func:`discretize`; returns int64 symbols in [1, A]."""
    return np.searchsorted(b.bounds, np.asarray(values, dtype=np.float64), side="right").astype(np.int64) + 1


def symbol_label(a: int, A: int) -> str:
    """Display form of a symbol: letters for A <= 26, decimal otherwise."""
    if A <= 26:
        return chr(ord("a") + a - 1)
    return str(a)


def _symbol_pair_grids(A: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(1, A + 1)
    return np.minimum.outer(idx, idx), np.maximum.outer(idx, idx)


@dataclass(frozen=True, eq=False)
class CellTable:
    """A x A matrix of minimum distances between symbol intervals."""

    entries: np.ndarray
    breakpoints: BreakpointVector

    @property
    def alphabet_size(self) -> int:
        return int(self.entries.shape[0])

    def value(self, a: int, a2: int) -> float:
        return float(self.entries[a - 1, a2 - 1])


def build_cell_table(b: BreakpointVector) -> CellTable:
    """Pairwise interval minimum distances for one breakpoint vector.

    Adjacent or identical symbols share a boundary, so their minimum
    distance is zero; separated symbols contribute the gap between the lower
    edge of the higher interval and the upper edge of the lower interval.
    """
    A = b.alphabet_size
    lo, hi = _symbol_pair_grids(A)
    entries = np.zeros((A, A), dtype=np.float64)
    apart = hi - lo > 1
    if np.any(apart):
        # hi >= 3 wherever apart, so hi - 2 and lo - 1 index real bounds
        entries[apart] = b.bounds[hi[apart] - 2] - b.bounds[lo[apart] - 1]
    entries.setflags(write=False)
    return CellTable(entries, b)


@dataclass(frozen=True, eq=False)
class SignedBoundTable:
    """A x A matrix of signed gaps ``lower_bound(a) - upper_bound(a')``.

    Entries involving a sentinel bound are ``-inf``; comparisons in the
    four-symbol combination follow extended-real semantics, so those cases
    fall through to zero.
    """

    entries: np.ndarray
    breakpoints: BreakpointVector

    @property
    def alphabet_size(self) -> int:
        return int(self.entries.shape[0])

    def value(self, a: int, a2: int) -> float:
        return float(self.entries[a - 1, a2 - 1])


def build_signed_bound_table(b: BreakpointVector) -> SignedBoundTable:
    lower = np.concatenate(([-np.inf], b.bounds))
    upper = np.concatenate((b.bounds, [np.inf]))
    with np.errstate(invalid="ignore"):
        entries = lower[:, None] - upper[None, :]
    # -inf - inf is NaN only for (a=1, a'=A); the gap there is -inf as well
    entries[np.isnan(entries)] = -np.inf
    entries.setflags(write=False)
    return SignedBoundTable(entries, b)


@dataclass(frozen=True, eq=False)
class TrendCellTable:
    """Minimum distances between straight-line components, by angle symbol."""

    entries: np.ndarray
    breakpoints: BreakpointVector
    length: int

    @property
    def alphabet_size(self) -> int:
        return int(self.entries.shape[0])

    def value(self, a: int, a2: int) -> float:
        return float(self.entries[a - 1, a2 - 1])


def trend_norm_factor(T: int) -> float:
    """Euclidean norm of a unit-slope centered line of length T.

    A line with slope ``m`` through the centered time axis has norm
    ``|m| * sqrt(T (T^2 - 1) / 12)``; the factor converts a slope difference
    into a full-length component distance.
    """
    return float(np.sqrt(T * (T * T - 1.0) / 12.0))


def build_trend_cell_table(b_tr: BreakpointVector, T: int) -> TrendCellTable:
    """Exact minimum distance between two trend components by angle symbol.

    For a normalized series the fitted line is determined by its slope alone
    (the intercept offsets it to zero mean), so two components at angles
    phi, phi' differ by ``|tan(phi) - tan(phi')| * trend_norm_factor(T)``.
    Minimizing over two separated angle intervals puts both angles on the
    facing breakpoints; tan is increasing on (-pi/2, pi/2), hence the
    ``tan(lower edge of higher) - tan(upper edge of lower)`` form. Touching
    or identical intervals give zero.
    """
    if T < 2:
        raise BreakpointOutOfRange(f"need T >= 2, got {T}")
    limit = phi_limit(T)
    if b_tr.bounds.size and (b_tr.bounds[0] <= -limit or b_tr.bounds[-1] >= limit):
        raise BreakpointOutOfRange(
            f"trend breakpoints must lie inside (-{limit:.6g}, {limit:.6g}) for T={T}"
        )
    A = b_tr.alphabet_size
    lo, hi = _symbol_pair_grids(A)
    entries = np.zeros((A, A), dtype=np.float64)
    apart = hi - lo > 1
    if np.any(apart):
        tan_bounds = np.tan(b_tr.bounds)
        entries[apart] = trend_norm_factor(T) * (tan_bounds[hi[apart] - 2] - tan_bounds[lo[apart] - 1])
    entries.setflags(write=False)
    return TrendCellTable(entries, b_tr, int(T))


def phi_limit(T: int) -> float:
    """Largest angle a normalized series of length T can reach (perfect line)."""
    if T < 2:
        raise BreakpointOutOfRange(f"need T >= 2, got {T}")
    var_t = (T * T - 1.0) / 12.0
    return float(np.arctan(np.sqrt(1.0 / var_t)))
