"""Independent reference implementations used to freeze expected values.

Everything here deliberately avoids the library's own code paths: plain
loops with ``math.fsum``, erf-based normal CDF, endpoint-anchored grid
searches over symbol intervals, and a full-scan matcher. Tests compare the
library against these, never the other way around.
"""

from __future__ import annotations

import math

import numpy as np


def naive_mean(values) -> float:
    return math.fsum(values) / len(values)


def naive_var(values) -> float:
    m = naive_mean(values)
    return math.fsum((v - m) ** 2 for v in values) / len(values)


def naive_euclidean(x, y) -> float:
    assert len(x) == len(y)
    return math.sqrt(math.fsum((a - b) ** 2 for a, b in zip(x, y)))


def normal_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def quantile_by_bisection(p: float, tol: float = 1e-12) -> float:
    """Invert the erf-based normal CDF by bisection."""
    lo, hi = -40.0, 40.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _clip_interval(lo: float, hi: float, clip: float) -> tuple[float, float]:
    return max(lo, -clip), min(hi, clip)


def interval_grid(lo: float, hi: float, n: int, clip: float) -> np.ndarray:
    """Endpoint-anchored sample grid of one symbol interval (clipped)."""
    lo, hi = _clip_interval(lo, hi, clip)
    assert lo < hi
    return np.linspace(lo, hi, n)


def min_abs_gap(sorted_a: np.ndarray, sorted_b: np.ndarray) -> float:
    """Minimum |a - b| between two sorted value sets."""
    idx = np.searchsorted(sorted_a, sorted_b)
    best = np.inf
    hi_ok = idx < sorted_a.size
    lo_ok = idx > 0
    if np.any(hi_ok):
        best = min(best, float(np.min(np.abs(sorted_a[idx[hi_ok]] - sorted_b[hi_ok]))))
    if np.any(lo_ok):
        best = min(best, float(np.min(np.abs(sorted_a[idx[lo_ok] - 1] - sorted_b[lo_ok]))))
    return float(best)


def cell_min_grid(bounds: np.ndarray, a: int, a2: int, n: int = 20001, clip: float = 8.0) -> float:
    """Grid minimum of |v - v'| over two symbol intervals of one alphabet.

    Interval endpoints are grid points, so the separated-interval minimum is
    found exactly; touching or identical intervals share a grid point and
    yield zero.
    """
    A = bounds.size + 1
    edges = np.concatenate(([-np.inf], bounds, [np.inf]))
    ga = interval_grid(edges[a - 1], edges[a], n, clip)
    gb = interval_grid(edges[a2 - 1], edges[a2], n, clip)
    return min_abs_gap(ga, gb)


def _sum_interval_candidates(lo1, hi1, lo2, hi2, clip):
    lo1, hi1 = _clip_interval(lo1, hi1, clip)
    lo2, hi2 = _clip_interval(lo2, hi2, clip)
    return [lo1 + lo2, lo1 + hi2, hi1 + lo2, hi1 + hi2]


def _min_dist_to_sum_grid(q: float, ga: np.ndarray, gb: np.ndarray) -> float:
    """min over (i, j) of |ga[i] + gb[j] - q| without materializing the outer sum."""
    targets = q - gb
    idx = np.searchsorted(ga, targets)
    best = np.inf
    lo_ok = idx > 0
    hi_ok = idx < ga.size
    if np.any(hi_ok):
        best = min(best, float(np.min(np.abs(ga[idx[hi_ok]] - targets[hi_ok]))))
    if np.any(lo_ok):
        best = min(best, float(np.min(np.abs(ga[idx[lo_ok] - 1] - targets[lo_ok]))))
    return best


def cell4_min_grid(
    seas_bounds: np.ndarray,
    res_bounds: np.ndarray,
    s: int,
    s2: int,
    r: int,
    r2: int,
    n: int = 20001,
    clip: float = 8.0,
) -> float:
    """Sampled minimum of |(season + res) - (season' + res')| over four intervals.

    Candidates are the clipped endpoint sums of either side checked against
    a dense endpoint-anchored grid of the other side. Separated sum ranges
    hit their facing endpoints exactly; overlapping ranges contain one
    side's endpoint, which the grid approximates to within one step per
    axis. Resolution: (step_seas + step_res) / 2 <= (2 * clip / (n - 1)).
    """
    se = np.concatenate(([-np.inf], seas_bounds, [np.inf]))
    re_ = np.concatenate(([-np.inf], res_bounds, [np.inf]))
    gs = interval_grid(se[s - 1], se[s], n, clip)
    gr = interval_grid(re_[r - 1], re_[r], n, clip)
    gs2 = interval_grid(se[s2 - 1], se[s2], n, clip)
    gr2 = interval_grid(re_[r2 - 1], re_[r2], n, clip)
    best = np.inf
    for q in _sum_interval_candidates(se[s2 - 1], se[s2], re_[r2 - 1], re_[r2], clip):
        best = min(best, _min_dist_to_sum_grid(q, gs, gr))
    for q in _sum_interval_candidates(se[s - 1], se[s], re_[r - 1], re_[r], clip):
        best = min(best, _min_dist_to_sum_grid(q, gs2, gr2))
    return float(best)


def trend_component_vectors(angles: np.ndarray, T: int) -> np.ndarray:
    """Straight-line components of length T for the given angles.

    Built from first principles: slope from tan, intercept so the line has
    zero mean over 0..T-1.
    """
    t = np.arange(T, dtype=np.float64)
    slopes = np.tan(np.asarray(angles, dtype=np.float64))
    intercepts = -slopes * (T - 1) / 2.0
    return intercepts[:, None] + slopes[:, None] * t[None, :]


def trend_min_grid(
    tr_bounds: np.ndarray, T: int, a: int, a2: int, phi_cap: float, n: int = 200
) -> float:
    """Brute-force minimum trend-component distance over sampled angle pairs."""
    edges = np.concatenate(([-phi_cap], tr_bounds, [phi_cap]))
    ga = np.linspace(edges[a - 1], edges[a], n)
    gb = np.linspace(edges[a2 - 1], edges[a2], n)
    va = trend_component_vectors(ga, T)
    vb = trend_component_vectors(gb, T)
    diff = va[:, None, :] - vb[None, :, :]
    return float(np.sqrt(np.sum(diff * diff, axis=2)).min())


def ols_line(x) -> tuple[float, float]:
    """Closed-form least squares of x on t = 0..T-1 via independent sums."""
    T = len(x)
    t = list(range(T))
    sum_t = math.fsum(t)
    sum_tt = math.fsum(v * v for v in t)
    sum_x = math.fsum(x)
    sum_tx = math.fsum(ti * xi for ti, xi in zip(t, x))
    slope = (sum_tx - sum_t * sum_x / T) / (sum_tt - sum_t * sum_t / T)
    intercept = sum_x / T - slope * sum_t / T
    return intercept, slope


def full_scan_match(values: np.ndarray, query: np.ndarray, exclude: int | None = None):
    """Exact nearest neighbour by scanning everything; lowest index wins ties."""
    best_idx, best_d = -1, math.inf
    for i in range(values.shape[0]):
        if i == exclude:
            continue
        d = float(np.linalg.norm(values[i] - query))
        if d < best_d:
            best_idx, best_d = i, d
    return best_idx, best_d


def shannon_entropy(symbols, A: int) -> float:
    counts = {}
    for s in symbols:
        counts[int(s)] = counts.get(int(s), 0) + 1
    total = sum(counts.values())
    return -math.fsum((c / total) * math.log2(c / total) for c in counts.values())
