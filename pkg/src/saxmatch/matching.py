"""Exact and approximate matching over a representation-indexed dataset.

Exact matching computes all representation distances, sorts them, and scans
candidates in that order computing true Euclidean distances until the
best-so-far distance drops below the next representation distance; the
lower-bounding property makes the early termination sound. Approximate
matching returns the candidate with the minimum representation distance,
breaking exact ties by true distance. Both record how many raw series were
read versus pruned, and the wall-clock split between the representation
phase (including result ordering) and the raw phase.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .core import euclidean_distance
from .errors import (
    EmptyInput,
    InconsistentResults,
    ShapeMismatch,
    ValidationError,
)
from .paa_sax import sax_distances, sax_encode
from .quantization import (
    build_cell_table,
    build_signed_bound_table,
    build_trend_cell_table,
    gaussian_breakpoints,
    uniform_breakpoints,
)
from .season import season_sd_heuristics, ssax_distances, ssax_encode
from .trend import phi_max, trend_residual_sd, tsax_distances, tsax_encode

TECHNIQUES = ("sax", "ssax", "tsax")


@dataclass(frozen=True)
class IndexConfig:
    """Homogeneous encoding configuration for one dataset index.

    ``mean_strength`` is the dataset-level mean component strength feeding
    the breakpoint heuristics (ignored for plain SAX). Plain SAX uses
    ``alphabet``; sSAX uses ``season_alphabet``/``res_alphabet`` plus
    ``season_length``; tSAX uses ``trend_alphabet``/``res_alphabet``.
    """

    technique: str
    T: int
    W: int
    alphabet: int | None = None
    season_length: int | None = None
    season_alphabet: int | None = None
    trend_alphabet: int | None = None
    res_alphabet: int | None = None
    mean_strength: float = 0.0

    def __post_init__(self) -> None:
        if self.technique not in TECHNIQUES:
            raise ValidationError(f"unknown technique {self.technique!r}")
        if self.T < 1 or self.W < 1 or self.T % self.W != 0:
            raise ValidationError(f"W={self.W} must divide T={self.T}")
        if self.technique == "sax":
            if not self.alphabet:
                raise ValidationError("sax requires an alphabet")
        elif self.technique == "ssax":
            if not (self.season_length and self.season_alphabet and self.res_alphabet):
                raise ValidationError("ssax requires season_length and both alphabets")
            if self.T % (self.W * self.season_length) != 0:
                raise ValidationError(
                    f"W*L={self.W}*{self.season_length} must divide T={self.T}"
                )
        else:
            if not (self.trend_alphabet and self.res_alphabet):
                raise ValidationError("tsax requires both alphabets")
        if not 0.0 <= self.mean_strength <= 1.0:
            raise ValidationError("mean strength must lie in [0, 1]")

    @property
    def bits(self) -> float:
        """Representation size per series, fractional log2 accounting."""
        if self.technique == "sax":
            return self.W * float(np.log2(self.alphabet))
        if self.technique == "ssax":
            return self.season_length * float(np.log2(self.season_alphabet)) + self.W * float(
                np.log2(self.res_alphabet)
            )
        return float(np.log2(self.trend_alphabet)) + self.W * float(np.log2(self.res_alphabet))

    def describe(self) -> str:
        if self.technique == "sax":
            return f"sax(W={self.W}, A={self.alphabet})"
        if self.technique == "ssax":
            return (
                f"ssax(W={self.W}, L={self.season_length},"
                f" A_seas={self.season_alphabet}, A_res={self.res_alphabet})"
            )
        return f"tsax(W={self.W}, A_tr={self.trend_alphabet}, A_res={self.res_alphabet})"

    def canonical_key(self) -> str:
        return "|".join(
            str(v)
            for v in (
                self.technique,
                self.T,
                self.W,
                self.alphabet or 0,
                self.season_length or 0,
                self.season_alphabet or 0,
                self.trend_alphabet or 0,
                self.res_alphabet or 0,
                format(self.mean_strength, ".12g"),
            )
        )


@dataclass(eq=False)
class RepresentationIndex:
    """Per-series representations plus the lookup tables to compare them."""

    config: IndexConfig
    symbols: np.ndarray | None = None          # sax: (I, W)
    mask_symbols: np.ndarray | None = None     # ssax: (I, L)
    res_symbols: np.ndarray | None = None      # ssax/tsax: (I, W)
    angle_symbols: np.ndarray | None = None    # tsax: (I,)
    tables: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        if self.config.technique == "sax":
            return int(self.symbols.shape[0])
        return int(self.res_symbols.shape[0])


def build_tables(config: IndexConfig) -> dict:
    """Breakpoints and lookup tables implied by a configuration.

    Deterministic: rebuilding from an identical configuration yields
    bit-identical tables, which is what makes persisted indexes portable.
    """
    if config.technique == "sax":
        b = gaussian_breakpoints(config.alphabet, 1.0)
        return {"breakpoints": b, "cell": build_cell_table(b)}
    if config.technique == "ssax":
        sd_res, sd_seas = season_sd_heuristics(config.mean_strength)
        b_seas = gaussian_breakpoints(config.season_alphabet, sd_seas if sd_seas > 0 else 1.0)
        b_res = gaussian_breakpoints(config.res_alphabet, sd_res if sd_res > 0 else 1.0)
        return {
            "season_breakpoints": b_seas,
            "res_breakpoints": b_res,
            "cs_seas": build_signed_bound_table(b_seas),
            "cs_res": build_signed_bound_table(b_res),
        }
    cap = phi_max(config.T)
    sd_res = trend_residual_sd(config.mean_strength)
    b_tr = uniform_breakpoints(config.trend_alphabet, -cap, cap)
    b_res = gaussian_breakpoints(config.res_alphabet, sd_res if sd_res > 0 else 1.0)
    return {
        "trend_breakpoints": b_tr,
        "res_breakpoints": b_res,
        "ct": build_trend_cell_table(b_tr, config.T),
        "cell_res": build_cell_table(b_res),
    }


def build_index(values: np.ndarray, config: IndexConfig) -> RepresentationIndex:
    """Encode every dataset member under one configuration."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[1] != config.T:
        raise ShapeMismatch(f"dataset shape {values.shape} does not match T={config.T}")
    tables = build_tables(config)
    I = values.shape[0]
    if config.technique == "sax":
        b = tables["breakpoints"]
        symbols = np.vstack([sax_encode(values[i], config.W, b).symbols for i in range(I)])
        return RepresentationIndex(config, symbols=symbols, tables=tables)
    if config.technique == "ssax":
        b_seas, b_res = tables["season_breakpoints"], tables["res_breakpoints"]
        reps = [
            ssax_encode(values[i], config.season_length, config.W, b_seas, b_res)
            for i in range(I)
        ]
        return RepresentationIndex(
            config,
            mask_symbols=np.vstack([r.mask_symbols for r in reps]),
            res_symbols=np.vstack([r.res_symbols for r in reps]),
            tables=tables,
        )
    b_tr, b_res = tables["trend_breakpoints"], tables["res_breakpoints"]
    reps = [tsax_encode(values[i], config.W, b_tr, b_res) for i in range(I)]
    return RepresentationIndex(
        config,
        angle_symbols=np.array([r.angle_symbol for r in reps], dtype=np.int64),
        res_symbols=np.vstack([r.res_symbols for r in reps]),
        tables=tables,
    )


def encode_query(query: np.ndarray, index: RepresentationIndex):
    """Encode one series under the index configuration."""
    cfg = index.config
    query = np.asarray(query, dtype=np.float64)
    if query.ndim != 1 or query.size != cfg.T:
        raise ShapeMismatch(f"query length {query.size} does not match T={cfg.T}")
    if cfg.technique == "sax":
        return sax_encode(query, cfg.W, index.tables["breakpoints"])
    if cfg.technique == "ssax":
        return ssax_encode(
            query,
            cfg.season_length,
            cfg.W,
            index.tables["season_breakpoints"],
            index.tables["res_breakpoints"],
        )
    return tsax_encode(
        query, cfg.W, index.tables["trend_breakpoints"], index.tables["res_breakpoints"]
    )


def representation_distances(index: RepresentationIndex, query_rep) -> np.ndarray:
    """Distances from an encoded query to every indexed member at once."""
    cfg = index.config
    if cfg.technique == "sax":
        return sax_distances(
            query_rep.symbols, index.symbols, index.tables["cell"], cfg.T, cfg.W
        )
    if cfg.technique == "ssax":
        return ssax_distances(
            query_rep.mask_symbols,
            query_rep.res_symbols,
            index.mask_symbols,
            index.res_symbols,
            index.tables["cs_seas"],
            index.tables["cs_res"],
            cfg.T,
        )
    return tsax_distances(
        query_rep.angle_symbol,
        query_rep.res_symbols,
        index.angle_symbols,
        index.res_symbols,
        index.tables["ct"],
        index.tables["cell_res"],
        cfg.T,
    )


def pair_distances(
    index: RepresentationIndex, left: np.ndarray, right: np.ndarray
) -> np.ndarray:
    """Representation distances for explicit (left, right) member pairs.

    Vectorized over the pair list; used by the sampled TLB path on datasets
    too large for full pair enumeration.
    """
    cfg = index.config
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    if cfg.technique == "sax":
        table = index.tables["cell"]
        cells = table.entries[index.symbols[left] - 1, index.symbols[right] - 1]
        return np.sqrt(cfg.T / cfg.W) * np.sqrt(np.sum(cells * cells, axis=1))
    if cfg.technique == "ssax":
        cs_seas = index.tables["cs_seas"].entries
        cs_res = index.tables["cs_res"].entries
        ml, mr = index.mask_symbols[left] - 1, index.mask_symbols[right] - 1
        rl, rr = index.res_symbols[left] - 1, index.res_symbols[right] - 1
        from .season import _cell4_grid

        cells = _cell4_grid(
            cs_seas[ml, mr], cs_seas[mr, ml], cs_res[rl, rr], cs_res[rr, rl]
        )
        scale = np.sqrt(cfg.T / (cfg.W * cfg.season_length))
        return scale * np.sqrt(np.sum(cells * cells, axis=(1, 2)))
    ct = index.tables["ct"].entries
    cell_res = index.tables["cell_res"].entries
    trend_terms = ct[index.angle_symbols[left] - 1, index.angle_symbols[right] - 1]
    cells = cell_res[index.res_symbols[left] - 1, index.res_symbols[right] - 1]
    return np.sqrt(
        trend_terms * trend_terms + (cfg.T / cfg.W) * np.sum(cells * cells, axis=1)
    )


@dataclass
class MatchResult:
    """Outcome of one query: the match, raw-read accounting, and timings."""

    match_id: int
    euclidean: float
    candidates_evaluated: int
    candidates_pruned: int
    candidates_total: int
    time_repr: float
    time_raw: float


def _euclidean_with_abandon(query: np.ndarray, candidate: np.ndarray, cutoff: float) -> float:
    """Euclidean distance, giving up once the partial sum exceeds cutoff."""
    cutoff_sq = cutoff * cutoff
    total = 0.0
    for start in range(0, query.size, 64):
        d = query[start : start + 64] - candidate[start : start + 64]
        total += float(np.dot(d, d))
        if total > cutoff_sq:
            return float(np.sqrt(total))
    return float(np.sqrt(total))


def exact_match(
    query: np.ndarray,
    index: RepresentationIndex,
    store,
    exclude_index: int | None = None,
    early_abandon: bool = False,
    validate: bool = False,
) -> MatchResult:
    """Nearest neighbour by true Euclidean distance, with lower-bound pruning.

    ``store`` provides ``read_series(i)``. The scan stops as soon as the
    best-so-far true distance is strictly below the next candidate's
    representation distance; pruned members then satisfy
    ``d_repr > best``, hence ``d_ED > best``, so the result equals the
    full-scan argmin, ties broken by lowest index.
    """
    t0 = time.perf_counter()
    query = np.asarray(query, dtype=np.float64)
    query_rep = encode_query(query, index)
    dists = representation_distances(index, query_rep)
    order = np.argsort(dists, kind="stable")
    if exclude_index is not None:
        order = order[order != exclude_index]
    t1 = time.perf_counter()

    best_idx, best_d = -1, np.inf
    evaluated = 0
    for idx in order:
        if best_d < dists[idx]:
            break
        candidate = store.read_series(int(idx))
        if early_abandon and np.isfinite(best_d):
            d = _euclidean_with_abandon(query, candidate, best_d)
        else:
            d = euclidean_distance(query, candidate)
        evaluated += 1
        if d < best_d or (d == best_d and idx < best_idx):
            best_idx, best_d = int(idx), d
    t2 = time.perf_counter()

    total = order.size
    if validate:
        pruned_dists = dists[order[evaluated:]]
        assert np.all(pruned_dists >= best_d), "pruned candidate below best-so-far"
        assert best_d >= dists[best_idx] - 1e-12, "match violates the lower bound"
    return MatchResult(
        match_id=best_idx,
        euclidean=best_d,
        candidates_evaluated=evaluated,
        candidates_pruned=total - evaluated,
        candidates_total=total,
        time_repr=t1 - t0,
        time_raw=t2 - t1,
    )


def approximate_match(
    query: np.ndarray,
    index: RepresentationIndex,
    store,
    exclude_index: int | None = None,
) -> MatchResult:
    """Candidate with minimum representation distance; exact ties resolved
    by true distance (lowest index on a further tie)."""
    t0 = time.perf_counter()
    query = np.asarray(query, dtype=np.float64)
    query_rep = encode_query(query, index)
    dists = representation_distances(index, query_rep)
    candidates = np.arange(dists.size)
    if exclude_index is not None:
        candidates = candidates[candidates != exclude_index]
    if candidates.size == 0:
        raise EmptyInput("no candidates to match against")
    min_dist = dists[candidates].min()
    tie_set = candidates[dists[candidates] == min_dist]
    t1 = time.perf_counter()

    best_idx, best_d = -1, np.inf
    for idx in tie_set:
        d = euclidean_distance(query, store.read_series(int(idx)))
        if d < best_d:
            best_idx, best_d = int(idx), d
    t2 = time.perf_counter()
    return MatchResult(
        match_id=best_idx,
        euclidean=best_d,
        candidates_evaluated=int(tie_set.size),
        candidates_pruned=int(candidates.size - tie_set.size),
        candidates_total=int(candidates.size),
        time_repr=t1 - t0,
        time_raw=t2 - t1,
    )


def pruning_power(results) -> float:
    """Mean fraction of candidates skipped without a raw read."""
    results = list(results)
    if not results:
        raise EmptyInput("pruning power needs at least one result")
    import math

    return math.fsum(r.candidates_pruned / r.candidates_total for r in results) / len(results)


def approximate_accuracy(exact: MatchResult, approx: MatchResult) -> float:
    """Exact-match distance over approximate-match distance, in (0, 1]."""
    if approx.euclidean < exact.euclidean:
        raise InconsistentResults(
            f"approximate distance {approx.euclidean} below exact {exact.euclidean}"
        )
    if approx.euclidean == 0.0:
        return 1.0
    return exact.euclidean / approx.euclidean
