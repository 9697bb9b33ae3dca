"""Output variables and experiment orchestration.

Five quantities assess a representation technique: symbol entropy,
tightness of lower bound (mean representation-to-Euclidean distance ratio
over series pairs), pruning power, approximate accuracy, and the
representation/raw runtime split. ``run_accuracy_experiment`` measures all
of them per configuration with every dataset member acting as query
against the rest.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from types import SimpleNamespace

import numpy as np

from .core import Dataset
from .errors import EmptyInput, InfeasibleBudget, ValidationError, ZeroEuclidean
from .matching import (
    IndexConfig,
    RepresentationIndex,
    approximate_accuracy,
    approximate_match,
    build_index,
    exact_match,
    pair_distances,
    representation_distances,
)
from .quantization import MAX_ALPHABET
from .storage import InMemoryStore

# alphabets of 4 or fewer lose too much accuracy to be worth configuring
MIN_USEFUL_ALPHABET = 5

# full O(I^2) pair enumeration up to this dataset size, sampled beyond
FULL_PAIR_LIMIT = 2000
PAIR_SAMPLE = 10**6


def entropy(symbols: np.ndarray, A: int) -> float:
    """Shannon entropy (bits) of a flattened symbol stream over [1, A]."""
    symbols = np.asarray(symbols).ravel()
    if symbols.size == 0:
        raise EmptyInput("entropy of an empty symbol stream")
    if symbols.min() < 1 or symbols.max() > A:
        raise ValidationError(f"symbols outside [1, {A}]")
    counts = np.bincount(symbols - 1, minlength=A)
    p = counts[counts > 0] / symbols.size
    return float(-np.sum(p * np.log2(p))) + 0.0


def tlb(representation_distance: float, euclidean: float) -> float:
    """Per-pair tightness of lower bound."""
    if euclidean == 0.0:
        raise ZeroEuclidean("TLB undefined for identical series")
    return representation_distance / euclidean


def _pairwise_euclidean(values: np.ndarray) -> np.ndarray:
    """Full Euclidean distance matrix via the inner-product expansion."""
    norms = np.einsum("ij,ij->i", values, values)
    sq = norms[:, None] + norms[None, :] - 2.0 * (values @ values.T)
    np.maximum(sq, 0.0, out=sq)
    return np.sqrt(sq)


def _row_representation(index: RepresentationIndex, i: int) -> SimpleNamespace:
    """View row i of an index as a query-side representation."""
    cfg = index.config
    if cfg.technique == "sax":
        return SimpleNamespace(symbols=index.symbols[i])
    if cfg.technique == "ssax":
        return SimpleNamespace(
            mask_symbols=index.mask_symbols[i], res_symbols=index.res_symbols[i]
        )
    return SimpleNamespace(
        angle_symbol=int(index.angle_symbols[i]), res_symbols=index.res_symbols[i]
    )


def mean_tlb(
    index: RepresentationIndex, values: np.ndarray, seed: int = 0
) -> tuple[float, int, int]:
    """Mean TLB over series pairs.

    All unordered pairs for datasets up to ``FULL_PAIR_LIMIT`` members;
    beyond that a seeded uniform sample of ``PAIR_SAMPLE`` pairs. Pairs at
    Euclidean distance zero are excluded. Returns (mean, pairs used,
    pairs dropped).
    """
    values = np.asarray(values, dtype=np.float64)
    I = values.shape[0]
    if I < 2:
        raise EmptyInput("TLB needs at least two series")
    total = 0.0
    used = 0
    dropped = 0
    if I <= FULL_PAIR_LIMIT:
        ed = _pairwise_euclidean(values)
        for i in range(I - 1):
            rep_d = representation_distances(index, _row_representation(index, i))[i + 1 :]
            ed_row = ed[i, i + 1 :]
            good = ed_row > 0.0
            dropped += int(np.sum(~good))
            used += int(np.sum(good))
            total += float(np.sum(rep_d[good] / ed_row[good]))
    else:
        rng = np.random.default_rng(seed)
        left = rng.integers(0, I, PAIR_SAMPLE)
        right = rng.integers(0, I - 1, PAIR_SAMPLE)
        right = np.where(right >= left, right + 1, right)
        chunk = 20_000
        for start in range(0, PAIR_SAMPLE, chunk):
            li = left[start : start + chunk]
            ri = right[start : start + chunk]
            rep_d = pair_distances(index, li, ri)
            ed = np.linalg.norm(values[li] - values[ri], axis=1)
            good = ed > 0.0
            dropped += int(np.sum(~good))
            used += int(np.sum(good))
            total += float(np.sum(rep_d[good] / ed[good]))
    if used == 0:
        raise EmptyInput("all pairs were at distance zero")
    return total / used, used, dropped


def residual_symbol_stream(index: RepresentationIndex) -> tuple[np.ndarray, int]:
    """The symbol stream whose distribution the techniques try to flatten.

    For plain SAX that is the symbols themselves; for the season- and
    trend-aware variants, the residual symbols (the primary-feature symbols
    are reported separately)."""
    if index.config.technique == "sax":
        return index.symbols, index.config.alphabet
    return index.res_symbols, index.config.res_alphabet


def primary_symbol_stream(index: RepresentationIndex) -> tuple[np.ndarray, int] | None:
    if index.config.technique == "ssax":
        return index.mask_symbols, index.config.season_alphabet
    if index.config.technique == "tsax":
        return index.angle_symbols, index.config.trend_alphabet
    return None


@dataclass
class ReportRow:
    technique: str
    T: int
    W: int
    L: int
    alphabet: int
    primary_alphabet: int
    bits: float
    entropy: float
    primary_entropy: float
    mean_tlb: float
    tlb_pairs: int
    tlb_dropped: int
    pruning_power: float
    approx_accuracy: float
    mean_time_repr: float
    mean_time_raw: float
    n_queries: int


@dataclass
class ExperimentReport:
    rows: list[ReportRow] = field(default_factory=list)

    FIELDS = [
        "technique", "T", "W", "L", "alphabet", "primary_alphabet", "bits",
        "entropy", "primary_entropy", "mean_tlb", "tlb_pairs", "tlb_dropped",
        "pruning_power", "approx_accuracy", "mean_time_repr", "mean_time_raw",
        "n_queries",
    ]

    def to_tsv(self) -> str:
        lines = ["\t".join(self.FIELDS)]
        for row in self.rows:
            d = asdict(row)
            lines.append("\t".join(_format_field(d[f]) for f in self.FIELDS))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"rows": [asdict(r) for r in self.rows]}, indent=2)


def _format_field(v) -> str:
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def evaluate_config(
    dataset: Dataset,
    config: IndexConfig,
    store=None,
    queries: np.ndarray | None = None,
    threads: int = 1,
    tlb_seed: int = 0,
) -> ReportRow:
    """All output variables for one configuration.

    ``queries`` selects which member indices act as queries (all by
    default); each query is matched against the rest of the dataset
    (self excluded)."""
    values = dataset.values
    index = build_index(values, config)
    store = store if store is not None else InMemoryStore(values)
    res_stream, res_alphabet = residual_symbol_stream(index)
    primary = primary_symbol_stream(index)
    query_ids = np.arange(dataset.size) if queries is None else np.asarray(queries)

    mean_ratio, pairs, dropped = mean_tlb(index, values, seed=tlb_seed)

    def one_query(qi: int):
        q = values[qi]
        ex = exact_match(q, index, store, exclude_index=qi)
        ap = approximate_match(q, index, store, exclude_index=qi)
        return ex, ap

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(one_query, [int(q) for q in query_ids]))
    else:
        outcomes = [one_query(int(q)) for q in query_ids]

    pp = math.fsum(ex.candidates_pruned / ex.candidates_total for ex, _ in outcomes)
    aa = math.fsum(approximate_accuracy(ex, ap) for ex, ap in outcomes)
    t_repr = math.fsum(ex.time_repr for ex, _ in outcomes)
    t_raw = math.fsum(ex.time_raw for ex, _ in outcomes)
    n = len(outcomes)
    return ReportRow(
        technique=config.technique,
        T=config.T,
        W=config.W,
        L=config.season_length or 0,
        alphabet=res_alphabet,
        primary_alphabet=(primary[1] if primary else 0),
        bits=config.bits,
        entropy=entropy(res_stream, res_alphabet),
        primary_entropy=(entropy(primary[0], primary[1]) if primary else 0.0),
        mean_tlb=mean_ratio,
        tlb_pairs=pairs,
        tlb_dropped=dropped,
        pruning_power=pp / n,
        approx_accuracy=aa / n,
        mean_time_repr=t_repr / n,
        mean_time_raw=t_raw / n,
        n_queries=n,
    )


def run_accuracy_experiment(
    dataset: Dataset,
    configs: list[IndexConfig],
    store=None,
    queries: np.ndarray | None = None,
    threads: int = 1,
) -> ExperimentReport:
    """Leave-one-out matching over all members, one report row per config."""
    report = ExperimentReport()
    for config in configs:
        report.rows.append(
            evaluate_config(dataset, config, store=store, queries=queries, threads=threads)
        )
    return report


def resolve_config(
    technique: str,
    T: int,
    budget_bits: float,
    W: int,
    primary_alphabet: int | None = None,
    L: int | None = None,
    mean_strength: float = 0.0,
) -> IndexConfig:
    """Size the residual alphabet so the total bit budget is not exceeded.

    The primary alphabet (season or trend) is given; the residual (or, for
    plain SAX, the only) alphabet becomes ``floor(2^(remaining bits / W))``,
    capped by the lookup-table limit. Alphabets below
    ``MIN_USEFUL_ALPHABET`` raise :class:`InfeasibleBudget`.
    """
    if technique == "sax":
        remaining = budget_bits
    elif technique == "ssax":
        if not (primary_alphabet and L):
            raise ValidationError("ssax resolution needs a season alphabet and season length")
        remaining = budget_bits - L * math.log2(primary_alphabet)
    elif technique == "tsax":
        if not primary_alphabet:
            raise ValidationError("tsax resolution needs a trend alphabet")
        remaining = budget_bits - math.log2(primary_alphabet)
    else:
        raise ValidationError(f"unknown technique {technique!r}")
    if primary_alphabet is not None and not (
        MIN_USEFUL_ALPHABET <= primary_alphabet <= MAX_ALPHABET
    ):
        raise InfeasibleBudget(
            f"primary alphabet {primary_alphabet} outside"
            f" [{MIN_USEFUL_ALPHABET}, {MAX_ALPHABET}]"
        )
    if remaining <= 0:
        raise InfeasibleBudget(f"budget {budget_bits} consumed by the primary alphabet")
    A = int(math.floor(2.0 ** (remaining / W)))
    A = min(A, MAX_ALPHABET)
    if A < MIN_USEFUL_ALPHABET:
        raise InfeasibleBudget(
            f"budget {budget_bits} with W={W} leaves alphabet {A} <"
            f" {MIN_USEFUL_ALPHABET}"
        )
    if technique == "sax":
        return IndexConfig("sax", T=T, W=W, alphabet=A, mean_strength=mean_strength)
    if technique == "ssax":
        return IndexConfig(
            "ssax",
            T=T,
            W=W,
            season_length=L,
            season_alphabet=primary_alphabet,
            res_alphabet=A,
            mean_strength=mean_strength,
        )
    return IndexConfig(
        "tsax",
        T=T,
        W=W,
        trend_alphabet=primary_alphabet,
        res_alphabet=A,
        mean_strength=mean_strength,
    )
