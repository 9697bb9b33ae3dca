"""Command-line entry point.

Subcommands bind generation, encoding, matching, and evaluation into
reproducible runs::

    saxmatch generate --kind season --count 1000 --length 480 \
        --season-length 10 --strength 0.50 --seed 7 --out ds/
    saxmatch encode --dataset ds/ --config "ssax:w=24,l=10,a_seas=256,budget=320"
    saxmatch match --dataset ds/ --mode exact --query-index 5 \
        --config "sax:w=24,a=16"
    saxmatch eval --dataset ds/ --config "sax:w=24,a=16" --out report.tsv
    saxmatch bench --dataset ds/ --config "ssax:w=24,l=10,a_seas=256,budget=320" \
        --queries 50 --seed 1

Configuration strings are ``technique:key=value,...`` with keys ``w``, ``a``
(plain SAX), ``l``, ``a_seas``, ``a_tr``, ``a_res``, ``budget`` and
``strength``. When ``budget`` is given the residual alphabet is resolved
automatically; when ``strength`` is omitted the dataset's measured mean
strength feeds the heuristics. All randomness flows from ``--seed``; exit
codes: 0 success, 1 validation, 2 I/O, 3 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from .core import Dataset
from .datagen import GenSpec, gen_dataset
from .errors import SaxmatchError, StorageError, ValidationError
from .evaluate import resolve_config, run_accuracy_experiment
from .matching import (
    IndexConfig,
    approximate_match,
    build_index,
    exact_match,
    pruning_power,
)
from .storage import (
    SeriesStore,
    index_path,
    load_dataset,
    load_index,
    persist_index,
    save_dataset,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; the contract reserves 2 for I/O
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def parse_config_string(text: str, dataset: Dataset) -> IndexConfig:
    """Turn ``technique:key=value,...`` into a full configuration."""
    technique, _, body = text.partition(":")
    technique = technique.strip().lower()
    fields: dict[str, float] = {}
    if body:
        for part in body.split(","):
            key, _, value = part.partition("=")
            if not value:
                raise ValidationError(f"bad config field {part!r} in {text!r}")
            key = key.strip().lower()
            fields[key] = float(value) if key in ("strength", "budget") else int(value)
    T = dataset.length
    W = int(fields.pop("w", 0))
    if not W:
        raise ValidationError(f"config {text!r} needs w=<segments>")
    strength = fields.pop("strength", None)
    if strength is None:
        if technique == "ssax":
            strength = dataset.mean_season_strength or 0.0
        elif technique == "tsax":
            strength = dataset.mean_trend_strength or 0.0
        else:
            strength = 0.0
    budget = fields.pop("budget", None)
    L = int(fields.pop("l", dataset.season_length or 10)) if technique == "ssax" else None
    primary = None
    if technique == "ssax":
        primary = int(fields.pop("a_seas", 0)) or None
    elif technique == "tsax":
        primary = int(fields.pop("a_tr", 0)) or None
    if budget is not None:
        if technique == "sax" and "a" in fields:
            raise ValidationError("give either a= or budget=, not both")
        cfg = resolve_config(
            technique, T=T, budget_bits=budget, W=W, primary_alphabet=primary, L=L,
            mean_strength=float(strength),
        )
        leftovers = set(fields)
    else:
        if technique == "sax":
            cfg = IndexConfig(
                "sax", T=T, W=W, alphabet=int(fields.pop("a", 0)) or None,
                mean_strength=float(strength),
            )
        elif technique == "ssax":
            cfg = IndexConfig(
                "ssax", T=T, W=W, season_length=L, season_alphabet=primary,
                res_alphabet=int(fields.pop("a_res", 0)) or None,
                mean_strength=float(strength),
            )
        elif technique == "tsax":
            cfg = IndexConfig(
                "tsax", T=T, W=W, trend_alphabet=primary,
                res_alphabet=int(fields.pop("a_res", 0)) or None,
                mean_strength=float(strength),
            )
        else:
            raise ValidationError(f"unknown technique {technique!r}")
        leftovers = set(fields)
    if leftovers:
        raise ValidationError(f"unused config fields {sorted(leftovers)} in {text!r}")
    return cfg


def _load(args) -> tuple[Dataset, SeriesStore]:
    return load_dataset(args.dataset, uncached=getattr(args, "uncached", False))


def _index_for(store: SeriesStore, dataset: Dataset, config: IndexConfig):
    """Load the persisted index when present, else encode in memory."""
    if index_path(store, config).exists():
        return load_index(store, config)
    return build_index(dataset.values, config)


def cmd_generate(args) -> int:
    spec = GenSpec(
        kind=args.kind,
        count=args.count,
        length=args.length,
        season_length=args.season_length,
        target_strength=args.strength,
        tolerance=args.tolerance,
        seed=args.seed,
        strength_spread=args.strength_spread,
    )
    t0 = time.perf_counter()
    dataset = gen_dataset(spec)
    save_dataset(dataset, args.out)
    elapsed = time.perf_counter() - t0
    mean = (
        dataset.mean_season_strength if args.kind == "season" else dataset.mean_trend_strength
    )
    print(
        f"generated {dataset.size} series of length {dataset.length}"
        f" (kind={args.kind}, mean strength {mean:.4f}) in {elapsed:.1f}s -> {args.out}"
    )
    return EXIT_OK


def cmd_encode(args) -> int:
    dataset, store = _load(args)
    config = parse_config_string(args.config, dataset)
    index = build_index(dataset.values, config)
    path = persist_index(store, index)
    print(f"config: {config.describe()}")
    print(f"bits per series: {config.bits:.3f}")
    print(f"index written: {path}")
    return EXIT_OK


def cmd_match(args) -> int:
    dataset, store = _load(args)
    config = parse_config_string(args.config, dataset)
    index = _index_for(store, dataset, config)
    if args.query_index is not None:
        query = store.read_series(args.query_index)
        exclude = args.query_index if args.exclude_self else None
    else:
        raw = Path(args.query).read_bytes()
        query = np.frombuffer(raw, dtype="<f8")
        exclude = None
    if args.mode == "exact":
        result = exact_match(query, index, store, exclude_index=exclude,
                             early_abandon=args.early_abandon)
    else:
        result = approximate_match(query, index, store, exclude_index=exclude)
    print(f"match_id\t{result.match_id}")
    print(f"euclidean\t{result.euclidean:.6f}")
    print(f"candidates_evaluated\t{result.candidates_evaluated}")
    print(f"candidates_pruned\t{result.candidates_pruned}")
    print(f"time_repr\t{result.time_repr:.6f}")
    print(f"time_raw\t{result.time_raw:.6f}")
    return EXIT_OK


def cmd_eval(args) -> int:
    dataset, store = _load(args)
    configs = [parse_config_string(c, dataset) for c in args.config]
    queries = None
    if args.queries:
        rng = np.random.default_rng(args.seed)
        queries = rng.choice(dataset.size, size=min(args.queries, dataset.size), replace=False)
        queries.sort()
    report = run_accuracy_experiment(dataset, configs, queries=queries, threads=args.threads)
    tsv = report.to_tsv()
    if args.out:
        Path(args.out).write_text(tsv)
        print(f"report written: {args.out}")
    else:
        print(tsv, end="")
    if args.summary:
        Path(args.summary).write_text(report.to_json())
        print(f"summary written: {args.summary}")
    return EXIT_OK


def cmd_bench(args) -> int:
    dataset, store = _load(args)
    store.uncached = args.uncached
    rng = np.random.default_rng(args.seed)
    n = min(args.queries, dataset.size)
    query_ids = rng.choice(dataset.size, size=n, replace=False)
    query_ids.sort()
    configs = [parse_config_string(c, dataset) for c in args.config]
    print(
        "config\tstrength\tqueries\trepr_s\traw_s\tsum_s\tmean_reads\tpruning_power"
    )
    deadline = time.monotonic() + args.time_limit if args.time_limit else None
    if dataset.kind == "trend":
        dataset_strength = dataset.mean_trend_strength or 0.0
    else:
        dataset_strength = dataset.mean_season_strength or 0.0
    rows = []
    for config in configs:
        index = _index_for(store, dataset, config)
        results = []
        for qi in query_ids:
            if deadline is not None and time.monotonic() > deadline and results:
                break
            results.append(
                exact_match(dataset.values[int(qi)], index, store, exclude_index=int(qi))
            )
        n_run = len(results)
        repr_s = sum(r.time_repr for r in results) / n_run
        raw_s = sum(r.time_raw for r in results) / n_run
        reads = sum(r.candidates_evaluated for r in results) / n_run
        line = (
            f"{config.describe()}\t{dataset_strength:.3f}\t{n_run}\t{repr_s:.6f}"
            f"\t{raw_s:.6f}\t{repr_s + raw_s:.6f}\t{reads:.1f}\t{pruning_power(results):.4f}"
        )
        rows.append(line)
        print(line)
    if args.out:
        header = "config\tstrength\tqueries\trepr_s\traw_s\tsum_s\tmean_reads\tpruning_power"
        Path(args.out).write_text("\n".join([header, *rows]) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="saxmatch", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic dataset")
    p.add_argument("--kind", choices=["season", "trend"], required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--season-length", type=int, default=10)
    p.add_argument("--strength", type=float, required=True)
    p.add_argument("--tolerance", type=float, default=0.005)
    p.add_argument("--strength-spread", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("encode", help="build and persist a representation index")
    p.add_argument("--dataset", required=True)
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("match", help="run one query against a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--mode", choices=["exact", "approx"], default="exact")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--query", help="raw little-endian float64 file")
    group.add_argument("--query-index", type=int, help="use a dataset member as query")
    p.add_argument("--exclude-self", action="store_true",
                   help="exclude the query's own index (with --query-index)")
    p.add_argument("--early-abandon", action="store_true")
    p.add_argument("--uncached", action="store_true")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("eval", help="accuracy experiment (entropy, TLB, PP, AA)")
    p.add_argument("--dataset", required=True)
    p.add_argument("--config", action="append", required=True)
    p.add_argument("--queries", type=int, default=0, help="0 = every member")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--summary")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="efficiency experiment (runtime split, reads)")
    p.add_argument("--dataset", required=True)
    p.add_argument("--config", action="append", required=True)
    p.add_argument("--queries", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-limit", type=float, default=0.0, help="seconds; 0 = unlimited")
    p.add_argument("--uncached", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StorageError, OSError) as exc:
        print(f"saxmatch: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, SaxmatchError) as exc:
        print(f"saxmatch: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        print(f"saxmatch: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
