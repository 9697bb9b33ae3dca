"""On-disk dataset layout and representation-index persistence.

Layout under a dataset root::

    manifest.tsv                 one record per series, tab separated
    series/<index>.f64           raw little-endian float64 values, no header
    index/<technique>-<hash>.bin versioned binary representation index

The manifest's first line carries the format version and dataset-level
metadata; each record line holds ``index, path, T, season_strength,
trend_strength, L``. Series files are bit-exact round trips; their length
must equal 8*T bytes. Reads are side-effect free and safe for concurrent
readers; the optional uncached mode drops the page cache for a file before
reading (best effort, silently skipped where unsupported).
"""

from __future__ import annotations

import hashlib
import io
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import Dataset
from .errors import (
    ConfigMismatch,
    IoFailure,
    ParseFailure,
    SizeMismatch,
    StoreReadFailure,
    ValidationError,
    VersionMismatch,
)
from .matching import IndexConfig, RepresentationIndex, build_tables

MANIFEST_NAME = "manifest.tsv"
SERIES_DIR = "series"
INDEX_DIR = "index"
MANIFEST_VERSION = 1
INDEX_MAGIC = b"SMIX"
INDEX_VERSION = 1

_TECHNIQUE_TAGS = {"sax": 1, "ssax": 2, "tsax": 3}
_TAG_TECHNIQUES = {v: k for k, v in _TECHNIQUE_TAGS.items()}


@dataclass
class ManifestRecord:
    index: int
    path: str
    length: int
    season_strength: float
    trend_strength: float
    season_length: int


class SeriesStore:
    """Directory-backed series storage with a manifest defining the order."""

    def __init__(
        self,
        root: str | Path,
        records: list[ManifestRecord] | None = None,
        kind: str = "none",
        uncached: bool = False,
    ) -> None:
        self.root = Path(root)
        self.records = records if records is not None else []
        self.kind = kind
        self.uncached = uncached

    def __len__(self) -> int:
        return len(self.records)

    @property
    def length(self) -> int:
        if not self.records:
            raise ValidationError("empty store has no series length")
        return self.records[0].length

    @classmethod
    def create(cls, root: str | Path, kind: str = "none") -> "SeriesStore":
        root = Path(root)
        (root / SERIES_DIR).mkdir(parents=True, exist_ok=True)
        (root / INDEX_DIR).mkdir(parents=True, exist_ok=True)
        return cls(root, [], kind=kind)

    @classmethod
    def open(cls, root: str | Path, uncached: bool = False) -> "SeriesStore":
        store = load_manifest(root)
        store.uncached = uncached
        return store

    # -- series files ------------------------------------------------------

    def series_path(self, index: int) -> Path:
        return self.root / self.records[index].path

    def write_series(
        self,
        index: int,
        x: np.ndarray,
        season_strength: float = float("nan"),
        trend_strength: float = float("nan"),
        season_length: int = 0,
    ) -> None:
        """Write one series; ``index`` must be the next free slot or an
        existing one (overwrite keeps the metadata slot)."""
        x = np.ascontiguousarray(x, dtype=np.float64)
        if x.ndim != 1:
            raise ValidationError("series must be 1-D")
        rel = f"{SERIES_DIR}/{index}.f64"
        path = self.root / rel
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "wb") as fh:
                fh.write(x.astype("<f8", copy=False).tobytes())
        except OSError as exc:
            raise IoFailure(f"cannot write {path}: {exc}") from exc
        record = ManifestRecord(
            index, rel, x.size, season_strength, trend_strength, season_length
        )
        if index == len(self.records):
            self.records.append(record)
        elif 0 <= index < len(self.records):
            self.records[index] = record
        else:
            raise ValidationError(f"series index {index} out of order (have {len(self.records)})")

    def read_series(self, index: int) -> np.ndarray:
        if not 0 <= index < len(self.records):
            raise StoreReadFailure(f"series index {index} outside manifest")
        record = self.records[index]
        path = self.root / record.path
        try:
            with open(path, "rb") as fh:
                if self.uncached:
                    _drop_page_cache(fh.fileno())
                payload = fh.read()
        except OSError as exc:
            raise StoreReadFailure(f"cannot read {path}: {exc}") from exc
        if len(payload) != 8 * record.length:
            raise SizeMismatch(
                f"{path}: expected {8 * record.length} bytes, found {len(payload)}"
            )
        return np.frombuffer(payload, dtype="<f8")


def _drop_page_cache(fd: int) -> None:
    # best effort: not all platforms/filesystems honour the advice
    try:
        os.posix_fadvise(fd, 0, 0, os.POSIX_FADV_DONTNEED)
    except (AttributeError, OSError):
        pass


# -- manifest ----------------------------------------------------------------


def save_manifest(store: SeriesStore) -> Path:
    path = store.root / MANIFEST_NAME
    lines = [f"manifest\tv{MANIFEST_VERSION}\tkind={store.kind}\tcount={len(store.records)}"]
    for r in store.records:
        lines.append(
            f"{r.index}\t{r.path}\t{r.length}\t{r.season_strength!r}"
            f"\t{r.trend_strength!r}\t{r.season_length}"
        )
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def load_manifest(root: str | Path) -> SeriesStore:
    root = Path(root)
    path = root / MANIFEST_NAME
    try:
        text = path.read_text()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise ParseFailure(f"{path}:1: empty manifest")
    header = lines[0].split("\t")
    if len(header) < 2 or header[0] != "manifest" or header[1] != f"v{MANIFEST_VERSION}":
        raise ParseFailure(f"{path}:1: unsupported manifest header {lines[0]!r}")
    kind = "none"
    for fieldspec in header[2:]:
        if fieldspec.startswith("kind="):
            kind = fieldspec[5:]
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            raise ParseFailure(f"{path}:{lineno}: expected 6 fields, found {len(parts)}")
        try:
            record = ManifestRecord(
                int(parts[0]), parts[1], int(parts[2]), float(parts[3]), float(parts[4]),
                int(parts[5]),
            )
        except ValueError as exc:
            raise ParseFailure(f"{path}:{lineno}: {exc}") from exc
        if record.index != len(records):
            raise ParseFailure(f"{path}:{lineno}: index {record.index} out of order")
        records.append(record)
    return SeriesStore(root, records, kind=kind)


# -- dataset convenience -------------------------------------------------------


def save_dataset(dataset: Dataset, root: str | Path) -> SeriesStore:
    """Persist a whole in-memory dataset (series files plus manifest)."""
    store = SeriesStore.create(root, kind=dataset.kind or "none")
    L = dataset.season_length or 0
    for i in range(dataset.size):
        ss = float(dataset.season_strengths[i]) if dataset.season_strengths is not None else float("nan")
        ts = float(dataset.trend_strengths[i]) if dataset.trend_strengths is not None else float("nan")
        store.write_series(i, dataset.values[i], ss, ts, L)
    save_manifest(store)
    return store


def load_dataset(root: str | Path, uncached: bool = False) -> tuple[Dataset, SeriesStore]:
    """Read every series of a store into memory, in manifest order."""
    store = SeriesStore.open(root, uncached=uncached)
    if not store.records:
        raise ValidationError(f"store at {root} holds no series")
    values = np.vstack([store.read_series(i) for i in range(len(store))])
    season_lengths = {r.season_length for r in store.records}
    season_length = season_lengths.pop() if len(season_lengths) == 1 else 0
    dataset = Dataset(
        values,
        kind=None if store.kind == "none" else store.kind,
        season_length=season_length or None,
        season_strengths=np.array([r.season_strength for r in store.records]),
        trend_strengths=np.array([r.trend_strength for r in store.records]),
    )
    return dataset, store


class InMemoryStore:
    """Adapter exposing an in-memory dataset through the store read API."""

    def __init__(self, values: np.ndarray) -> None:
        self.values = np.asarray(values, dtype=np.float64)

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def read_series(self, index: int) -> np.ndarray:
        return self.values[index]


# -- representation indexes ----------------------------------------------------


def config_hash(config: IndexConfig) -> str:
    return hashlib.sha256(config.canonical_key().encode()).hexdigest()[:12]


def index_path(store: SeriesStore, config: IndexConfig) -> Path:
    return store.root / INDEX_DIR / f"{config.technique}-{config_hash(config)}.bin"


def _symbol_width(config: IndexConfig) -> int:
    largest = max(
        config.alphabet or 0,
        config.season_alphabet or 0,
        config.trend_alphabet or 0,
        config.res_alphabet or 0,
    )
    return 1 if largest <= 256 else 2

_HEADER = struct.Struct("<4sHBIIIIIIIdI B")


def persist_index(store: SeriesStore, index: RepresentationIndex) -> Path:
    """Write a versioned binary blob: config header plus packed symbols."""
    cfg = index.config
    width = _symbol_width(cfg)
    dtype = "<u1" if width == 1 else "<u2"
    path = index_path(store, cfg)
    buf = io.BytesIO()
    buf.write(
        _HEADER.pack(
            INDEX_MAGIC,
            INDEX_VERSION,
            _TECHNIQUE_TAGS[cfg.technique],
            cfg.T,
            cfg.W,
            cfg.season_length or 0,
            cfg.alphabet or 0,
            cfg.season_alphabet or 0,
            cfg.trend_alphabet or 0,
            cfg.res_alphabet or 0,
            cfg.mean_strength,
            index.size,
            width,
        )
    )
    for arr in _index_arrays(index):
        # symbols are 1-based in memory; shift down so A = 256 fits a byte
        buf.write((arr - 1).astype(dtype).tobytes())
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(buf.getvalue())
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def _index_arrays(index: RepresentationIndex):
    cfg = index.config
    if cfg.technique == "sax":
        return [index.symbols]
    if cfg.technique == "ssax":
        return [index.mask_symbols, index.res_symbols]
    return [index.angle_symbols, index.res_symbols]


def load_index(store: SeriesStore, config: IndexConfig) -> RepresentationIndex:
    """Load a persisted index; the stored header must match ``config``."""
    path = index_path(store, config)
    try:
        payload = path.read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return _parse_index(payload, config, path)


def _parse_index(payload: bytes, config: IndexConfig, path: Path) -> RepresentationIndex:
    if len(payload) < _HEADER.size:
        raise ParseFailure(f"{path}: truncated index header")
    (magic, version, tag, T, W, L, A, A_seas, A_tr, A_res, strength, I, width) = _HEADER.unpack(
        payload[: _HEADER.size]
    )
    if magic != INDEX_MAGIC:
        raise ParseFailure(f"{path}: not an index file")
    if version != INDEX_VERSION:
        raise VersionMismatch(f"{path}: index version {version}, expected {INDEX_VERSION}")
    stored = IndexConfig(
        technique=_TAG_TECHNIQUES.get(tag, "sax"),
        T=T,
        W=W,
        alphabet=A or None,
        season_length=L or None,
        season_alphabet=A_seas or None,
        trend_alphabet=A_tr or None,
        res_alphabet=A_res or None,
        mean_strength=strength,
    )
    if stored != config:
        raise ConfigMismatch(
            f"{path}: stored config {stored.describe()} does not match {config.describe()}"
        )
    dtype = "<u1" if width == 1 else "<u2"
    body = np.frombuffer(payload, dtype=dtype, offset=_HEADER.size).astype(np.int64) + 1
    tables = build_tables(config)
    if config.technique == "sax":
        expected = I * W
        if body.size != expected:
            raise SizeMismatch(f"{path}: expected {expected} symbols, found {body.size}")
        return RepresentationIndex(config, symbols=body.reshape(I, W), tables=tables)
    if config.technique == "ssax":
        expected = I * (L + W)
        if body.size != expected:
            raise SizeMismatch(f"{path}: expected {expected} symbols, found {body.size}")
        return RepresentationIndex(
            config,
            mask_symbols=body[: I * L].reshape(I, L),
            res_symbols=body[I * L :].reshape(I, W),
            tables=tables,
        )
    expected = I * (1 + W)
    if body.size != expected:
        raise SizeMismatch(f"{path}: expected {expected} symbols, found {body.size}")
    return RepresentationIndex(
        config,
        angle_symbols=body[:I],
        res_symbols=body[I:].reshape(I, W),
        tables=tables,
    )
