import hashlib

import numpy as np
import pytest

from saxmatch.datagen import GenSpec, gen_dataset
from saxmatch.errors import (
    ConfigMismatch,
    IoFailure,
    ParseFailure,
    SizeMismatch,
    StoreReadFailure,
    VersionMismatch,
)
from saxmatch.matching import IndexConfig, build_index, representation_distances
from saxmatch.storage import (
    SeriesStore,
    index_path,
    load_dataset,
    load_index,
    load_manifest,
    persist_index,
    save_dataset,
    save_manifest,
)

from conftest import random_normalized


@pytest.fixture(scope="module")
def dataset():
    return gen_dataset(GenSpec("season", count=20, length=240, target_strength=0.4, seed=3))


class TestSeriesRoundTrip:
    def test_bit_exact(self, tmp_path, rng):
        store = SeriesStore.create(tmp_path)
        x = random_normalized(rng, 256)
        store.write_series(0, x)
        back = store.read_series(0)
        assert np.array_equal(back, x)
        assert back.dtype == np.float64

    def test_file_is_headerless_little_endian(self, tmp_path, rng):
        store = SeriesStore.create(tmp_path)
        x = random_normalized(rng, 64)
        store.write_series(0, x)
        raw = store.series_path(0).read_bytes()
        assert len(raw) == 8 * 64
        assert np.array_equal(np.frombuffer(raw, dtype="<f8"), x)

    def test_size_mismatch(self, tmp_path, rng):
        store = SeriesStore.create(tmp_path)
        store.write_series(0, random_normalized(rng, 64))
        with open(store.series_path(0), "ab") as fh:
            fh.write(b"x")
        with pytest.raises(SizeMismatch):
            store.read_series(0)

    def test_missing_file(self, tmp_path, rng):
        store = SeriesStore.create(tmp_path)
        store.write_series(0, random_normalized(rng, 64))
        store.series_path(0).unlink()
        with pytest.raises(StoreReadFailure) as err:
            store.read_series(0)
        assert "0.f64" in str(err.value)

    def test_uncached_flag_still_reads(self, tmp_path, rng):
        store = SeriesStore.create(tmp_path)
        x = random_normalized(rng, 64)
        store.write_series(0, x)
        store.uncached = True
        assert np.array_equal(store.read_series(0), x)


class TestManifest:
    def test_round_trip(self, tmp_path, dataset):
        store = save_dataset(dataset, tmp_path)
        loaded = load_manifest(tmp_path)
        assert loaded.kind == "season"
        assert len(loaded) == len(store)
        assert loaded.records == store.records

    def test_empty_manifest(self, tmp_path):
        store = SeriesStore.create(tmp_path, kind="none")
        save_manifest(store)
        assert len(load_manifest(tmp_path)) == 0

    def test_parse_failure_reports_line(self, tmp_path, dataset):
        save_dataset(dataset, tmp_path)
        manifest = tmp_path / "manifest.tsv"
        lines = manifest.read_text().splitlines()
        lines[3] = "broken\tline"
        manifest.write_text("\n".join(lines) + "\n")
        with pytest.raises(ParseFailure) as err:
            load_manifest(tmp_path)
        assert ":4:" in str(err.value)

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(IoFailure):
            load_manifest(tmp_path)

    def test_dataset_round_trip_in_order(self, tmp_path, dataset):
        save_dataset(dataset, tmp_path)
        loaded, store = load_dataset(tmp_path)
        assert np.array_equal(loaded.values, dataset.values)
        assert loaded.kind == dataset.kind
        assert loaded.season_length == dataset.season_length
        assert np.array_equal(loaded.season_strengths, dataset.season_strengths)
        # checksum over the concatenated stream pins the manifest order
        digest = hashlib.sha256()
        for i in range(len(store)):
            digest.update(store.read_series(i).tobytes())
        assert digest.hexdigest() == hashlib.sha256(dataset.values.tobytes()).hexdigest()

    def test_single_series_dataset(self, tmp_path, rng):
        from saxmatch.core import Dataset

        ds = Dataset(random_normalized(rng, 32)[None, :])
        save_dataset(ds, tmp_path)
        loaded, _ = load_dataset(tmp_path)
        assert np.array_equal(loaded.values, ds.values)


@pytest.fixture(scope="module")
def stored(tmp_path_factory, dataset):
    root = tmp_path_factory.mktemp("ds")
    store = save_dataset(dataset, root)
    return root, store


class TestIndexPersistence:

    @pytest.mark.parametrize(
        "config",
        [
            IndexConfig("sax", T=240, W=24, alphabet=16),
            IndexConfig("sax", T=240, W=24, alphabet=1024),
            IndexConfig(
                "ssax", T=240, W=12, season_length=10, season_alphabet=256, res_alphabet=32,
                mean_strength=0.4,
            ),
            IndexConfig(
                "tsax", T=240, W=24, trend_alphabet=64, res_alphabet=16, mean_strength=0.2
            ),
        ],
    )
    def test_round_trip(self, stored, dataset, config):
        root, store = stored
        index = build_index(dataset.values, config)
        persist_index(store, index)
        loaded = load_index(store, config)
        assert loaded.config == config
        for a, b in zip(
            (index.symbols, index.mask_symbols, index.res_symbols, index.angle_symbols),
            (loaded.symbols, loaded.mask_symbols, loaded.res_symbols, loaded.angle_symbols),
        ):
            assert (a is None) == (b is None)
            if a is not None:
                assert np.array_equal(a, b)
        # distances through the reloaded index are bit-identical
        from saxmatch.matching import encode_query

        q = dataset.values[4]
        d1 = representation_distances(index, encode_query(q, index))
        d2 = representation_distances(loaded, encode_query(q, loaded))
        assert np.array_equal(d1, d2)

    def test_rewrite_identical_bytes(self, stored, dataset):
        root, store = stored
        config = IndexConfig("sax", T=240, W=24, alphabet=16)
        index = build_index(dataset.values, config)
        p1 = persist_index(store, index)
        first = p1.read_bytes()
        p2 = persist_index(store, build_index(dataset.values, config))
        assert p1 == p2 and p2.read_bytes() == first

    def test_config_mismatch(self, stored, dataset):
        root, store = stored
        config = IndexConfig("sax", T=240, W=24, alphabet=16)
        other = IndexConfig("sax", T=240, W=12, alphabet=16)
        persist_index(store, build_index(dataset.values, config))
        # point the other config's path at the stored blob
        payload = index_path(store, config).read_bytes()
        index_path(store, other).write_bytes(payload)
        with pytest.raises(ConfigMismatch):
            load_index(store, other)

    def test_version_mismatch(self, stored, dataset):
        root, store = stored
        config = IndexConfig("sax", T=240, W=24, alphabet=16)
        path = persist_index(store, build_index(dataset.values, config))
        payload = bytearray(path.read_bytes())
        payload[4:6] = (99).to_bytes(2, "little")
        path.write_bytes(bytes(payload))
        with pytest.raises(VersionMismatch):
            load_index(store, config)

    def test_byte_per_symbol_size(self, stored, dataset):
        root, store = stored
        config = IndexConfig("sax", T=240, W=48, alphabet=64)
        path = persist_index(store, build_index(dataset.values, config))
        header_bound = 64
        assert path.stat().st_size <= dataset.size * 48 * 1 + header_bound


class TestConcurrentReaders:
    def test_parallel_reads_are_consistent(self, tmp_path, dataset):
        from concurrent.futures import ThreadPoolExecutor

        store = save_dataset(dataset, tmp_path)
        with ThreadPoolExecutor(max_workers=4) as pool:
            rows = list(pool.map(store.read_series, range(len(store)) ))
        for i, row in enumerate(rows):
            assert np.array_equal(row, dataset.values[i])
