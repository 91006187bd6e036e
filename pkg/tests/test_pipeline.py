"""Cache orchestration: rebuild behaviour and the streamed big-tier build.

The streaming builder is aimed at the 8-voter tier, but nothing in it
depends on the width beyond the BIG_N constant.  Retargeting it at 6
voters runs the whole pass (enumeration, classification, vector files,
count certification, atomic installs, streamed gap queries) in seconds
against fully known counts.
"""

import numpy as np
import pytest

from votekit import certified, pipeline
from votekit.certified import CountMismatchError
from votekit.enumeration import CatalogFormatError, read_catalog
from votekit.geometry import _reduced_rows, read_vectors, write_vectors
from votekit.pipeline import (
    _UniqueAccumulator,
    big_files_present,
    build_big_tables,
    catalog_path,
    ensure_catalog,
    ensure_vectors,
    fetch_catalog_games,
    load_big_store,
    omega_big,
    vector_path,
)


def test_unique_accumulator_counts_distinct_rows():
    acc = _UniqueAccumulator(limit=4)
    acc.add(np.array([[1, 2], [1, 2], [3, 4]], dtype=np.int64))
    acc.add(np.array([[3, 4], [5, 6]], dtype=np.int64))  # forces a compaction
    acc.add(np.array([[1, 2], [7, 8]], dtype=np.int64))
    assert acc.count() == 4
    assert acc.pending == [] and acc.pending_rows == 0
    # count() is idempotent and later adds still merge correctly
    assert acc.count() == 4
    acc.add(np.array([[9, 9]], dtype=np.int64))
    assert acc.count() == 5


def test_ensure_catalog_rejects_unknown_class(tmp_path):
    with pytest.raises(ValueError, match="catalog class"):
        ensure_catalog("xx", 3, tmp_path)


def test_ensure_catalog_sg4_requires_four_voters(tmp_path):
    with pytest.raises(ValueError, match="4 voters"):
        ensure_catalog("sg4", 5, tmp_path)


def test_ensure_vectors_discards_wrong_kind_cache(tmp_path, catalogs):
    cat = catalogs("wg", 3)
    path = vector_path(tmp_path, "wg", 3, "ssi")
    pbi_nums, pbi_dens = cat.power_data("pbi")
    write_vectors(path, "pbi", pbi_nums, pbi_dens)

    nums, den = ensure_vectors(cat, "ssi", cache_dir=tmp_path)
    got_kind, disk_nums, _ = read_vectors(path)
    assert got_kind == "ssi"
    assert np.array_equal(disk_nums, nums)
    assert den == 6


def test_ensure_vectors_discards_wrong_shape_cache(tmp_path, catalogs):
    cat = catalogs("wg", 3)
    path = vector_path(tmp_path, "wg", 3, "ssi")
    good_nums, good_den = cat.power_data("ssi")
    write_vectors(path, "ssi", good_nums[:2], good_den)  # truncated row count

    nums, _ = ensure_vectors(cat, "ssi", cache_dir=tmp_path)
    assert nums.shape == (len(cat), 3)
    _, disk_nums, _ = read_vectors(path)
    assert disk_nums.shape == (len(cat), 3)


def test_big_build_retargeted_at_six_voters(tmp_path, monkeypatch, catalogs, vectors):
    monkeypatch.setattr(pipeline, "BIG_N", 6)
    seen = []
    counts = build_big_tables(
        cache_dir=tmp_path,
        chunk_size=256,
        progress=lambda done, total: seen.append((done, total)),
    )

    assert counts == {
        "cg": 1171,
        "wg": 1111,
        "cg.ssi": 536,
        "cg.pbi": 555,
        "wg.ssi": 536,
        "wg.pbi": 555,
    }
    assert big_files_present(tmp_path)
    assert not list(tmp_path.glob("*.tmp"))
    assert seen[-1] == (1171, 1171)
    assert [d for d, _ in seen] == sorted({d for d, _ in seen})

    # the streamed catalogs hold exactly the games the in-memory path builds
    for klass in ("cg", "wg"):
        cat = read_catalog(catalog_path(tmp_path, klass, 6))
        reference = catalogs(klass, 6)
        assert (cat.klass, cat.n, len(cat)) == (klass, 6, len(reference))
        assert {g.shift_minimal for g in cat} == {g.shift_minimal for g in reference}

    # vector files agree with the in-memory computation, order aside
    for klass in ("cg", "wg"):
        for kind in ("ssi", "pbi"):
            _, nums, dens = read_vectors(vector_path(tmp_path, klass, 6, kind))
            ref_nums, ref_dens = vectors(klass, 6, kind)
            got = np.unique(_reduced_rows(nums, dens)[0], axis=0)
            want = np.unique(_reduced_rows(ref_nums, ref_dens)[0], axis=0)
            assert np.array_equal(got, want)

    for kind, distinct in (("ssi", 536), ("pbi", 555)):
        assert len(load_big_store(tmp_path, kind)) == distinct

    # at 6 voters every complete game's vector is realized weighted
    reports = omega_big(tmp_path)
    assert set(reports) == {(k, m) for k in ("ssi", "pbi") for m in ("l1", "linf")}
    for rep in reports.values():
        assert rep.n == 6
        assert rep.omega == 0
        assert rep.decimal == "0.0000000"
        assert rep.attaining == []


@pytest.mark.parametrize(
    "inject",
    ["games", "vectors"],
)
def test_big_build_mismatch_removes_partial_files(tmp_path, monkeypatch, inject):
    monkeypatch.setattr(pipeline, "BIG_N", 6)
    if inject == "games":
        monkeypatch.setitem(certified.WEIGHTED_COUNTS, 6, 1110)
    else:
        monkeypatch.setitem(certified.DISTINCT_VECTOR_COUNTS[("cg", "pbi")], 6, 1)

    with pytest.raises(CountMismatchError) as err:
        build_big_tables(cache_dir=tmp_path)
    assert err.value.got in (1111, 555)
    assert not big_files_present(tmp_path)
    assert list(tmp_path.glob("*")) == []


def test_fetch_catalog_games_selected_indices(tmp_path):
    cat = ensure_catalog("cg", 5, tmp_path)
    path = catalog_path(tmp_path, "cg", 5)

    picked = fetch_catalog_games(path, [116, 0, 33])
    assert set(picked) == {0, 33, 116}
    for i, g in picked.items():
        assert g == cat.games[i]

    assert fetch_catalog_games(path, []) == {}
    # early exit once everything requested has been seen
    assert fetch_catalog_games(path, [0])[0] == cat.games[0]


def test_fetch_catalog_games_missing_index(tmp_path):
    ensure_catalog("cg", 4, tmp_path)
    path = catalog_path(tmp_path, "cg", 4)
    with pytest.raises(CatalogFormatError, match="no game at index 25"):
        fetch_catalog_games(path, [3, 25])


def test_big_files_present_requires_all_six(tmp_path, monkeypatch):
    monkeypatch.setattr(pipeline, "BIG_N", 6)
    build_big_tables(cache_dir=tmp_path)
    assert big_files_present(tmp_path)
    vector_path(tmp_path, "wg", 6, "pbi").unlink()
    assert not big_files_present(tmp_path)
