"""Exact vector stores, nearest-neighbour search, and gap tracking."""

from fractions import Fraction

import numpy as np
import pytest

from votekit.geometry import (
    GapTracker,
    Metric,
    VectorFormatError,
    VectorWriter,
    build_store,
    count_distinct,
    distance,
    omega,
    read_vectors,
    store_from_rows,
    write_vectors,
)
from votekit.indices import PowerVector, ssi

from oracles import linear_nearest, store_rows


def test_metric_parse():
    assert Metric.parse("l1") is Metric.L1
    assert Metric.parse(" LINF ") is Metric.LINF
    with pytest.raises(ValueError):
        Metric.parse("l2")


def test_distance_on_vectors_and_sequences():
    a = PowerVector("ssi", (7, 3, 1, 1), 12)
    b = PowerVector("ssi", (5, 3, 1, 1), 10)
    assert distance(a, b, Metric.L1) == Fraction(1, 6)
    assert distance(a, b, Metric.LINF) == Fraction(1, 12)
    # Raw sequences skip the kind check; that is how cross-index
    # disagreement is measured deliberately.
    assert distance(a.fractions(), b.fractions(), Metric.L1) == Fraction(1, 6)
    with pytest.raises(ValueError):
        distance(a, PowerVector("pbi", (5, 3, 1, 1), 10), Metric.L1)
    with pytest.raises(ValueError):
        distance(a, PowerVector("ssi", (1, 1), 2), Metric.L1)


def _toy_store():
    nums = np.array([[2, 1, 0], [1, 1, 1], [2, 1, 0]], dtype=np.int64)
    return store_from_rows("ssi", 3, nums, 3)


def test_store_dedups_and_keeps_first_representative():
    store = _toy_store()
    assert len(store) == 2
    i = store.index_of((2, 1, 0), 3)
    assert store.reps[i] == 0  # row 2 was the duplicate
    assert store.vector(i).fractions() == (Fraction(2, 3), Fraction(1, 3), 0)
    assert store.index_of((1, 2, 0), 3) is None


def test_nearest_exact_hit_and_tie_break():
    store = _toy_store()
    res = store.nearest([2, 1, 0], 3, Metric.L1)
    assert res.dist == 0 and not res.aborted
    assert res.index == store.index_of((2, 1, 0), 3)
    # (1/2, 1/3, 1/6) sits 1/3 from both stored vectors (L1); ties go to
    # the lexicographically smallest vector, here (1/3, 1/3, 1/3).
    res = store.nearest([3, 2, 1], 6, Metric.L1)
    assert res.dist == Fraction(1, 3)
    assert store.vector(res.index).fractions()[0] == Fraction(1, 3)


def test_nearest_stop_below_abort_is_flagged():
    store = _toy_store()
    res = store.nearest([4, 1, 1], 6, Metric.L1, stop_below=Fraction(1, 2))
    assert res.aborted
    assert Fraction(1, 3) <= res.dist < Fraction(1, 2)
    # A bound at the exact distance never aborts: ties must stay exact.
    res = store.nearest([4, 1, 1], 6, Metric.L1, stop_below=Fraction(1, 3))
    assert not res.aborted and res.dist == Fraction(1, 3)


@pytest.mark.parametrize("kind", ["ssi", "pbi"])
@pytest.mark.parametrize("metric", [Metric.L1, Metric.LINF])
def test_nearest_matches_linear_scan(stores, vectors, kind, metric):
    _, store = stores("wg", 5, kind)
    rows = store_rows(store)
    qnums, qdens = vectors("cg", 5, kind)
    qdens = np.broadcast_to(np.asarray(qdens, dtype=np.int64), (len(qnums),))
    for qi in range(len(qnums)):
        q = [int(x) for x in qnums[qi]]
        qd = int(qdens[qi])
        res = store.nearest(q, qd, metric)
        dist, hits = linear_nearest(rows, q, qd, metric is Metric.L1)
        assert res.dist == dist
        assert res.index in hits


def test_count_distinct_matches_set_of_fractions(catalogs, vectors):
    cat = catalogs("cg", 4)
    nums, dens = vectors("cg", 4, "pbi")
    dens = np.broadcast_to(np.asarray(dens, dtype=np.int64), (len(nums),))
    seen = {
        tuple(Fraction(int(a), int(dens[i])) for a in nums[i]) for i in range(len(nums))
    }
    assert count_distinct(cat, "pbi") == len(seen)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_gap_is_zero_through_six_voters(catalogs, stores, n):
    cat = catalogs("cg", n)
    _, store = stores("wg", n, "ssi")
    rep = omega(cat, store, Metric.L1)
    assert rep.omega == 0 and rep.decimal == "0.0000000"
    assert rep.attaining == []


def test_gap_tracker_chunks_match_one_shot():
    store = _toy_store()
    qnums = np.array(
        [[2, 1, 0], [4, 1, 1], [5, 1, 0], [3, 3, 0]], dtype=np.int64
    )
    qdens = np.array([3, 6, 6, 6], dtype=np.int64)
    games = ["g0", "g1", "g2", "g3"]

    whole = GapTracker(store, Metric.L1)
    whole.update(qnums, qdens, games)
    chunked = GapTracker(store, Metric.L1)
    chunked.update(qnums[:2], qdens[:2], games[:2])
    chunked.update(qnums[2:], qdens[2:], games[2:], offset=2)

    a, b = whole.report(3), chunked.report(3)
    assert a.omega == b.omega == Fraction(1, 3)
    assert [x[0] for x in a.attaining] == [x[0] for x in b.attaining] == [1, 2, 3]
    assert [x[1] for x in b.attaining] == ["g1", "g2", "g3"]
    assert b.worst_vector is not None and b.nearest_vector is not None


def test_vector_io_round_trip(tmp_path):
    nums = np.array([[2, 1, 0], [1, 1, 1]], dtype=np.int64)
    path = tmp_path / "toy.vec"
    write_vectors(path, "ssi", nums, 3)
    kind, back_nums, back_dens = read_vectors(path)
    assert kind == "ssi"
    assert np.array_equal(back_nums, nums)
    assert np.array_equal(np.broadcast_to(back_dens, (2,)), np.array([3, 3]))


def test_vector_writer_streams_like_one_shot(tmp_path):
    nums = np.array([[2, 1, 0], [1, 1, 1], [3, 0, 0]], dtype=np.int64)
    dens = np.array([3, 3, 3], dtype=np.int64)
    a, b = tmp_path / "a.vec", tmp_path / "b.vec"
    write_vectors(a, "pbi", nums, dens)
    with VectorWriter(b, "pbi", 3) as w:
        w.add(nums[:1], dens[:1])
        w.add(nums[1:], dens[1:])
    assert a.read_bytes() == b.read_bytes()


def test_vector_io_detects_corruption(tmp_path):
    nums = np.array([[2, 1, 0]], dtype=np.int64)
    path = tmp_path / "bad.vec"
    write_vectors(path, "ssi", nums, 3)
    raw = bytearray(path.read_bytes())
    raw[0] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(VectorFormatError):
        read_vectors(path)
    write_vectors(path, "ssi", nums, 3)
    path.write_bytes(path.read_bytes()[:-3])
    with pytest.raises(VectorFormatError):
        read_vectors(path)


def test_build_store_from_catalog(catalogs):
    cat = catalogs("wg", 4)
    store = build_store(cat, "ssi")
    assert len(store) == count_distinct(cat, "ssi")
    for g in list(cat)[::5]:
        v = ssi(g)
        i = store.index_of(v.key()[:-1], v.key()[-1])
        assert i is not None
        assert store.vector(i) == v
