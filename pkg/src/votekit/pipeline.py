"""Disk-cache orchestration for catalogs and per-game index vectors.

Catalogs up to 7 voters are built in memory and cached as single files.
The 8-voter tier never fits comfortably in memory, so one streaming pass
writes both catalogs (complete and weighted) and all four vector files,
certifying every count before the files are moved into place.  Gap
computations at 8 voters then stream the cached vectors.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from . import certified
from .certified import CountMismatchError
from .enumeration import (
    DEFAULT_CHUNK,
    CatalogFormatError,
    CatalogWriter,
    GameCatalog,
    _parallel_classify,
    check_certified_count,
    classify_weighted_chunk,
    enumerate_complete,
    enumerate_simple4,
    iter_catalog_masks,
    iter_complete_chunks,
    read_catalog,
    shift_maximal_losing_families,
    shift_minimal_families,
    write_catalog,
)
from .games import CompleteGame
from .geometry import (
    GapReport,
    GapTracker,
    Metric,
    VectorFormatError,
    VectorStore,
    VectorWriter,
    _reduced_rows,
    iter_vector_chunks,
    read_vectors,
    store_from_rows,
    write_vectors,
)
from .indices import KINDS, batch_ssi_numerators, batch_swing_counts

__all__ = [
    "BIG_N",
    "default_cache_dir",
    "catalog_path",
    "vector_path",
    "ensure_catalog",
    "ensure_vectors",
    "ensure_store",
    "big_files_present",
    "build_big_tables",
    "load_big_store",
    "omega_big",
    "fetch_catalog_games",
]

BIG_N = 8


def default_cache_dir() -> Path:
    env = os.environ.get("VOTEKIT_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "votekit"


def _resolve(cache_dir) -> Path:
    return Path(cache_dir) if cache_dir is not None else default_cache_dir()


def catalog_path(cache_dir, klass: str, n: int) -> Path:
    return Path(cache_dir) / f"{klass}{n}.cat"


def vector_path(cache_dir, klass: str, n: int, kind: str) -> Path:
    return Path(cache_dir) / f"{klass}{n}.{kind}.vec"


def ensure_catalog(
    klass: str,
    n: int,
    cache_dir=None,
    workers: int = 1,
    progress: Callable[[int], None] | None = None,
) -> GameCatalog:
    """Load a catalog from cache, building and caching it on a miss.

    A cache file that fails to parse or certify is discarded and rebuilt.
    A fresh build that fails certification raises CountMismatchError.
    """
    cache_dir = _resolve(cache_dir)
    path = catalog_path(cache_dir, klass, n)
    if path.exists():
        try:
            return read_catalog(path)
        except (CatalogFormatError, CountMismatchError, OSError):
            path.unlink(missing_ok=True)
    if klass == "sg4":
        if n != 4:
            raise ValueError("the simple-game catalog is only built for 4 voters")
        cat = enumerate_simple4()
    elif klass == "cg":
        cat = enumerate_complete(n, progress=progress)
    elif klass == "wg":
        base = ensure_catalog("cg", n, cache_dir, workers, progress)
        cat = base.weighted_subset(workers)
    else:
        raise ValueError(f"unknown catalog class {klass!r}")
    cache_dir.mkdir(parents=True, exist_ok=True)
    tmp = Path(str(path) + ".tmp")
    write_catalog(tmp, cat)
    os.replace(tmp, path)
    return cat


def ensure_vectors(catalog: GameCatalog, kind: str, cache_dir=None):
    """Per-game index vectors for a catalog, cached on disk.

    Installs the data on the catalog and returns (numerators, dens).
    """
    cache_dir = _resolve(cache_dir)
    path = vector_path(cache_dir, catalog.klass, catalog.n, kind)
    if path.exists():
        try:
            got_kind, nums, dens = read_vectors(path)
            if got_kind == kind and nums.shape == (len(catalog), catalog.n):
                catalog.attach_power(kind, nums, dens)
                return nums, dens
        except (VectorFormatError, OSError):
            pass
        path.unlink(missing_ok=True)
    nums, dens = catalog.power_data(kind)
    cache_dir.mkdir(parents=True, exist_ok=True)
    tmp = Path(str(path) + ".tmp")
    write_vectors(tmp, kind, nums, dens)
    os.replace(tmp, path)
    return nums, dens


def ensure_store(
    klass: str, n: int, kind: str, cache_dir=None, workers: int = 1
) -> tuple[GameCatalog, VectorStore]:
    """Catalog plus deduplicated nearest-neighbour store, via the cache."""
    cat = ensure_catalog(klass, n, cache_dir, workers)
    nums, dens = ensure_vectors(cat, kind, cache_dir)
    return cat, store_from_rows(kind, n, nums, dens)


# ---------------------------------------------------------------------------
# The 8-voter tier: streamed build, certified, then streamed queries
# ---------------------------------------------------------------------------


class _UniqueAccumulator:
    """Distinct rows of a huge matrix, accumulated in bounded memory.

    Chunks are deduplicated on arrival and merged into the sorted base
    whenever the pending pile grows past the limit.
    """

    def __init__(self, limit: int = 1 << 21):
        self.base: np.ndarray | None = None
        self.pending: list[np.ndarray] = []
        self.pending_rows = 0
        self.limit = limit

    def add(self, rows: np.ndarray) -> None:
        u = np.unique(rows, axis=0)
        self.pending.append(u)
        self.pending_rows += len(u)
        if self.pending_rows >= self.limit:
            self.compact()

    def compact(self) -> None:
        if not self.pending:
            return
        parts = self.pending if self.base is None else [self.base, *self.pending]
        self.base = np.unique(np.concatenate(parts, axis=0), axis=0)
        self.pending = []
        self.pending_rows = 0

    def count(self) -> int:
        self.compact()
        return 0 if self.base is None else len(self.base)


def _big_paths(cache_dir) -> list[Path]:
    out = [catalog_path(cache_dir, klass, BIG_N) for klass in ("cg", "wg")]
    out += [
        vector_path(cache_dir, klass, BIG_N, kind)
        for klass in ("cg", "wg")
        for kind in KINDS
    ]
    return out


def big_files_present(cache_dir=None) -> bool:
    cache_dir = _resolve(cache_dir)
    return all(p.exists() for p in _big_paths(cache_dir))


def build_big_tables(
    cache_dir=None,
    workers: int = 1,
    progress: Callable[[int, int], None] | None = None,
    chunk_size: int = DEFAULT_CHUNK,
) -> dict[str, int]:
    """Enumerate the 8-voter complete games once, writing everything.

    Produces cg8/wg8 catalogs and the four vector files, certifies game
    counts and distinct-vector counts against the frozen values, and only
    then moves the files into place.  This takes hours of CPU time.

    Returns the certified counts by label.
    """
    cache_dir = _resolve(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    total = certified.COMPLETE_COUNTS[BIG_N]
    finals = _big_paths(cache_dir)
    tmps = [Path(str(p) + ".tmp") for p in finals]
    cg_cat = CatalogWriter(tmps[0], "cg", BIG_N)
    wg_cat = CatalogWriter(tmps[1], "wg", BIG_N)
    vecw = {
        ("cg", "ssi"): VectorWriter(tmps[2], "ssi", BIG_N),
        ("cg", "pbi"): VectorWriter(tmps[3], "pbi", BIG_N),
        ("wg", "ssi"): VectorWriter(tmps[4], "ssi", BIG_N),
        ("wg", "pbi"): VectorWriter(tmps[5], "pbi", BIG_N),
    }
    accs = {key: _UniqueAccumulator() for key in vecw}
    done = 0
    try:
        for tables in iter_complete_chunks(BIG_N, chunk_size):
            smw = shift_minimal_families(tables, BIG_N)
            sml = shift_maximal_losing_families(tables, BIG_N)
            ssi_nums, ssi_den = batch_ssi_numerators(tables)
            pbi_nums = batch_swing_counts(tables)
            pbi_totals = pbi_nums.sum(axis=1)

            cg_cat.add_many(smw)
            vecw["cg", "ssi"].add(ssi_nums, ssi_den)
            vecw["cg", "pbi"].add(pbi_nums, pbi_totals)
            accs["cg", "ssi"].add(_reduced_rows(ssi_nums, ssi_den)[0])
            accs["cg", "pbi"].add(_reduced_rows(pbi_nums, pbi_totals)[0])

            if workers > 1:
                results = _parallel_classify(BIG_N, smw, sml, workers)
            else:
                results = classify_weighted_chunk(BIG_N, smw, sml)
            widx = [i for i, r in enumerate(results) if r is not None]
            wg_cat.add_many([smw[i] for i in widx])
            vecw["wg", "ssi"].add(ssi_nums[widx], ssi_den)
            vecw["wg", "pbi"].add(pbi_nums[widx], pbi_totals[widx])
            accs["wg", "ssi"].add(_reduced_rows(ssi_nums[widx], ssi_den)[0])
            accs["wg", "pbi"].add(_reduced_rows(pbi_nums[widx], pbi_totals[widx])[0])

            done += tables.shape[0]
            if progress is not None:
                progress(done, total)

        counts = {"cg": cg_cat.count, "wg": wg_cat.count}
        check_certified_count("cg", BIG_N, counts["cg"])
        check_certified_count("wg", BIG_N, counts["wg"])
        for (klass, kind), acc in accs.items():
            got = acc.count()
            expected = certified.DISTINCT_VECTOR_COUNTS[klass, kind][BIG_N]
            counts[f"{klass}.{kind}"] = got
            if got != expected:
                raise CountMismatchError(
                    f"distinct {kind} vectors over {klass} ({BIG_N} voters)",
                    expected,
                    got,
                )
    except BaseException:
        cg_cat.close()
        wg_cat.close()
        for w in vecw.values():
            w.close()
        for tmp in tmps:
            tmp.unlink(missing_ok=True)
        raise
    cg_cat.close()
    wg_cat.close()
    for w in vecw.values():
        w.close()
    for tmp, final in zip(tmps, finals):
        os.replace(tmp, final)
    return counts


def load_big_store(cache_dir, kind: str) -> VectorStore:
    """Weighted-game vector store at 8 voters, from the cached file."""
    cache_dir = _resolve(cache_dir)
    path = vector_path(cache_dir, "wg", BIG_N, kind)
    got_kind, nums, dens = read_vectors(path)
    if got_kind != kind or nums.shape != (certified.WEIGHTED_COUNTS[BIG_N], BIG_N):
        raise VectorFormatError(f"{path}: not the certified wg{BIG_N} {kind} data")
    return store_from_rows(kind, BIG_N, nums, dens)


class _NoGames:
    """Row-aligned placeholder; attaining games get resolved afterwards."""

    def __getitem__(self, i):
        return None


def fetch_catalog_games(path, indices: Iterable[int]) -> dict[int, CompleteGame]:
    """Selected games out of a catalog file, in one sequential scan."""
    want = {int(i) for i in indices}
    out: dict[int, CompleteGame] = {}
    if not want:
        return out
    (_, n, _), chunks = iter_catalog_masks(path)
    pos = 0
    for block in chunks:
        for masks in block:
            if pos in want:
                out[pos] = CompleteGame(n, masks, validate=False)
            pos += 1
        if len(out) == len(want):
            break
    chunks.close()
    if len(out) != len(want):
        missing = sorted(want - out.keys())
        raise CatalogFormatError(f"{path}: no game at index {missing[0]}")
    return out


def omega_big(
    cache_dir=None,
    kinds: Iterable[str] = KINDS,
    metrics: Iterable = (Metric.L1, Metric.LINF),
    progress: Callable[[str, int, int], None] | None = None,
) -> dict[tuple[str, str], GapReport]:
    """Gap reports at 8 voters, streamed from the cached vector files.

    Requires the files from build_big_tables.  Returns one report per
    (index kind, metric) pair, attaining games included.
    """
    cache_dir = _resolve(cache_dir)
    metrics = [Metric.parse(m) if not isinstance(m, Metric) else m for m in metrics]
    reports: dict[tuple[str, str], GapReport] = {}
    for kind in kinds:
        store = load_big_store(cache_dir, kind)
        trackers = {metric: GapTracker(store, metric) for metric in metrics}
        (_, _, count), chunks = iter_vector_chunks(
            vector_path(cache_dir, "cg", BIG_N, kind)
        )
        offset = 0
        none_games = _NoGames()
        for nums, dens in chunks:
            for tracker in trackers.values():
                tracker.update(nums, dens, none_games, offset=offset)
            offset += len(nums)
            if progress is not None:
                progress(kind, offset, count)
        needed = {
            idx for tracker in trackers.values() for idx, _, _ in tracker.attaining
        }
        games = fetch_catalog_games(catalog_path(cache_dir, "cg", BIG_N), needed)
        for metric, tracker in trackers.items():
            tracker.attaining = [
                (idx, games[idx], vec) for idx, _, vec in tracker.attaining
            ]
            reports[kind, metric.value] = tracker.report(BIG_N)
    return reports
