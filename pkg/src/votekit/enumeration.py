"""Exhaustive enumeration of complete simple games.

With voters sorted strongest-first, complete simple games correspond one
to one with up-sets of the shift order on coalitions, so isomorphism
classes come out of a depth-first search over monotone 0/1 labellings of
the coalition lattice with no deduplication step.  The lattice is walked
in a fixed linear extension; a coalition's label is forced to 1 as soon
as one of its one-step weakenings is labelled 1, and is a branch point
otherwise.  The empty coalition is pinned to 0 and the grand coalition
to 1, which keeps the labelling a simple game.

Enumerated counts are checked against certified values before anything
downstream may consume them.  n = 7 fits comfortably in memory; n = 8
(16.2 million games) is streamed in chunks and takes hours, so it sits
behind explicit opt-in at the CLI.
"""

from __future__ import annotations

import struct
from typing import Callable, Iterator, Sequence

import numpy as np

from . import certified
from .games import (
    CompleteGame,
    ExplicitGame,
    WeightedGame,
    _linear_extension,
    _lower_neighbors,
    _upper_neighbors,
    canonical_table,
    dominates,
    is_weighted,
    sorted_complete_representation,
)
from .indices import batch_ssi_numerators, batch_swing_counts

__all__ = [
    "ShiftPoset",
    "GameCatalog",
    "enumerate_complete",
    "enumerate_weighted",
    "enumerate_simple4",
    "weighted_certificate",
    "iter_complete_chunks",
    "classify_weighted_chunk",
    "check_certified_count",
    "write_catalog",
    "read_catalog",
    "CatalogWriter",
    "iter_catalog_masks",
    "CatalogFormatError",
]

MAX_CATALOG_VOTERS = 7
MAX_ENUMERATION_VOTERS = 8
DEFAULT_CHUNK = 16384


class ShiftPoset:
    """The shift order on coalitions of n voters.

    S <= T when T arises from S by adding members or trading a member for
    a stronger one.  Complete simple games are exactly its up-sets.
    """

    def __init__(self, n: int):
        self.n = n
        self._lowers = _lower_neighbors(n)
        self._uppers = _upper_neighbors(n)

    def dominates(self, a: int, b: int) -> bool:
        return dominates(a, b, self.n)

    def lower_neighbors(self, mask: int) -> tuple[int, ...]:
        return self._lowers[mask]

    def upper_neighbors(self, mask: int) -> tuple[int, ...]:
        return self._uppers[mask]

    def linear_extension(self) -> tuple[int, ...]:
        return _linear_extension(self.n)


def _iter_labelings(order: Sequence[int], lowers: Sequence[Sequence[int]]) -> Iterator[bytearray]:
    """All monotone labellings with order[0] -> 0 and order[-1] -> 1.

    Yields one shared bytearray indexed by coalition mask; callers must
    copy it before advancing.
    """
    size = len(order)
    lowers_by_pos = [lowers[m] for m in order]
    val = bytearray(size)
    stack: list[int] = []
    t = 0
    while True:
        while t < size:
            m = order[t]
            forced = False
            for f in lowers_by_pos[t]:
                if val[f]:
                    forced = True
                    break
            if forced:
                val[m] = 1
            elif t == size - 1:
                val[m] = 1  # the grand coalition must win
            else:
                val[m] = 0  # covers the empty coalition, never branched
                if t > 0:
                    stack.append(t)
            t += 1
        yield val
        if not stack:
            return
        t = stack.pop()
        val[order[t]] = 1
        t += 1


def iter_complete_chunks(
    n: int,
    chunk_size: int = DEFAULT_CHUNK,
    progress: Callable[[int], None] | None = None,
) -> Iterator[np.ndarray]:
    """Outcome tables of all complete games with n voters, strongest voter
    first, in chunks of shape (games, 2**n)."""
    if not 1 <= n <= MAX_ENUMERATION_VOTERS:
        raise ValueError(f"enumeration supports 1..{MAX_ENUMERATION_VOTERS} voters, got {n}")
    size = 1 << n
    order = _linear_extension(n)
    lowers = _lower_neighbors(n)
    buf = np.empty((chunk_size, size), dtype=np.uint8)
    done = 0
    i = 0
    for val in _iter_labelings(order, lowers):
        buf[i] = np.frombuffer(val, dtype=np.uint8)
        i += 1
        if i == chunk_size:
            done += i
            yield buf[:i].copy()
            if progress is not None:
                progress(done)
            i = 0
    if i:
        done += i
        yield buf[:i].copy()
        if progress is not None:
            progress(done)


def _family_lists(
    tables: np.ndarray, neighbors: Sequence[Sequence[int]], minimal_winning: bool
) -> list[tuple[int, ...]]:
    """Per game: the winning coalitions whose one-step weakenings all lose
    (minimal_winning=True), or the losing ones whose one-step
    strengthenings all win."""
    t = tables.astype(bool)
    if minimal_winning:
        keep = t.copy()
        for m, nb in enumerate(neighbors):
            col = keep[:, m]
            for f in nb:
                col &= ~t[:, f]
            keep[:, m] = col
    else:
        keep = ~t
        for m, nb in enumerate(neighbors):
            col = keep[:, m]
            for u in nb:
                col &= t[:, u]
            keep[:, m] = col
    rows, cols = np.nonzero(keep)
    bounds = np.searchsorted(rows, np.arange(tables.shape[0] + 1))
    return [tuple(int(c) for c in cols[bounds[g] : bounds[g + 1]]) for g in range(tables.shape[0])]


def shift_minimal_families(tables: np.ndarray, n: int) -> list[tuple[int, ...]]:
    return _family_lists(tables, _lower_neighbors(n), True)


def shift_maximal_losing_families(tables: np.ndarray, n: int) -> list[tuple[int, ...]]:
    return _family_lists(tables, _upper_neighbors(n), False)


def classify_weighted_chunk(
    n: int,
    smw: Sequence[tuple[int, ...]],
    sml: Sequence[tuple[int, ...]],
) -> list[tuple[int, tuple[int, ...]] | None]:
    """Weighted representations (quota, weights) per game, None where the
    game is not weighted."""
    return [sorted_complete_representation(n, w, l) for w, l in zip(smw, sml)]


def check_certified_count(klass: str, n: int, count: int) -> None:
    expected = None
    if klass == "cg":
        expected = certified.COMPLETE_COUNTS.get(n)
    elif klass == "wg":
        expected = certified.WEIGHTED_COUNTS.get(n)
    elif klass == "sg4":
        expected = certified.SIMPLE_4_TOTAL if n == 4 else None
    if expected is not None and count != expected:
        raise certified.CountMismatchError(f"{klass}({n})", expected, count)


class GameCatalog:
    """An in-memory catalog of games of one class, with their tables.

    klass is "cg" (complete), "wg" (weighted, stored by their complete
    form plus a certificate), or "sg4" (all simple games on 4 voters).
    Power data attaches lazily per index kind and is cached.
    """

    def __init__(self, klass: str, n: int, games: list, tables: np.ndarray):
        self.klass = klass
        self.n = n
        self.games = games
        self.tables = tables
        self.weighted_flags: np.ndarray | None = None
        self.certificates: list | None = None
        self._power: dict[str, tuple[np.ndarray, object]] = {}

    def __len__(self) -> int:
        return len(self.games)

    def __iter__(self):
        return iter(self.games)

    def classify_weighted(self, workers: int = 1) -> None:
        """Attach weightedness flags and certificates to every game."""
        if self.weighted_flags is not None:
            return
        smw = [g.shift_minimal for g in self.games]
        sml = shift_maximal_losing_families(self.tables, self.n)
        if workers > 1:
            results = _parallel_classify(self.n, smw, sml, workers)
        else:
            results = classify_weighted_chunk(self.n, smw, sml)
        self.weighted_flags = np.array([r is not None for r in results], dtype=bool)
        self.certificates = [
            None if r is None else WeightedGame(r[0], r[1]) for r in results
        ]

    def weighted_subset(self, workers: int = 1) -> "GameCatalog":
        """The weighted games, as their own catalog with certificates."""
        self.classify_weighted(workers)
        idx = np.nonzero(self.weighted_flags)[0]
        sub = GameCatalog(
            "wg",
            self.n,
            [self.games[i] for i in idx],
            self.tables[idx],
        )
        sub.weighted_flags = np.ones(len(idx), dtype=bool)
        sub.certificates = [self.certificates[i] for i in idx]
        if self.klass == "cg":
            check_certified_count("wg", self.n, len(sub))
        return sub

    def power_data(self, kind: str, chunk: int = DEFAULT_CHUNK):
        """(numerators, denominator(s)) for all games: ssi shares one
        denominator n!, pbi has one total per game."""
        if kind not in self._power:
            nums = np.empty((len(self), self.n), dtype=np.int64)
            if kind == "ssi":
                den = 1
                for start in range(0, len(self), chunk):
                    block, den = batch_ssi_numerators(self.tables[start : start + chunk])
                    nums[start : start + block.shape[0]] = block
                self._power[kind] = (nums, den)
            elif kind == "pbi":
                totals = np.empty(len(self), dtype=np.int64)
                for start in range(0, len(self), chunk):
                    block = batch_swing_counts(self.tables[start : start + chunk])
                    nums[start : start + block.shape[0]] = block
                    totals[start : start + block.shape[0]] = block.sum(axis=1)
                self._power[kind] = (nums, totals)
            else:
                raise ValueError(f"unknown index kind {kind!r}")
        return self._power[kind]

    def attach_power(self, kind: str, nums: np.ndarray, dens) -> None:
        """Install precomputed index data (e.g. reloaded from disk)."""
        if nums.shape != (len(self), self.n):
            raise ValueError(
                f"power data shape {nums.shape} does not match catalog "
                f"({len(self)}, {self.n})"
            )
        self._power[kind] = (nums, dens)

    def certificate(self, i: int) -> WeightedGame | None:
        """Weighted representation of game i, computing it if not stored."""
        if self.certificates is not None and self.certificates[i] is not None:
            return self.certificates[i]
        g = self.games[i]
        if isinstance(g, CompleteGame):
            sml = shift_maximal_losing_families(self.tables[i : i + 1], self.n)[0]
            r = sorted_complete_representation(self.n, g.shift_minimal, sml)
            return None if r is None else WeightedGame(r[0], r[1])
        return is_weighted(g)


def _parallel_classify(n, smw, sml, workers):
    from concurrent.futures import ProcessPoolExecutor

    blocks = max(1, len(smw) // (workers * 4))
    spans = [(i, min(i + blocks, len(smw))) for i in range(0, len(smw), blocks)]
    out: list = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(classify_weighted_chunk, n, smw[a:b], sml[a:b]) for a, b in spans
        ]
        for f in futures:
            out.extend(f.result())
    return out


def enumerate_complete(
    n: int,
    classify: bool = False,
    workers: int = 1,
    progress: Callable[[int], None] | None = None,
) -> GameCatalog:
    """Catalog of all complete simple games with n voters (n <= 7).

    The count is certified before the catalog is returned.  For n = 8 use
    iter_complete_chunks and the streaming helpers instead.
    """
    if not 1 <= n <= MAX_CATALOG_VOTERS:
        raise ValueError(
            f"in-memory catalogs support 1..{MAX_CATALOG_VOTERS} voters; "
            f"n = 8 is stream-only, larger n is out of range"
        )
    chunks = list(iter_complete_chunks(n, progress=progress))
    tables = np.concatenate(chunks, axis=0) if len(chunks) > 1 else chunks[0]
    check_certified_count("cg", n, tables.shape[0])
    games = [
        CompleteGame(n, masks, validate=False)
        for masks in shift_minimal_families(tables, n)
    ]
    cat = GameCatalog("cg", n, games, tables)
    if classify:
        cat.classify_weighted(workers)
    return cat


def enumerate_weighted(
    n: int, complete: GameCatalog | None = None, workers: int = 1
) -> GameCatalog:
    """Catalog of all weighted games with n voters (n <= 7), certified."""
    if complete is None:
        complete = enumerate_complete(n)
    return complete.weighted_subset(workers)


def enumerate_simple4() -> GameCatalog:
    """All 28 simple games on 4 voters up to isomorphism.

    Walks monotone labellings of the inclusion lattice (one-step weakening
    = drop one member) and dedups by the minimal table over voter
    relabellings.  Weightedness is classified with the general-purpose
    test, certificates included.
    """
    n = 4
    size = 1 << n
    order = sorted(range(size), key=lambda m: (m.bit_count(), m))
    removals = [
        tuple(m & ~(1 << b) for b in range(n) if (m >> b) & 1) for m in range(size)
    ]
    seen: dict[bytes, None] = {}
    for val in _iter_labelings(order, removals):
        e = ExplicitGame(n, bytes(val), validate=False)
        seen.setdefault(canonical_table(e).table, None)
    tables = sorted(seen)
    check_certified_count("sg4", 4, len(tables))
    games = [ExplicitGame(n, t, validate=False) for t in tables]
    cat = GameCatalog("sg4", n, games, np.array([g.np_table for g in games]))
    certs = [is_weighted(g) for g in games]
    cat.weighted_flags = np.array([c is not None for c in certs], dtype=bool)
    cat.certificates = certs
    if int(cat.weighted_flags.sum()) != certified.SIMPLE_4_WEIGHTED:
        raise certified.CountMismatchError(
            "weighted sg4", certified.SIMPLE_4_WEIGHTED, int(cat.weighted_flags.sum())
        )
    return cat


# ---------------------------------------------------------------------------
# Binary catalog cache
#
# Layout (little-endian): magic "VKCAT1", u8 class tag, u8 n, u64 game
# count, then per game a u16 coalition count followed by that many u32
# coalition masks (shift-minimal winning for cg/wg, inclusion-minimal
# winning for sg4).
# ---------------------------------------------------------------------------

_MAGIC = b"VKCAT1"
_CLASS_TAGS = {"cg": 0, "wg": 1, "sg4": 2}
_TAG_CLASSES = {v: k for k, v in _CLASS_TAGS.items()}
_HEADER = struct.Struct("<6sBBQ")


class CatalogFormatError(ValueError):
    pass


class CatalogWriter:
    """Incremental writer so huge catalogs never sit in memory.

    The game count is patched into the header on close.
    """

    def __init__(self, path, klass: str, n: int):
        self.path = path
        self.klass = klass
        self.n = n
        self.count = 0
        self._fh = open(path, "wb")
        self._fh.write(_HEADER.pack(_MAGIC, _CLASS_TAGS[klass], n, 0))

    def add(self, masks: Sequence[int]) -> None:
        self._fh.write(struct.pack(f"<H{len(masks)}I", len(masks), *masks))
        self.count += 1

    def add_many(self, families: Sequence[Sequence[int]]) -> None:
        for masks in families:
            self.add(masks)

    def close(self) -> int:
        self._fh.seek(8)
        self._fh.write(struct.pack("<Q", self.count))
        self._fh.close()
        return self.count


def write_catalog(path, catalog: GameCatalog) -> None:
    w = CatalogWriter(path, catalog.klass, catalog.n)
    if catalog.klass == "sg4":
        from .games import _minimal_winning

        w.add_many([_minimal_winning(g) for g in catalog.games])
    else:
        w.add_many([g.shift_minimal for g in catalog.games])
    w.close()


def _read_header(fh, path):
    raw = fh.read(_HEADER.size)
    if len(raw) != _HEADER.size:
        raise CatalogFormatError(f"{path}: truncated header")
    magic, tag, n, count = _HEADER.unpack(raw)
    if magic != _MAGIC:
        raise CatalogFormatError(f"{path}: bad magic {magic!r}")
    if tag not in _TAG_CLASSES:
        raise CatalogFormatError(f"{path}: unknown class tag {tag}")
    if not 1 <= n <= MAX_ENUMERATION_VOTERS:
        raise CatalogFormatError(f"{path}: unsupported voter count {n}")
    return _TAG_CLASSES[tag], n, count


def iter_catalog_masks(path, chunk_size: int = DEFAULT_CHUNK):
    """Header plus streamed mask families from a catalog file.

    Returns ((klass, n, count), iterator over lists of mask tuples).
    """
    fh = open(path, "rb")
    try:
        klass, n, count = _read_header(fh, path)
    except Exception:
        fh.close()
        raise

    def chunks():
        try:
            remaining = count
            while remaining:
                block = []
                for _ in range(min(chunk_size, remaining)):
                    raw = fh.read(2)
                    if len(raw) != 2:
                        raise CatalogFormatError(f"{path}: truncated game record")
                    (k,) = struct.unpack("<H", raw)
                    body = fh.read(4 * k)
                    if len(body) != 4 * k:
                        raise CatalogFormatError(f"{path}: truncated game record")
                    block.append(struct.unpack(f"<{k}I", body))
                remaining -= len(block)
                yield block
        finally:
            fh.close()

    return (klass, n, count), chunks()


def read_catalog(path) -> GameCatalog:
    """Load a cached catalog (n <= 7), re-checking the certified count."""
    (klass, n, count), chunks = iter_catalog_masks(path)
    if n > MAX_CATALOG_VOTERS:
        for _ in chunks:
            pass
        raise CatalogFormatError(f"{path}: n = {n} catalogs must be streamed")
    families: list[tuple[int, ...]] = []
    for block in chunks:
        families.extend(block)
    if len(families) != count:
        raise CatalogFormatError(f"{path}: header promises {count} games, found {len(families)}")
    check_certified_count(klass, n, count)
    if klass == "sg4":
        from .games import _explicit_from_minimal_winning

        games = [_explicit_from_minimal_winning(n, masks) for masks in families]
        tables = np.array([g.np_table for g in games])
        cat = GameCatalog(klass, n, games, tables)
        return cat
    games = [CompleteGame(n, masks, validate=False) for masks in families]
    tables = np.empty((count, 1 << n), dtype=np.uint8)
    for i, g in enumerate(games):
        tables[i] = _unpack_table(g)
    cat = GameCatalog(klass, n, games, tables)
    if klass == "wg":
        cat.weighted_flags = np.ones(count, dtype=bool)
    return cat


def _unpack_table(g: CompleteGame) -> np.ndarray:
    size = 1 << g.n
    raw = g.winning_bitset().to_bytes(max(1, size // 8), "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]


def weighted_certificate(g: CompleteGame) -> WeightedGame | None:
    """[q; w] witness for a lone complete game, None when there is none."""
    tables = _unpack_table(g)[None, :]
    sml = shift_maximal_losing_families(tables, g.n)[0]
    r = sorted_complete_representation(g.n, g.shift_minimal, sml)
    return None if r is None else WeightedGame(r[0], r[1])
