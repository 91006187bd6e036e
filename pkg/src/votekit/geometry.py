"""Exact geometry over power vectors.

Power vectors live on the rational simplex; distances are Manhattan (L1)
or Chebyshev (L-infinity).  Nearest-neighbor search uses a k-d tree over
integer keys: Shapley-Shubik vectors are integer numerators over n!, so
their keys are exact; Banzhaf vectors are keyed by 2**20-scaled floors,
and every bound carries a slack of one key unit per inexact side so the
tree can only over-visit, never wrongly prune.  Final comparisons are
exact integer cross-multiplications; ties go to the lexicographically
smallest vector, so results are deterministic.
"""

from __future__ import annotations

import enum
import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .indices import PowerVector, decimal_str

__all__ = [
    "Metric",
    "distance",
    "VectorStore",
    "NearestResult",
    "build_store",
    "store_from_rows",
    "count_distinct",
    "omega",
    "GapTracker",
    "GapReport",
    "write_vectors",
    "VectorWriter",
    "read_vectors",
    "iter_vector_chunks",
    "VectorFormatError",
]

PBI_KEY_SCALE = 1 << 20
_LEAF_SIZE = 32


class Metric(enum.Enum):
    L1 = "l1"
    LINF = "linf"

    @classmethod
    def parse(cls, text: str) -> "Metric":
        t = text.strip().lower()
        for m in cls:
            if t == m.value:
                return m
        raise ValueError(f"unknown metric {text!r}; expected l1 or linf")


def _as_fractions(x) -> tuple[Fraction, ...]:
    if isinstance(x, PowerVector):
        return x.fractions()
    return tuple(Fraction(v) for v in x)


def distance(x, y, metric: Metric) -> Fraction:
    """Exact distance between two power vectors (or plain rational
    sequences).  PowerVectors of different index kinds do not live in the
    same space and are rejected."""
    if isinstance(x, PowerVector) and isinstance(y, PowerVector) and x.kind != y.kind:
        raise ValueError(f"cannot compare a {x.kind} vector with a {y.kind} vector")
    fx, fy = _as_fractions(x), _as_fractions(y)
    if len(fx) != len(fy):
        raise ValueError(f"dimension mismatch: {len(fx)} vs {len(fy)}")
    diffs = [abs(a - b) for a, b in zip(fx, fy)]
    return sum(diffs, Fraction(0)) if metric is Metric.L1 else max(diffs)


def _reduced_rows(nums: np.ndarray, dens) -> tuple[np.ndarray, np.ndarray]:
    """Rows (numerators, denominator) in lowest terms, as one int matrix."""
    count, n = nums.shape
    if np.isscalar(dens) or getattr(dens, "ndim", 1) == 0:
        dcol = np.full(count, int(dens), dtype=np.int64)
    else:
        dcol = dens.astype(np.int64)
    rows = np.concatenate([nums.astype(np.int64), dcol[:, None]], axis=1)
    g = np.gcd.reduce(rows, axis=1)
    return rows // g[:, None], dcol


class _KDNode:
    __slots__ = ("lo", "hi", "left", "right", "idx")

    def __init__(self, lo, hi, left=None, right=None, idx=None):
        self.lo = lo
        self.hi = hi
        self.left = left
        self.right = right
        self.idx = idx


class _Abort(Exception):
    pass


class NearestResult:
    __slots__ = ("index", "dist", "aborted")

    def __init__(self, index: int | None, dist: Fraction | None, aborted: bool):
        self.index = index
        self.dist = dist
        self.aborted = aborted


class VectorStore:
    """Deduplicated power vectors of one kind, searchable exactly.

    rows are reduced (numerators..., denominator) per vector; reps maps
    each stored vector back to the first catalog index attaining it.
    """

    def __init__(self, kind: str, n: int, rows: np.ndarray, reps: np.ndarray):
        self.kind = kind
        self.n = n
        self.rows = rows
        self.reps = reps
        if kind == "ssi":
            # Reduced denominators all divide n!, so numerators rescale to
            # exact keys on the n! grid.
            self.scale = math.factorial(n)
            self.keys = rows[:, :n] * (self.scale // rows[:, n : n + 1])
            self.point_slack = 0
        else:
            self.scale = PBI_KEY_SCALE
            self.keys = (rows[:, :n] * self.scale) // rows[:, n : n + 1]
            self.point_slack = 1
        self._root = self._build(np.arange(len(rows), dtype=np.int64)) if len(rows) else None
        self._hash: dict[tuple, int] | None = None

    def __len__(self) -> int:
        return len(self.rows)

    def vector(self, i: int) -> PowerVector:
        r = self.rows[i]
        return PowerVector(self.kind, [int(x) for x in r[: self.n]], int(r[self.n]))

    # -- construction -----------------------------------------------------

    def _build(self, idx: np.ndarray) -> _KDNode:
        pts = self.keys[idx]
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        # Bounds as plain tuples: the search touches them in tight loops.
        if len(idx) <= _LEAF_SIZE or np.array_equal(lo, hi):
            return _KDNode(tuple(int(x) for x in lo), tuple(int(x) for x in hi), idx=idx)
        axis = int(np.argmax(hi - lo))
        order = np.argsort(pts[:, axis], kind="stable")
        half = len(idx) // 2
        return _KDNode(
            tuple(int(x) for x in lo),
            tuple(int(x) for x in hi),
            left=self._build(idx[order[:half]]),
            right=self._build(idx[order[half:]]),
        )

    # -- membership --------------------------------------------------------

    def index_of(self, nums: Sequence[int], den: int) -> int | None:
        """Store index of this exact vector, or None."""
        if self._hash is None:
            self._hash = {tuple(int(x) for x in row): i for i, row in enumerate(self.rows)}
        g = math.gcd(int(den), *(int(x) for x in nums))
        key = tuple(int(x) // g for x in nums) + (int(den) // g,)
        return self._hash.get(key)

    # -- search ------------------------------------------------------------

    def nearest(
        self,
        nums: Sequence[int],
        den: int,
        metric: Metric,
        stop_below: Fraction | None = None,
    ) -> NearestResult:
        """Closest stored vector to nums/den, by exact comparison.

        Ties resolve to the lexicographically smallest vector.  When
        stop_below is given, the search may abandon a query as soon as the
        running best drops strictly below it; the result is then flagged
        and its distance is only an upper bound.
        """
        if self._root is None:
            raise ValueError("empty store")
        n = self.n
        qnums = [int(x) for x in nums]
        qden = int(den)
        qkeys = np.array([x * self.scale // qden for x in qnums], dtype=np.int64)
        exact_query = all(x * self.scale % qden == 0 for x in qnums)
        sigma = self.point_slack + (0 if exact_query else 1)
        slack = sigma * (n if metric is Metric.L1 else 1)
        exact_grid = sigma == 0
        scale = self.scale

        best_idx = -1
        best_num = 0
        best_den = 1
        stop_num = stop_below.numerator if stop_below is not None else None
        stop_den = stop_below.denominator if stop_below is not None else 1

        def exact_dist(i: int) -> tuple[int, int]:
            row = self.rows[i]
            pden = int(row[n])
            if metric is Metric.L1:
                acc = 0
                for a in range(n):
                    acc += abs(int(row[a]) * qden - qnums[a] * pden)
                return acc, pden * qden
            worst = 0
            for a in range(n):
                worst = max(worst, abs(int(row[a]) * qden - qnums[a] * pden))
            return worst, pden * qden

        def lex_less(i: int, j: int) -> bool:
            ri, rj = self.rows[i], self.rows[j]
            di, dj = int(ri[n]), int(rj[n])
            for a in range(n):
                lhs = int(ri[a]) * dj
                rhs = int(rj[a]) * di
                if lhs != rhs:
                    return lhs < rhs
            return False

        def consider(i: int, dnum: int, dden: int):
            nonlocal best_idx, best_num, best_den
            if best_idx >= 0:
                cmp = dnum * best_den - best_num * dden
                if cmp > 0:
                    return
                if cmp == 0:
                    if lex_less(i, best_idx):
                        best_idx = i
                    return
            best_idx, best_num, best_den = i, dnum, dden
            if stop_num is not None and best_num * stop_den < stop_num * best_den:
                raise _Abort

        qk = [int(x) for x in qkeys]
        l1 = metric is Metric.L1

        def box_gap(node: _KDNode) -> int:
            lo, hi = node.lo, node.hi
            acc = 0
            for a in range(n):
                q = qk[a]
                if q < lo[a]:
                    g = lo[a] - q
                elif q > hi[a]:
                    g = q - hi[a]
                else:
                    continue
                if l1:
                    acc += g
                elif g > acc:
                    acc = g
            return acc

        def prunable(gap: int) -> bool:
            if best_idx < 0:
                return False
            return (gap - slack) * best_den > best_num * scale

        def visit(node: _KDNode):
            if node.idx is not None:
                pts = self.keys[node.idx]
                d = np.abs(pts - qkeys)
                kd = d.sum(axis=1) if metric is Metric.L1 else d.max(axis=1)
                for pos in np.argsort(kd, kind="stable"):
                    k = int(kd[pos])
                    if prunable(k):
                        break
                    i = int(node.idx[pos])
                    if exact_grid:
                        consider(i, k, scale)
                    else:
                        consider(i, *exact_dist(i))
                return
            children = [node.left, node.right]
            gaps = [box_gap(c) for c in children]
            if gaps[1] < gaps[0]:
                children.reverse()
                gaps.reverse()
            for c, gap in zip(children, gaps):
                if not prunable(gap):
                    visit(c)

        try:
            visit(self._root)
        except _Abort:
            return NearestResult(best_idx, Fraction(best_num, best_den), True)
        return NearestResult(best_idx, Fraction(best_num, best_den), False)


def store_from_rows(kind: str, n: int, nums: np.ndarray, dens) -> VectorStore:
    """Dedup per-game vector rows into a searchable store; reps point back
    at the first row attaining each vector."""
    rows, _ = _reduced_rows(nums, dens)
    uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
    reps = np.full(len(uniq), len(rows), dtype=np.int64)
    np.minimum.at(reps, inverse, np.arange(len(rows), dtype=np.int64))
    return VectorStore(kind, n, uniq, reps)


def build_store(catalog, kind: str) -> VectorStore:
    """Dedup a catalog's power vectors into a searchable store."""
    nums, dens = catalog.power_data(kind)
    return store_from_rows(kind, catalog.n, nums, dens)


def count_distinct(catalog, kind: str) -> int:
    """Number of distinct power vectors attained over the catalog."""
    nums, dens = catalog.power_data(kind)
    rows, _ = _reduced_rows(nums, dens)
    return len(np.unique(rows, axis=0))


@dataclass
class GapReport:
    """Worst-case gap between a class of games and the weighted store.

    attaining holds one (catalog index, game, power vector) triple per
    game whose nearest weighted vector sits exactly at the gap.
    """

    n: int
    kind: str
    metric: Metric
    omega: Fraction
    decimal: str
    attaining: list = field(default_factory=list)
    worst_vector: PowerVector | None = None
    nearest_vector: PowerVector | None = None
    nearest_index: int | None = None


class GapTracker:
    """Running maximum of min-distances to a weighted store.

    Feed catalog data in chunks; queries abandon early once they fall
    strictly below the running maximum, which cannot affect the final
    value or the attaining set (ties never abort).
    """

    def __init__(self, wg_store: VectorStore, metric: Metric):
        self.store = wg_store
        self.metric = metric
        self.best = Fraction(0)
        self.attaining: list = []  # (global index, game)
        self.worst_vector: PowerVector | None = None
        self.nearest_index: int | None = None
        self.nearest_vector: PowerVector | None = None

    def update(self, nums: np.ndarray, dens, games: Sequence, offset: int = 0) -> None:
        """games[i] must describe row i; offset shifts reported indices."""
        n = self.store.n
        rows, _ = _reduced_rows(nums, dens)
        uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
        for u in range(len(uniq)):
            qnums = [int(x) for x in uniq[u, :n]]
            qden = int(uniq[u, n])
            res = self.store.nearest(
                qnums, qden, self.metric, stop_below=self.best if self.best > 0 else None
            )
            if res.aborted or res.dist < self.best or res.dist == 0:
                continue
            vec = PowerVector(self.store.kind, qnums, qden)
            members = [
                (offset + int(g), games[int(g)], vec) for g in np.nonzero(inverse == u)[0]
            ]
            if res.dist > self.best:
                self.best = res.dist
                self.attaining = members
                self.worst_vector = vec
                self.nearest_index = int(self.store.reps[res.index])
                self.nearest_vector = self.store.vector(res.index)
            else:
                self.attaining.extend(members)

    def report(self, n: int | None = None) -> GapReport:
        self.attaining.sort(key=lambda pair: pair[0])
        return GapReport(
            n=n if n is not None else self.store.n,
            kind=self.store.kind,
            metric=self.metric,
            omega=self.best,
            decimal=decimal_str(self.best),
            attaining=self.attaining if self.best > 0 else [],
            worst_vector=self.worst_vector,
            nearest_vector=self.nearest_vector,
            nearest_index=self.nearest_index,
        )


def omega(cg_catalog, wg_store: VectorStore, metric: Metric) -> GapReport:
    """Largest distance from any complete game's power vector to the
    nearest weighted one, with every attaining game reported.

    A zero gap (every vector matched exactly) reports an empty attaining
    list.
    """
    tracker = GapTracker(wg_store, metric)
    nums, dens = cg_catalog.power_data(wg_store.kind)
    tracker.update(nums, dens, cg_catalog.games)
    return tracker.report(cg_catalog.n)


# ---------------------------------------------------------------------------
# Binary vector cache
#
# Layout (little-endian): magic "VKVEC1", u8 kind tag (0 = ssi, 1 = pbi),
# u8 n, u64 vector count, then per vector n signed 64-bit numerators and
# one unsigned 64-bit denominator.  Rows are per-game, aligned with the
# catalog they were computed from.
# ---------------------------------------------------------------------------

_VEC_MAGIC = b"VKVEC1"
_VEC_HEADER = struct.Struct("<6sBBQ")
_KIND_TAGS = {"ssi": 0, "pbi": 1}
_TAG_KINDS = {v: k for k, v in _KIND_TAGS.items()}


class VectorFormatError(ValueError):
    pass


def _vec_dtype(n: int):
    return np.dtype([("nums", "<i8", (n,)), ("den", "<u8")])


def write_vectors(path, kind: str, nums: np.ndarray, dens) -> None:
    count, n = nums.shape
    rec = np.empty(count, dtype=_vec_dtype(n))
    rec["nums"] = nums
    if np.isscalar(dens) or getattr(dens, "ndim", 1) == 0:
        rec["den"] = int(dens)
    else:
        rec["den"] = dens
    with open(path, "wb") as fh:
        fh.write(_VEC_HEADER.pack(_VEC_MAGIC, _KIND_TAGS[kind], n, count))
        rec.tofile(fh)


class VectorWriter:
    """Incremental vector-file writer; the count is patched on close so a
    crashed run leaves an obviously truncated file (count > payload)."""

    def __init__(self, path, kind: str, n: int):
        self.path = path
        self.kind = kind
        self.n = n
        self.count = 0
        self._dtype = _vec_dtype(n)
        self._fh = open(path, "wb")
        self._fh.write(_VEC_HEADER.pack(_VEC_MAGIC, _KIND_TAGS[kind], n, 0))

    def add(self, nums: np.ndarray, dens) -> None:
        rows = len(nums)
        if rows == 0:
            return
        rec = np.empty(rows, dtype=self._dtype)
        rec["nums"] = nums
        if np.isscalar(dens) or getattr(dens, "ndim", 1) == 0:
            rec["den"] = int(dens)
        else:
            rec["den"] = dens
        rec.tofile(self._fh)
        self.count += rows

    def close(self) -> None:
        if self._fh is None:
            return
        self._fh.seek(8)
        self._fh.write(struct.pack("<Q", self.count))
        self._fh.close()
        self._fh = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()


def iter_vector_chunks(path, chunk_size: int = 65536):
    """Header plus streamed (nums, dens) blocks from a vector file."""
    fh = open(path, "rb")
    try:
        raw = fh.read(_VEC_HEADER.size)
        if len(raw) != _VEC_HEADER.size:
            raise VectorFormatError(f"{path}: truncated header")
        magic, tag, n, count = _VEC_HEADER.unpack(raw)
        if magic != _VEC_MAGIC:
            raise VectorFormatError(f"{path}: bad magic {magic!r}")
        if tag not in _TAG_KINDS:
            raise VectorFormatError(f"{path}: unknown kind tag {tag}")
    except Exception:
        fh.close()
        raise

    def chunks():
        try:
            dtype = _vec_dtype(n)
            remaining = count
            while remaining:
                take = min(chunk_size, remaining)
                rec = np.fromfile(fh, dtype=dtype, count=take)
                if len(rec) != take:
                    raise VectorFormatError(f"{path}: truncated vector block")
                remaining -= take
                yield rec["nums"], rec["den"].astype(np.int64)
        finally:
            fh.close()

    return (_TAG_KINDS[tag], n, count), chunks()


def read_vectors(path) -> tuple[str, np.ndarray, np.ndarray]:
    (kind, n, count), chunks = iter_vector_chunks(path)
    nums = np.empty((count, n), dtype=np.int64)
    dens = np.empty(count, dtype=np.int64)
    at = 0
    for block_nums, block_dens in chunks:
        k = len(block_dens)
        nums[at : at + k] = block_nums
        dens[at : at + k] = block_dens
        at += k
    return kind, nums, dens
