"""Game representations for binary voting rules.

A simple game on voters 1..n is a monotone surjective map from coalitions
to {0, 1}.  Coalitions are bitmasks throughout: voter i occupies bit i-1,
so the coalition {1, 3} is 0b101 = 5.  Four representations are supported:

* ExplicitGame: the full outcome table over all 2**n coalitions.
* WeightedGame: a quota plus per-voter weights, all exact rationals.
* CompleteGame: the shift-minimal winning coalitions of a game whose
  voter ordering 1, 2, ..., n runs from strongest to weakest.
* BoolCombo: and/or combinations of weighted games on a shared voter set.

All arithmetic is exact (integers and fractions.Fraction); floats never
enter a decision.  numpy is used for table plumbing only.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .exactlp import solve_nonneg_geq

__all__ = [
    "Coalition",
    "DesirabilityOutcome",
    "ExplicitGame",
    "WeightedGame",
    "CompleteGame",
    "BoolCombo",
    "Game",
    "GameParseError",
    "coalition_mask",
    "coalition_members",
    "parse_game",
    "game_to_text",
    "evaluate",
    "to_explicit",
    "desirability",
    "is_complete",
    "sort_by_desirability",
    "shift_minimal_winning",
    "shift_maximal_losing",
    "is_weighted",
    "add_null_voters",
    "canonical_table",
]

Coalition = int

MAX_EXPLICIT_VOTERS = 24


def coalition_mask(members: Iterable[int]) -> Coalition:
    """Bitmask of a coalition given 1-based voter numbers."""
    m = 0
    for i in members:
        if i < 1:
            raise ValueError("voter numbers are 1-based")
        m |= 1 << (i - 1)
    return m


def coalition_members(mask: Coalition) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


# ---------------------------------------------------------------------------
# The shift order on coalitions.
#
# S <= T when T is reachable from S by adding members or by swapping a
# member for a stronger (smaller-index) voter.  Winning sets of a game
# sorted by decreasing desirability are exactly the up-sets of this order.
# One-step neighbours suffice to generate it: every relation decomposes
# into single removals/additions and single swaps with the nearest free
# voter on the relevant side.
# ---------------------------------------------------------------------------


# Per-mask neighbour tables are built for a whole coalition lattice at once,
# so they are reserved for sizes where 2**n stays small; beyond that the
# prefix-count test below is used directly.
MAX_SHIFT_TABLE_VOTERS = 14


def dominates(a: Coalition, b: Coalition, n: int) -> bool:
    """True when coalition a is at least as strong as b in the shift order.

    Equivalent prefix-count test: a must have at least as many members as b
    among the strongest j voters, for every j.
    """
    ca = cb = 0
    for j in range(n):
        bit = 1 << j
        if a & bit:
            ca += 1
        if b & bit:
            cb += 1
        if ca < cb:
            return False
    return True


@lru_cache(maxsize=None)
def _linear_extension(n: int) -> tuple[int, ...]:
    # Weak coalitions first: sort by (size, descending index sum).  Any
    # strict shift-order relation strictly increases this key.
    def key(m: int) -> tuple[int, int]:
        s = 0
        mm = m
        i = 1
        while mm:
            if mm & 1:
                s += i
            mm >>= 1
            i += 1
        return (m.bit_count(), -s)

    return tuple(sorted(range(1 << n), key=key))


def _lower_neighbors_of(m: Coalition, n: int) -> list[Coalition]:
    """One-step weakenings of a coalition: drop a member, or push a member
    to the nearest weaker free slot."""
    nb = []
    for b in range(n):
        if not (m >> b) & 1:
            continue
        nb.append(m & ~(1 << b))
        for c in range(b + 1, n):
            if not (m >> c) & 1:
                nb.append((m & ~(1 << b)) | (1 << c))
                break
    return nb


@lru_cache(maxsize=None)
def _lower_neighbors(n: int) -> tuple[tuple[int, ...], ...]:
    if n > MAX_SHIFT_TABLE_VOTERS:
        raise ValueError(f"shift tables support at most {MAX_SHIFT_TABLE_VOTERS} voters")
    return tuple(tuple(_lower_neighbors_of(m, n)) for m in range(1 << n))


def _upper_neighbors_of(m: Coalition, n: int) -> list[Coalition]:
    """One-step strengthenings: add a member, or pull a member to the
    nearest stronger free slot."""
    nb = []
    for b in range(n):
        if (m >> b) & 1:
            for c in range(b - 1, -1, -1):
                if not (m >> c) & 1:
                    nb.append((m & ~(1 << b)) | (1 << c))
                    break
        else:
            nb.append(m | (1 << b))
    return nb


@lru_cache(maxsize=None)
def _upper_neighbors(n: int) -> tuple[tuple[int, ...], ...]:
    if n > MAX_SHIFT_TABLE_VOTERS:
        raise ValueError(f"shift tables support at most {MAX_SHIFT_TABLE_VOTERS} voters")
    return tuple(tuple(_upper_neighbors_of(m, n)) for m in range(1 << n))


@lru_cache(maxsize=None)
def _dominator_bitsets(n: int) -> tuple[int, ...]:
    """For each mask m, a 2**n-bit integer whose bit S is set when S
    dominates m."""
    uppers = _upper_neighbors(n)
    dom = [0] * (1 << n)
    for m in reversed(_linear_extension(n)):
        d = 1 << m
        for u in uppers[m]:
            d |= dom[u]
        dom[m] = d
    return tuple(dom)


def _bitset_to_table(bits: int, n: int) -> np.ndarray:
    size = 1 << n
    raw = bits.to_bytes(max(1, size // 8), "little")
    table = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    return table[:size].copy()


class DesirabilityOutcome(enum.Enum):
    GEQ = "geq"
    LEQ = "leq"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


class GameParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------


class ExplicitGame:
    """A simple game stored as its full outcome table.

    The table has 2**n entries of 0/1, indexed by coalition bitmask.
    Construction enforces v(empty) = 0, v(full) = 1 and monotonicity
    under inclusion.
    """

    __slots__ = ("n", "table", "_hash")

    def __init__(self, n: int, table, validate: bool = True):
        if n < 1 or n > MAX_EXPLICIT_VOTERS:
            raise ValueError(f"explicit tables support 1..{MAX_EXPLICIT_VOTERS} voters, got {n}")
        data = bytes(table)
        if len(data) != 1 << n:
            raise ValueError(f"table for {n} voters must have {1 << n} entries, got {len(data)}")
        self.n = n
        self.table = data
        self._hash = None
        if validate:
            self._validate()

    def _validate(self):
        t = self.np_table
        if t.max() > 1:
            raise ValueError("table entries must be 0 or 1")
        if t[0] != 0:
            raise ValueError("not a simple game: the empty coalition wins")
        if t[-1] != 1:
            raise ValueError("not a simple game: the full coalition loses")
        idx = np.arange(1 << self.n, dtype=np.int64)
        for b in range(self.n):
            without = idx[(idx >> b) & 1 == 0]
            if np.any(t[without] > t[without | (1 << b)]):
                raise ValueError("table is not monotone")

    @property
    def np_table(self) -> np.ndarray:
        return np.frombuffer(self.table, dtype=np.uint8)

    def value(self, mask: Coalition) -> int:
        return self.table[mask]

    def __eq__(self, other):
        return isinstance(other, ExplicitGame) and self.n == other.n and self.table == other.table

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.table))
        return self._hash

    def __repr__(self):
        return f"ExplicitGame(n={self.n}, winning={int(self.np_table.sum())})"


class WeightedGame:
    """A weighted game [quota; w_1, ..., w_n] with exact rational entries.

    A coalition wins when its weight sum reaches the quota.  The quota must
    be positive (so the empty coalition loses) and must not exceed the total
    weight (so the full coalition wins).
    """

    __slots__ = ("quota", "weights", "_scaled")

    def __init__(self, quota, weights):
        q = Fraction(quota)
        w = tuple(Fraction(x) for x in weights)
        if not w:
            raise ValueError("a weighted game needs at least one voter")
        if q <= 0:
            raise ValueError("quota must be positive")
        if any(x < 0 for x in w):
            raise ValueError("weights must be nonnegative")
        if sum(w) < q:
            raise ValueError("quota exceeds the total weight: the full coalition would lose")
        self.quota = q
        self.weights = w
        self._scaled = None

    @property
    def n(self) -> int:
        return len(self.weights)

    def scaled_ints(self) -> tuple[int, tuple[int, ...]]:
        """Integer threshold t and weights W with: S wins iff W(S) >= t."""
        if self._scaled is None:
            den = math.lcm(self.quota.denominator, *(w.denominator for w in self.weights))
            wints = tuple(int(w * den) for w in self.weights)
            self._scaled = (math.ceil(self.quota * den), wints)
        return self._scaled

    def value(self, mask: Coalition) -> int:
        t, w = self.scaled_ints()
        s = 0
        b = 0
        while mask:
            if mask & 1:
                s += w[b]
            mask >>= 1
            b += 1
        return 1 if s >= t else 0

    def __eq__(self, other):
        return (
            isinstance(other, WeightedGame)
            and self.quota == other.quota
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.quota, self.weights))

    def __repr__(self):
        return f"WeightedGame({game_to_text(self)!r})"


class CompleteGame:
    """A game given by its shift-minimal winning coalitions.

    Voters are listed from strongest to weakest, so every coalition that
    dominates a listed one in the shift order wins.  The listed family must
    be exactly the shift-minimal winning family of the induced game, which
    also forces it to be an antichain.
    """

    __slots__ = ("n", "shift_minimal", "_bits")

    def __init__(self, n: int, coalitions: Iterable[Coalition], validate: bool = True):
        masks = tuple(sorted(set(int(m) for m in coalitions)))
        if n < 1:
            raise ValueError("need at least one voter")
        if not masks:
            raise ValueError("at least one winning coalition is required")
        if masks[0] == 0:
            raise ValueError("the empty coalition cannot be winning")
        if masks[-1] >= 1 << n:
            raise ValueError(f"coalition {masks[-1]:b} does not fit {n} voters")
        self.n = n
        self.shift_minimal = masks
        self._bits = None
        if validate:
            self._validate()

    def _validate(self):
        # Each listed coalition must stay shift-minimal in the induced game:
        # none of its one-step weakenings may dominate any listed coalition.
        for m in self.shift_minimal:
            for f in _lower_neighbors_of(m, self.n):
                if any(dominates(f, m2, self.n) for m2 in self.shift_minimal):
                    raise ValueError(
                        f"coalition {set(coalition_members(m))} is not shift-minimal"
                    )

    def winning_bitset(self) -> int:
        if self.n > MAX_SHIFT_TABLE_VOTERS:
            raise ValueError("winning bitsets are limited to small voter counts")
        if self._bits is None:
            dom = _dominator_bitsets(self.n)
            b = 0
            for m in self.shift_minimal:
                b |= dom[m]
            self._bits = b
        return self._bits

    def value(self, mask: Coalition) -> int:
        if self.n <= MAX_SHIFT_TABLE_VOTERS:
            return (self.winning_bitset() >> mask) & 1
        return 1 if any(dominates(mask, m, self.n) for m in self.shift_minimal) else 0

    def __eq__(self, other):
        return (
            isinstance(other, CompleteGame)
            and self.n == other.n
            and self.shift_minimal == other.shift_minimal
        )

    def __hash__(self):
        return hash((self.n, self.shift_minimal))

    def __repr__(self):
        return f"CompleteGame({game_to_text(self)!r})"


class BoolCombo:
    """An and/or combination of weighted games over one voter set.

    "and" wins when every part wins (pointwise minimum), "or" when any part
    does (pointwise maximum).  The empty coalition always loses because each
    leaf has a positive quota; the full coalition is checked eagerly so a
    combination that can never win is rejected at construction.
    """

    __slots__ = ("op", "parts")

    def __init__(self, op: str, parts: Sequence[Union["BoolCombo", WeightedGame]]):
        if op not in ("and", "or"):
            raise ValueError("op must be 'and' or 'or'")
        parts = tuple(parts)
        if len(parts) < 2:
            raise ValueError("a combination needs at least two parts")
        ns = {p.n for p in parts}
        if len(ns) != 1:
            raise ValueError(f"dimension mismatch: parts have voter counts {sorted(ns)}")
        self.op = op
        self.parts = parts
        full = (1 << self.n) - 1
        if not self.value(full):
            raise ValueError("not a simple game: the full coalition loses this combination")

    @property
    def n(self) -> int:
        return self.parts[0].n

    def value(self, mask: Coalition) -> int:
        if self.op == "and":
            return 1 if all(p.value(mask) for p in self.parts) else 0
        return 1 if any(p.value(mask) for p in self.parts) else 0

    def leaves(self) -> list[WeightedGame]:
        out = []
        for p in self.parts:
            if isinstance(p, WeightedGame):
                out.append(p)
            else:
                out.extend(p.leaves())
        return out

    def __eq__(self, other):
        return isinstance(other, BoolCombo) and self.op == other.op and self.parts == other.parts

    def __hash__(self):
        return hash((self.op, self.parts))

    def __repr__(self):
        return f"BoolCombo({game_to_text(self)!r})"


Game = Union[ExplicitGame, WeightedGame, CompleteGame, BoolCombo]


# ---------------------------------------------------------------------------
# Parsing and rendering
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise GameParseError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str):
        self.skip_ws()
        if not self.text.startswith(ch, self.pos):
            self.error(f"expected {ch!r}")
        self.pos += len(ch)

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected an integer")
        return int(self.text[start : self.pos])

    def rational(self) -> Fraction:
        # integer, integer/integer, or a decimal such as 0.65 (read exactly)
        num = self.integer()
        if self.pos < len(self.text) and self.text[self.pos] == "/":
            self.pos += 1
            den = self.integer()
            if den == 0:
                self.error("zero denominator")
            return Fraction(num, den)
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == start:
                self.error("expected digits after the decimal point")
            frac = self.text[start : self.pos]
            return Fraction(num) + Fraction(int(frac), 10 ** len(frac))
        return Fraction(num)

    def weighted(self) -> WeightedGame:
        self.take("[")
        quota = self.rational()
        self.take(";")
        weights = [self.rational()]
        while self.peek() == ",":
            self.take(",")
            weights.append(self.rational())
        self.take("]")
        try:
            return WeightedGame(quota, weights)
        except ValueError as exc:
            self.error(str(exc))

    def factor(self):
        if self.peek() == "(":
            self.take("(")
            g = self.expr()
            self.take(")")
            return g
        if self.peek() == "[":
            return self.weighted()
        self.error("expected '[' or '('")

    def combine(self, op: str, parts: list) -> Game:
        if len(parts) == 1:
            return parts[0]
        try:
            return BoolCombo(op, parts)
        except ValueError as exc:
            self.error(str(exc))

    def term(self):
        parts = [self.factor()]
        while self.peek() == "&":
            self.take("&")
            parts.append(self.factor())
        return self.combine("and", parts)

    def expr(self):
        parts = [self.term()]
        while self.peek() == "|":
            self.take("|")
            parts.append(self.term())
        return self.combine("or", parts)

    def coalition_set(self) -> Coalition:
        self.take("{")
        members = [self.integer()]
        while self.peek() == ",":
            self.take(",")
            members.append(self.integer())
        self.take("}")
        return coalition_mask(members)

    def literal(self) -> Game:
        self.take("n")
        self.take("=")
        n = self.integer()
        self.take(";")
        self.skip_ws()
        for kw in ("shiftminwin", "minwin"):
            if self.text.startswith(kw, self.pos):
                self.pos += len(kw)
                break
        else:
            self.error("expected 'minwin' or 'shiftminwin'")
        self.take("=")
        masks = [self.coalition_set()]
        while self.peek() == ",":
            self.take(",")
            masks.append(self.coalition_set())
        if max(masks) >= 1 << n:
            self.error(f"coalition exceeds the declared {n} voters")
        try:
            if kw == "shiftminwin":
                return CompleteGame(n, masks)
            return _explicit_from_minimal_winning(n, masks)
        except ValueError as exc:
            self.error(str(exc))


def _explicit_from_minimal_winning(n: int, masks: Sequence[Coalition]) -> ExplicitGame:
    if 0 in masks:
        raise ValueError("the empty coalition cannot be winning")
    idx = np.arange(1 << n, dtype=np.int64)
    table = np.zeros(1 << n, dtype=np.uint8)
    for m in masks:
        table |= (idx & m) == m
    return ExplicitGame(n, table.tobytes(), validate=False)


def parse_game(text: str) -> Game:
    """Parse the game grammar.

    Accepts weighted games like "[3;3,2,1,1]", and/or combinations with '&'
    binding tighter than '|', parentheses, and the explicit literals
    "n=4; minwin={1,2},{3,4}" and "n=7; shiftminwin={1},{2,4}".  Rationals
    may be written as fractions or decimals; both are read exactly.
    """
    p = _Parser(text)
    p.skip_ws()
    if p.text.startswith("n", p.pos):
        g = p.literal()
    else:
        g = p.expr()
    p.skip_ws()
    if p.pos != len(p.text):
        p.error("unexpected trailing input")
    return g


def _fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _set_str(mask: Coalition) -> str:
    return "{" + ",".join(str(i) for i in coalition_members(mask)) + "}"


def game_to_text(g: Game) -> str:
    """Render a game in the text grammar; parse_game inverts this exactly."""
    if isinstance(g, WeightedGame):
        ws = ",".join(_fraction_str(w) for w in g.weights)
        return f"[{_fraction_str(g.quota)};{ws}]"
    if isinstance(g, CompleteGame):
        sets = ",".join(_set_str(m) for m in g.shift_minimal)
        return f"n={g.n}; shiftminwin={sets}"
    if isinstance(g, ExplicitGame):
        sets = ",".join(_set_str(m) for m in _minimal_winning(g))
        return f"n={g.n}; minwin={sets}"
    if isinstance(g, BoolCombo):
        if g.op == "or":
            return " | ".join(game_to_text(p) for p in g.parts)
        rendered = []
        for p in g.parts:
            s = game_to_text(p)
            if isinstance(p, BoolCombo) and p.op == "or":
                s = f"({s})"
            rendered.append(s)
        return " & ".join(rendered)
    raise TypeError(f"not a game: {g!r}")


# ---------------------------------------------------------------------------
# Conversions and structural queries
# ---------------------------------------------------------------------------


def evaluate(g: Game, coalition) -> int:
    """Outcome of the game on a coalition (bitmask or 1-based members)."""
    mask = coalition if isinstance(coalition, int) else coalition_mask(coalition)
    if mask < 0 or mask >= 1 << g.n:
        raise ValueError(f"coalition {mask} does not fit {g.n} voters")
    return g.value(mask)


def _weighted_table(g: WeightedGame) -> np.ndarray:
    t, wints = g.scaled_ints()
    if sum(wints) < (1 << 62):
        sums = np.zeros(1, dtype=np.int64)
        for w in wints:
            sums = np.concatenate([sums, sums + w])
        return (sums >= t).astype(np.uint8)
    sums = [0]
    for w in wints:
        sums += [s + w for s in sums]
    return np.array([1 if s >= t else 0 for s in sums], dtype=np.uint8)


def to_explicit(g: Game) -> ExplicitGame:
    """Materialize the full outcome table (supported through n = 24)."""
    if isinstance(g, ExplicitGame):
        return g
    if g.n > MAX_EXPLICIT_VOTERS:
        raise ValueError(f"explicit tables support at most {MAX_EXPLICIT_VOTERS} voters")
    if isinstance(g, WeightedGame):
        return ExplicitGame(g.n, _weighted_table(g).tobytes(), validate=False)
    if isinstance(g, CompleteGame):
        if g.n <= MAX_SHIFT_TABLE_VOTERS:
            table = _bitset_to_table(g.winning_bitset(), g.n)
        else:
            # Prefix-count domination, checked only where the requirement
            # steps up (at members of m); counts are non-decreasing between.
            idx = np.arange(1 << g.n, dtype=np.int64)
            win = np.zeros(1 << g.n, dtype=bool)
            for m in g.shift_minimal:
                ok = np.ones(1 << g.n, dtype=bool)
                run = np.zeros(1 << g.n, dtype=np.int32)
                c = 0
                for j in range(g.n):
                    run += ((idx >> j) & 1).astype(np.int32)
                    if (m >> j) & 1:
                        c += 1
                        ok &= run >= c
                win |= ok
            table = win.astype(np.uint8)
        return ExplicitGame(g.n, table.tobytes(), validate=False)
    if isinstance(g, BoolCombo):
        tables = []
        for p in g.parts:
            tables.append(to_explicit(p).np_table)
        acc = tables[0]
        for t in tables[1:]:
            acc = np.minimum(acc, t) if g.op == "and" else np.maximum(acc, t)
        return ExplicitGame(g.n, acc.tobytes(), validate=False)
    raise TypeError(f"not a game: {g!r}")


def _minimal_winning(g: ExplicitGame) -> list[Coalition]:
    """Inclusion-minimal winning coalitions."""
    t = g.np_table
    idx = np.arange(1 << g.n, dtype=np.int64)
    minimal = t.astype(bool).copy()
    for b in range(g.n):
        has = idx[(idx >> b) & 1 == 1]
        minimal[has] &= t[has & ~(1 << b)] == 0
    return [int(m) for m in np.nonzero(minimal)[0]]


def _maximal_losing(g: ExplicitGame) -> list[Coalition]:
    """Inclusion-maximal losing coalitions."""
    t = g.np_table
    idx = np.arange(1 << g.n, dtype=np.int64)
    maximal = ~t.astype(bool)
    for b in range(g.n):
        without = idx[(idx >> b) & 1 == 0]
        maximal[without] &= t[without | (1 << b)] == 1
    return [int(m) for m in np.nonzero(maximal)[0]]


def desirability(g: Game, i: int, j: int) -> DesirabilityOutcome:
    """Compare the influence of voters i and j.

    i is at least as desirable as j when swapping j for i never turns a win
    into a loss, over every coalition containing neither.
    """
    if i == j:
        return DesirabilityOutcome.EQUAL
    e = to_explicit(g)
    t = e.np_table
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    idx = np.arange(1 << e.n, dtype=np.int64)
    base = idx[(idx & (bi | bj)) == 0]
    with_i = t[base | bi]
    with_j = t[base | bj]
    geq = bool(np.all(with_i >= with_j))
    leq = bool(np.all(with_j >= with_i))
    if geq and leq:
        return DesirabilityOutcome.EQUAL
    if geq:
        return DesirabilityOutcome.GEQ
    if leq:
        return DesirabilityOutcome.LEQ
    return DesirabilityOutcome.INCOMPARABLE


def _permute_table(table: np.ndarray, n: int, perm: Sequence[int]) -> np.ndarray:
    """Table of the relabelled game where new voter k is old voter perm[k-1]."""
    idx = np.arange(1 << n, dtype=np.int64)
    src = np.zeros(1 << n, dtype=np.int64)
    for k, old in enumerate(perm):
        src |= ((idx >> k) & 1) << (old - 1)
    return table[src]


def is_complete(g: Game) -> tuple[bool, tuple[int, ...] | None]:
    """Whether the desirability relation is total.

    On success also returns the reordering as a tuple p where new position
    k (1-based) is taken by old voter p[k-1]; voters are sorted strongest
    first with ties broken by original index.
    """
    e = to_explicit(g)
    n = e.n
    outcomes: dict[tuple[int, int], DesirabilityOutcome] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            o = desirability(e, i, j)
            if o is DesirabilityOutcome.INCOMPARABLE:
                return False, None
            outcomes[(i, j)] = o

    def stronger(i: int, j: int) -> bool:
        if i < j:
            return outcomes[(i, j)] is DesirabilityOutcome.GEQ
        return outcomes[(j, i)] is DesirabilityOutcome.LEQ

    order = sorted(range(1, n + 1), key=lambda v: (sum(1 for u in range(1, n + 1) if u != v and stronger(u, v)), v))
    return True, tuple(order)


def sort_by_desirability(g: Game) -> tuple[ExplicitGame, tuple[int, ...]]:
    """Relabel voters strongest-first; fails on games that are not complete."""
    ok, perm = is_complete(g)
    if not ok:
        raise ValueError("the desirability relation is not total; the game cannot be sorted")
    e = to_explicit(g)
    return ExplicitGame(e.n, _permute_table(e.np_table, e.n, perm).tobytes(), validate=False), perm


def shift_minimal_winning(g: Game) -> CompleteGame:
    """Shift-minimal winning coalitions of a sorted complete game.

    The input must already be labelled strongest-first (as produced by
    sort_by_desirability); a winning coalition is kept when every one-step
    weakening loses.
    """
    e = to_explicit(g)
    t = e.np_table
    lowers = _lower_neighbors(e.n)
    masks = []
    for m in range(1 << e.n):
        if not t[m]:
            continue
        if all(not t[f] for f in lowers[m]):
            masks.append(m)
    cg = CompleteGame(e.n, masks, validate=False)
    if cg.winning_bitset() != int.from_bytes(
        np.packbits(t, bitorder="little").tobytes(), "little"
    ):
        raise ValueError("game is not shift-closed; sort voters by desirability first")
    return cg


def shift_maximal_losing(g: Game) -> tuple[Coalition, ...]:
    """Losing coalitions of a sorted complete game whose every one-step
    strengthening wins."""
    e = to_explicit(g)
    t = e.np_table
    uppers = _upper_neighbors(e.n)
    return tuple(
        m for m in range(1 << e.n) if not t[m] and all(t[u] for u in uppers[m])
    )


def add_null_voters(g: Game, k: int) -> Game:
    """Append k voters with no influence, preserving the representation."""
    if k < 0:
        raise ValueError("cannot remove voters")
    if k == 0:
        return g
    if isinstance(g, WeightedGame):
        return WeightedGame(g.quota, g.weights + (Fraction(0),) * k)
    if isinstance(g, CompleteGame):
        return CompleteGame(g.n + k, g.shift_minimal, validate=False)
    if isinstance(g, BoolCombo):
        return BoolCombo(g.op, tuple(add_null_voters(p, k) for p in g.parts))
    if isinstance(g, ExplicitGame):
        return ExplicitGame(g.n + k, np.tile(g.np_table, 1 << k).tobytes(), validate=False)
    raise TypeError(f"not a game: {g!r}")


# ---------------------------------------------------------------------------
# Weightedness
# ---------------------------------------------------------------------------


def _integerize(values: Sequence[Fraction]) -> list[int]:
    den = math.lcm(*(v.denominator for v in values))
    return [int(v * den) for v in values]


def is_weighted(g: Game) -> WeightedGame | None:
    """Weighted representation of the game, or None when none exists.

    Decided by exact rational feasibility: find nonnegative weights and a
    quota with every inclusion-minimal winning coalition at or above the
    quota and every inclusion-maximal losing coalition at least one unit
    below (an integer gap keeps the strict side exact).  The returned
    certificate uses integer weights with the quota tightened to the
    minimum winning weight.
    """
    e = to_explicit(g)
    n = e.n
    win = _minimal_winning(e)
    lose = _maximal_losing(e)
    # Variables: w_1..w_n, q.
    rows = []
    for s in win:
        coeffs = [1 if (s >> b) & 1 else 0 for b in range(n)] + [-1]
        rows.append((coeffs, 0))
    for t in lose:
        coeffs = [-1 if (t >> b) & 1 else 0 for b in range(n)] + [1]
        rows.append((coeffs, 1))
    sol = solve_nonneg_geq(n + 1, rows)
    if sol is None:
        return None
    ints = _integerize(sol)
    weights = ints[:n]
    quota = min(sum(w for b, w in enumerate(weights) if (s >> b) & 1) for s in win)
    g_all = math.gcd(quota, *weights)
    return WeightedGame(Fraction(quota // g_all), [Fraction(w // g_all) for w in weights])


def sorted_complete_representation(
    n: int, shift_min_win: Sequence[Coalition], shift_max_lose: Sequence[Coalition]
) -> tuple[int, tuple[int, ...]] | None:
    """Integer (quota, weights) for a sorted complete game, or None.

    Works in weight-difference space so the sortedness of the weights is a
    sign condition, which lets the system carry only the shift-minimal
    winning and shift-maximal losing constraints.
    """

    def prefix_counts(mask: Coalition) -> list[int]:
        out = []
        c = 0
        for j in range(n):
            if (mask >> j) & 1:
                c += 1
            out.append(c)
        return out

    rows = []
    for s in shift_min_win:
        rows.append((prefix_counts(s) + [-1], 0))
    for t in shift_max_lose:
        rows.append(([-c for c in prefix_counts(t)] + [1], 1))
    sol = solve_nonneg_geq(n + 1, rows)
    if sol is None:
        return None
    ints = _integerize(sol)
    diffs = ints[:n]
    weights = [sum(diffs[i:]) for i in range(n)]
    quota = min(sum(w for b, w in enumerate(weights) if (s >> b) & 1) for s in shift_min_win)
    g_all = math.gcd(quota, *weights)
    return quota // g_all, tuple(w // g_all for w in weights)


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------

MAX_ORBIT_VOTERS = 7


@lru_cache(maxsize=None)
def _perm_source_masks(n: int) -> np.ndarray:
    """For every permutation of n voters, the table gather indices."""
    from itertools import permutations

    idx = np.arange(1 << n, dtype=np.int64)
    rows = []
    for perm in permutations(range(1, n + 1)):
        src = np.zeros(1 << n, dtype=np.int64)
        for k, old in enumerate(perm):
            src |= ((idx >> k) & 1) << (old - 1)
        rows.append(src)
    return np.array(rows)


def canonical_table(g: Game) -> ExplicitGame:
    """A labelling-independent explicit form.

    Complete games are sorted strongest-first, which is already unique.
    Other games take the lexicographically smallest table over all voter
    relabellings, practical only for n <= 7.
    """
    ok, perm = is_complete(g)
    if ok:
        e = to_explicit(g)
        return ExplicitGame(e.n, _permute_table(e.np_table, e.n, perm).tobytes(), validate=False)
    e = to_explicit(g)
    if e.n > MAX_ORBIT_VOTERS:
        raise ValueError(f"canonical form of an incomplete game needs n <= {MAX_ORBIT_VOTERS}")
    tables = e.np_table[_perm_source_masks(e.n)]
    best = min(t.tobytes() for t in tables)
    return ExplicitGame(e.n, best, validate=False)
