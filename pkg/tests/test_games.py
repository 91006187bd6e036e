"""Game types, the text grammar, and structural queries."""

from fractions import Fraction

import pytest

from votekit.games import (
    BoolCombo,
    CompleteGame,
    DesirabilityOutcome,
    ExplicitGame,
    GameParseError,
    WeightedGame,
    add_null_voters,
    canonical_table,
    coalition_mask,
    coalition_members,
    desirability,
    evaluate,
    game_to_text,
    is_complete,
    is_weighted,
    parse_game,
    shift_minimal_winning,
    sort_by_desirability,
    to_explicit,
)

from oracles import null_voters_by_table


def test_coalition_mask_round_trip():
    assert coalition_mask([1, 3]) == 0b101
    assert coalition_members(0b101) == (1, 3)
    assert coalition_mask([]) == 0
    assert coalition_members(0) == ()


def test_parse_weighted():
    g = parse_game("[3;3,2,1,1]")
    assert isinstance(g, WeightedGame)
    assert g.quota == 3
    assert g.weights == (3, 2, 1, 1)
    assert g.n == 4


def test_parse_rational_entries():
    g = parse_game("[5/2;1.5,1,0.5]")
    assert g.quota == Fraction(5, 2)
    assert g.weights == (Fraction(3, 2), 1, Fraction(1, 2))


def test_parse_combo_precedence():
    # '&' binds tighter than '|'.
    g = parse_game("[1;1,0,0] | [1;0,1,0] & [1;0,0,1]")
    assert isinstance(g, BoolCombo) and g.op == "or"
    assert isinstance(g.parts[1], BoolCombo) and g.parts[1].op == "and"
    assert evaluate(g, {1}) == 1
    assert evaluate(g, {2}) == 0
    assert evaluate(g, {2, 3}) == 1


def test_parse_literals():
    g = parse_game("n=4; minwin={1,2},{3,4}")
    assert isinstance(g, ExplicitGame)
    assert evaluate(g, {1, 2}) == 1 and evaluate(g, {3, 4}) == 1
    assert evaluate(g, {1, 3}) == 0
    c = parse_game("n=7; shiftminwin={4,5,6,7},{2,4},{1}")
    assert isinstance(c, CompleteGame)
    assert c.n == 7


@pytest.mark.parametrize(
    "text",
    [
        "",
        "[3;3,2,1,1",
        "[0;1,1]",
        "[3;1,1]",
        "[1;1,-1]",
        "[1;1,1] |",
        "n=4; minwin=",
        "n=2; shiftminwin={1,3}",
        "[1;1] | [1;1,1]",
        "[1;1,1] extra",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(GameParseError):
        parse_game(text)


@pytest.mark.parametrize(
    "text",
    [
        "[3;3,2,1,1]",
        "[5/2;1.5,1,0.5]",
        "[2;1,1,0,0] | [2;0,0,1,1]",
        "[1;1,0,0] | [1;0,1,0] & [1;0,0,1]",
        "n=4; minwin={1,2},{3,4}",
        "n=7; shiftminwin={4,5,6,7},{2,4},{1}",
    ],
)
def test_text_round_trip(text):
    """game_to_text inverts parse_game, and outcomes survive the trip."""
    g = parse_game(text)
    h = parse_game(game_to_text(g))
    assert to_explicit(g).table == to_explicit(h).table
    assert game_to_text(h) == game_to_text(g)


def test_evaluate_accepts_masks_and_members():
    g = parse_game("[3;3,2,1,1]")
    assert evaluate(g, 0b0011) == evaluate(g, {1, 2}) == 1
    assert evaluate(g, 0b1100) == evaluate(g, {3, 4}) == 0
    with pytest.raises(ValueError):
        evaluate(g, 1 << 4)


def test_weighted_game_validation():
    with pytest.raises(ValueError):
        WeightedGame(0, [1, 1])
    with pytest.raises(ValueError):
        WeightedGame(3, [1, 1])
    with pytest.raises(ValueError):
        WeightedGame(1, [])
    with pytest.raises(ValueError):
        WeightedGame(1, [1, -1])


def test_explicit_game_validation():
    with pytest.raises(ValueError):
        ExplicitGame(2, bytes([1, 0, 0, 1]))  # empty coalition wins
    with pytest.raises(ValueError):
        ExplicitGame(3, bytes([0, 1, 0, 0, 0, 0, 0, 1]))  # {1} wins, {1,2} loses
    with pytest.raises(ValueError):
        ExplicitGame(2, bytes([0, 0, 0, 0]))  # full coalition loses


def test_desirability_outcomes():
    g = parse_game("[3;2,1,1]")
    assert desirability(g, 1, 2) is DesirabilityOutcome.GEQ
    assert desirability(g, 2, 3) is DesirabilityOutcome.EQUAL
    assert desirability(g, 2, 1) is DesirabilityOutcome.LEQ
    h = parse_game("n=4; minwin={1,2},{3,4}")
    assert desirability(h, 1, 3) is DesirabilityOutcome.INCOMPARABLE


def test_is_complete_and_sorting():
    ok, order = is_complete(parse_game("[3;1,2,3]"))
    assert ok
    sorted_g, perm = sort_by_desirability(parse_game("[3;1,2,3]"))
    assert evaluate(sorted_g, {1}) == 1  # strongest voter first
    not_complete, _ = is_complete(parse_game("n=4; minwin={1,2},{3,4}"))
    assert not not_complete


def test_shift_minimal_winning():
    # {1,2} shifts down to the winning {1,3}, so only {1,3} is shift-minimal.
    c = shift_minimal_winning(parse_game("[3;2,1,1]"))
    assert c.shift_minimal == (coalition_mask([1, 3]),)
    back = to_explicit(c)
    assert back.table == to_explicit(parse_game("[3;2,1,1]")).table


def test_add_null_voters_preserves_outcomes():
    g = parse_game("[3;3,2,1,1]")
    h = add_null_voters(g, 2)
    assert h.n == 6
    for s in range(1 << 4):
        assert evaluate(h, s) == evaluate(g, s)
        assert evaluate(h, s | 0b110000) == evaluate(g, s)
    assert null_voters_by_table(h) == (4, 5)
    with pytest.raises(ValueError):
        add_null_voters(g, -1)


def test_add_null_voters_keeps_representation():
    assert isinstance(add_null_voters(parse_game("[1;1,1]"), 1), WeightedGame)
    c = parse_game("n=3; shiftminwin={1,2}")
    assert isinstance(add_null_voters(c, 1), CompleteGame)


def test_is_weighted_returns_valid_certificate():
    g = parse_game("n=5; shiftminwin={1,2},{1,3,4}")
    rep = is_weighted(g)
    assert rep is not None
    assert to_explicit(rep).table == to_explicit(g).table


def test_is_weighted_rejects_trade_failure():
    # {1,2} and {3,4} win but the swap {1,3} / {2,4} loses twice, which
    # no single weight vector can explain.
    assert is_weighted(parse_game("n=4; minwin={1,2},{3,4}")) is None


def test_canonical_table_is_relabelling_invariant():
    a = canonical_table(parse_game("[3;3,2,1,1]"))
    b = canonical_table(parse_game("[3;1,2,3,1]"))
    c = canonical_table(parse_game("[3;1,1,2,3]"))
    assert a.table == b.table == c.table
    d = canonical_table(parse_game("[4;1,1,1,1]"))
    assert d.table != a.table
