from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epigame.errors import ParseError, ValidationError
from epigame.games import (
    CorrelatedBelief,
    IndependentBelief,
    MixedStrategy,
    PointBelief,
    Restriction,
    expected_payoff,
    game_from_payoffs,
    opponents_product,
    parse_game,
    parse_restriction,
    render_game,
    render_restriction,
    validate_belief_support,
)

from conftest import FLAT_GAME_TEXT, TIE_GAME_TEXT


def test_parse_tie_game(tie_game):
    assert tie_game.n == 2
    assert tie_game.strategies == (("U", "D"), ("L", "R"))
    assert tie_game.payoff(0, ("U", "L")) == 1
    assert tie_game.payoff(0, ("U", "R")) == 0
    assert tie_game.payoff(1, ("D", "L")) == 0
    assert tie_game.payoff(1, ("D", "R")) == 1


def test_parse_flat_game(flat_game):
    assert flat_game.n == 2
    assert flat_game.payoff(0, ("D", "R")) == 0
    assert all(flat_game.payoff(1, j) == 0 for j in flat_game.joint_strategies)


def test_single_player_rejected():
    source = "players: 1\nstrategies 1: a b\npayoff 1: a = 0\npayoff 1: b = 0\n"
    with pytest.raises(ValidationError):
        parse_game(source)


def test_parse_exact_decimals_and_fractions():
    source = """
    players: 2
    strategies 1: a b
    strategies 2: x
    payoff 1: a x = 0.5
    payoff 1: b x = 2/3
    payoff 2: a x = -1.25
    payoff 2: b x = 7
    """
    game = parse_game(source)
    assert game.payoff(0, ("a", "x")) == Fraction(1, 2)
    assert game.payoff(0, ("b", "x")) == Fraction(2, 3)
    assert game.payoff(1, ("a", "x")) == Fraction(-5, 4)


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_game("players: 2\nstrategies 1 U D\n")
    assert err.value.line == 2

    with pytest.raises(ParseError) as err:
        parse_game("players: 2\nstrategies 1: U D\nstrategies 2: L\npayoff 1: U L\n")
    assert err.value.line == 4

    with pytest.raises(ParseError) as err:
        parse_game("players: 2\nstrategies 1: U\nstrategies 2: L\npayoff 1: U L = x\n")
    assert err.value.line == 4


@pytest.mark.parametrize(
    "source",
    [
        "players: 2\nstrategies 1: U U\nstrategies 2: L\n",        # duplicate label
        "players: 2\nstrategies 1: U\nstrategies 2: L\n",          # missing payoffs
        "players: 2\nstrategies 2: L R\n",                         # missing player 1
        "players: 2\nstrategies 1: U\nstrategies 2: L\n"
        "payoff 1: U L = 1\npayoff 1: U L = 2\n",                  # duplicate payoff
    ],
)
def test_validation_errors(source):
    with pytest.raises(ValidationError):
        parse_game(source)


def test_round_trip_named_games(tie_game, flat_game, prisoners_dilemma, mix_game):
    for game in (tie_game, flat_game, prisoners_dilemma, mix_game):
        assert parse_game(render_game(game)) == game


def test_round_trip_keeps_exact_rationals():
    game = game_from_payoffs(
        [("a", "b"), ("x",)],
        [
            {("a", "x"): Fraction(22, 7), ("b", "x"): Fraction(-1, 3)},
            {("a", "x"): 0, ("b", "x"): Fraction(1, 1000000007)},
        ],
    )
    assert parse_game(render_game(game)) == game


def test_opponents_product_two_player(tie_game):
    full = tie_game.full_restriction()
    assert opponents_product(full, 0) == (("L",), ("R",))
    assert opponents_product(full, 1) == (("U",), ("D",))


def test_opponents_product_three_player():
    game = game_from_payoffs(
        [("s",), ("a", "b"), ("x",)],
        [
            {("s", "a", "x"): 0, ("s", "b", "x"): 0},
            {("s", "a", "x"): 0, ("s", "b", "x"): 0},
            {("s", "a", "x"): 0, ("s", "b", "x"): 0},
        ],
    )
    r = Restriction(game, (("s",), ("a", "b"), ("x",)))
    assert opponents_product(r, 0) == (("a", "x"), ("b", "x"))
    assert opponents_product(r, 1) == (("s", "x"),)


def test_opponents_product_empty_factor(tie_game):
    r = Restriction(tie_game, (("U",), ()))
    assert opponents_product(r, 0) == ()
    # the non-empty side still sees the U component
    assert opponents_product(r, 1) == (("U",),)


def test_restriction_canonical_order_and_validation(tie_game):
    r = Restriction(tie_game, (("D", "U"), ("R",)))
    assert r.components == (("U", "D"), ("R",))
    with pytest.raises(ValidationError):
        Restriction(tie_game, (("U", "Z"), ("L",)))


def test_restriction_lattice_structure(tie_game):
    full = tie_game.full_restriction()
    a = Restriction(tie_game, (("U",), ("L", "R")))
    b = Restriction(tie_game, (("U", "D"), ("R",)))
    assert a.meet(b) == Restriction(tie_game, (("U",), ("R",)))
    assert a.join(b) == full
    assert a.meet(b).is_subset_of(a) and a.is_subset_of(a.join(b))
    assert a.is_subset_of(full) and b.is_subset_of(full)


@st.composite
def subset_pairs(draw):
    u1 = draw(st.sets(st.sampled_from(["U", "D"])))
    u2 = draw(st.sets(st.sampled_from(["L", "R"])))
    v1 = draw(st.sets(st.sampled_from(["U", "D"])))
    v2 = draw(st.sets(st.sampled_from(["L", "R"])))
    return (u1, u2), (v1, v2)


@given(subset_pairs())
@settings(max_examples=200, deadline=None)
def test_lattice_laws(pair):
    game = parse_game(TIE_GAME_TEXT)
    (u1, u2), (v1, v2) = pair
    g = Restriction(game, (tuple(u1), tuple(u2)))
    h = Restriction(game, (tuple(v1), tuple(v2)))
    meet, join = g.meet(h), g.join(h)
    assert meet.is_subset_of(g) and meet.is_subset_of(h)
    assert g.is_subset_of(join) and h.is_subset_of(join)
    assert g.is_subset_of(game.full_restriction())
    assert g.meet(g) == g and g.join(g) == g


def test_point_belief_matches_table(tie_game, flat_game, prisoners_dilemma):
    for game in (tie_game, flat_game, prisoners_dilemma):
        for i in range(game.n):
            for joint in game.joint_strategies:
                minus = joint[:i] + joint[i + 1:]
                assert expected_payoff(game, i, joint[i], PointBelief(minus)) == game.payoff(i, joint)


def test_expected_payoff_tie_game_point(tie_game):
    assert expected_payoff(tie_game, 0, "U", PointBelief(("L",))) == 1


def test_expected_payoff_mixed_correlated():
    game = game_from_payoffs(
        [("T", "B"), ("L", "R")],
        [
            {("T", "L"): 3, ("T", "R"): 0, ("B", "L"): 0, ("B", "R"): 3},
            {("T", "L"): 0, ("T", "R"): 0, ("B", "L"): 0, ("B", "R"): 0},
        ],
    )
    half = Fraction(1, 2)
    own = MixedStrategy.from_mapping(0, {"T": half, "B": half})
    belief = CorrelatedBelief(((("L",), half), (("R",), half)))
    assert expected_payoff(game, 0, own, belief) == Fraction(3, 2)


def test_expected_payoff_independent_three_player():
    game = game_from_payoffs(
        [("a", "b"), ("x", "y"), ("p", "q")],
        [
            {j: (1 if j == ("a", "x", "p") else 0)
             for j in (("a", "x", "p"), ("a", "x", "q"), ("a", "y", "p"), ("a", "y", "q"),
                       ("b", "x", "p"), ("b", "x", "q"), ("b", "y", "p"), ("b", "y", "q"))},
            {j: 0 for j in (("a", "x", "p"), ("a", "x", "q"), ("a", "y", "p"), ("a", "y", "q"),
                            ("b", "x", "p"), ("b", "x", "q"), ("b", "y", "p"), ("b", "y", "q"))},
            {j: 0 for j in (("a", "x", "p"), ("a", "x", "q"), ("a", "y", "p"), ("a", "y", "q"),
                            ("b", "x", "p"), ("b", "x", "q"), ("b", "y", "p"), ("b", "y", "q"))},
        ],
    )
    belief = IndependentBelief(
        (
            MixedStrategy.from_mapping(1, {"x": Fraction(1, 3), "y": Fraction(2, 3)}),
            MixedStrategy.from_mapping(2, {"p": Fraction(1, 4), "q": Fraction(3, 4)}),
        )
    )
    assert expected_payoff(game, 0, "a", belief) == Fraction(1, 12)


@given(
    st.fractions(min_value=0, max_value=1, max_denominator=20),
    st.fractions(min_value=0, max_value=1, max_denominator=20),
)
@settings(max_examples=100, deadline=None)
def test_expected_payoff_linear_in_belief_weights(p, q):
    game = parse_game(TIE_GAME_TEXT)
    base = CorrelatedBelief(((("L",), p), (("R",), 1 - p)))
    other = CorrelatedBelief(((("L",), q), (("R",), 1 - q)))
    lam = Fraction(1, 3)
    mixed_weights = (
        (("L",), lam * p + (1 - lam) * q),
        (("R",), lam * (1 - p) + (1 - lam) * (1 - q)),
    )
    combined = CorrelatedBelief(mixed_weights)
    for s in ("U", "D"):
        assert expected_payoff(game, 0, s, combined) == lam * expected_payoff(
            game, 0, s, base
        ) + (1 - lam) * expected_payoff(game, 0, s, other)


@given(st.fractions(min_value=0, max_value=1, max_denominator=20))
@settings(max_examples=60, deadline=None)
def test_expected_payoff_linear_in_own_mix(alpha):
    game = parse_game(FLAT_GAME_TEXT)
    belief = CorrelatedBelief(((("L",), Fraction(1, 5)), (("R",), Fraction(4, 5))))
    mix = MixedStrategy.from_mapping(0, {"U": alpha, "D": 1 - alpha})
    assert expected_payoff(game, 0, mix, belief) == alpha * expected_payoff(
        game, 0, "U", belief
    ) + (1 - alpha) * expected_payoff(game, 0, "D", belief)


def test_mixed_strategy_validation():
    with pytest.raises(ValidationError):
        MixedStrategy.from_mapping(0, {"a": Fraction(1, 2)})
    with pytest.raises(ValidationError):
        MixedStrategy.from_mapping(0, {"a": Fraction(3, 2), "b": Fraction(-1, 2)})
    pure = MixedStrategy.pure(0, "a")
    assert pure.weight("a") == 1 and pure.support == ("a",)


def test_correlated_belief_validation():
    with pytest.raises(ValidationError):
        CorrelatedBelief(((("L",), Fraction(1, 2)),))
    belief = CorrelatedBelief(((("L",), 1), (("R",), 0)))
    validate_belief_support(belief, [("L",)])
    with pytest.raises(ValidationError):
        validate_belief_support(CorrelatedBelief(((("R",), 1),)), [("L",)])


def test_restriction_rendering_keeps_empty_components(tie_game):
    r = Restriction(tie_game, (("D",), ()))
    text = render_restriction(r)
    assert text == "restrict 1: D\nrestrict 2:\n"
    with pytest.raises(ValidationError):
        parse_restriction("restrict 1: D\n", tie_game)
    assert parse_restriction(text, tie_game) == r


def test_game_equality_and_hash(tie_game):
    clone = parse_game(TIE_GAME_TEXT)
    assert clone == tie_game and hash(clone) == hash(tie_game)
    assert clone != parse_game(FLAT_GAME_TEXT)
