import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epigame.elimination import NotionProfile
from epigame.epistemic import (
    EpistemicModel,
    PossibilityCorrespondence,
    StateSpace,
    box,
    box_chain,
    common_box,
    is_evident,
    iterated_elimination_model,
    largest_evident_inside,
    parse_model,
    rat_event,
    render_model,
    restriction_of,
    singleton_model,
    standard_model,
    state_label,
    two_block_model,
    validation_report,
)
from epigame.errors import EmptyStateSpace, InvalidModel, ValidationError
from epigame.games import Restriction, game_from_payoffs


def tiny_knowledge_model(game):
    # two states, each its own cell
    space = StateSpace(("a", "b"))
    maps = tuple((game.strategies[i][0], game.strategies[i][-1]) for i in range(game.n))
    corr = PossibilityCorrespondence(space, (frozenset({"a"}), frozenset({"b"})))
    return EpistemicModel(game, space, maps, (corr,) * game.n)


def test_classification_belief_knowledge_invalid(tie_game):
    space = StateSpace(("a", "b"))
    knowledge = PossibilityCorrespondence(space, (frozenset({"a"}), frozenset({"b"})))
    assert knowledge.is_knowledge_class and knowledge.is_belief_class
    belief = PossibilityCorrespondence(space, (frozenset({"b"}), frozenset({"b"})))
    assert belief.is_belief_class and not belief.is_knowledge_class
    non_serial = PossibilityCorrespondence(space, (frozenset(), frozenset({"b"})))
    assert not non_serial.serial and not non_serial.is_belief_class
    incoherent = PossibilityCorrespondence(space, (frozenset({"a", "b"}), frozenset({"b"})))
    assert not incoherent.coherent

    maps = (("U", "D"), ("L", "R"))
    assert EpistemicModel(tie_game, space, maps, (knowledge, knowledge)).model_class == "knowledge"
    assert EpistemicModel(tie_game, space, maps, (knowledge, belief)).model_class == "belief"
    assert EpistemicModel(tie_game, space, maps, (knowledge, incoherent)).model_class == "invalid"
    assert EpistemicModel(tie_game, space, maps).model_class == "invalid"


def test_knowledge_partition_blocks(tie_game):
    model = singleton_model(tie_game)
    for c in model.correspondences:
        blocks = c.partition_blocks()
        assert sorted(len(b) for b in blocks) == [1, 1, 1, 1]
        assert frozenset().union(*blocks) == frozenset(model.space.states)


def test_invalid_model_rejected_by_operations(tie_game):
    space = StateSpace(("a", "b"))
    incoherent = PossibilityCorrespondence(space, (frozenset({"a", "b"}), frozenset({"b"})))
    model = EpistemicModel(tie_game, space, (("U", "D"), ("L", "R")), (incoherent, incoherent))
    with pytest.raises(InvalidModel):
        box(model, {"a"})
    with pytest.raises(InvalidModel):
        common_box(model, {"a"})
    with pytest.raises(InvalidModel):
        rat_event(model, NotionProfile.uniform("sd", 2))


def test_box_basics(tie_game):
    model = tiny_knowledge_model(tie_game)
    omega = frozenset(model.space.states)
    assert box(model, omega) == omega
    assert box(model, frozenset()) == frozenset()
    assert box(model, {"a"}) == frozenset({"a"})


def test_box_respects_all_players(tie_game):
    space = StateSpace(("a", "b"))
    all_states = frozenset({"a", "b"})
    sharp = PossibilityCorrespondence(space, (frozenset({"a"}), frozenset({"b"})))
    blurry = PossibilityCorrespondence(space, (all_states, all_states))
    model = EpistemicModel(tie_game, space, (("U", "D"), ("L", "R")), (sharp, blurry))
    assert model.model_class == "knowledge"
    # player 2 never rules anything out, so only full events are box-closed
    assert box(model, {"a"}) == frozenset()
    assert box(model, {"a", "b"}) == all_states


def test_common_box_on_singleton_model(tie_game):
    model = singleton_model(tie_game)
    states = list(model.space.states)
    rng = random.Random(4)
    for _ in range(20):
        event = frozenset(s for s in states if rng.random() < 0.5)
        assert box(model, event) == event
        assert common_box(model, event) == event
        assert is_evident(model, event)


def test_common_box_truth_axiom_on_knowledge_models(tie_game):
    rng = random.Random(9)
    model = tiny_knowledge_model(tie_game)
    for _ in range(10):
        event = frozenset(s for s in model.space.states if rng.random() < 0.5)
        assert common_box(model, event) <= event


def test_evident_trivial_events(tie_game):
    model = tiny_knowledge_model(tie_game)
    assert is_evident(model, frozenset())
    assert is_evident(model, frozenset(model.space.states))


def test_largest_evident_inside_trivial(tie_game):
    model = tiny_knowledge_model(tie_game)
    omega = frozenset(model.space.states)
    assert largest_evident_inside(model, omega) == omega
    assert largest_evident_inside(model, frozenset()) == frozenset()


def test_box_chain_decreases_on_belief_models(tie_game):
    space = StateSpace(("a", "b", "c"))
    # belief (not knowledge): everything points into the {b, c} cluster
    corr = PossibilityCorrespondence(
        space, (frozenset({"b", "c"}), frozenset({"b", "c"}), frozenset({"b", "c"}))
    )
    model = EpistemicModel(
        tie_game, space, (("U", "D", "U"), ("L", "R", "L")), (corr, corr)
    )
    assert model.model_class == "belief"
    for event in ({"a", "b", "c"}, {"b", "c"}, {"a"}, {"b"}, {"c", "a"}):
        chain = box_chain(model, frozenset(event))
        for earlier, later in zip(chain, chain[1:]):
            assert later <= earlier


def test_restriction_of_projections(tie_game):
    model = standard_model(tie_game.full_restriction())
    omega = frozenset(model.space.states)
    assert restriction_of(model, omega) == tie_game.full_restriction()
    assert restriction_of(model, frozenset()) == Restriction(tie_game, ((), ()))
    assert restriction_of(model, {state_label(("D", "R"))}) == Restriction(
        tie_game, (("D",), ("R",))
    )
    per_player = restriction_of(
        model,
        [frozenset({state_label(("U", "L"))}), frozenset()],
        per_player=True,
    )
    assert per_player == Restriction(tie_game, (("U",), ()))


def test_standard_model_shapes(tie_game, flat_game):
    model = standard_model(tie_game.full_restriction())
    assert len(model.space.states) == 4
    assert model.strategy_of(0, state_label(("D", "R"))) == "D"
    single = standard_model(Restriction(tie_game, (("U",), ("L",))))
    assert len(single.space.states) == 1
    flat = standard_model(flat_game.full_restriction())
    assert flat.strategy_of(0, state_label(("D", "R"))) == "D"
    with pytest.raises(EmptyStateSpace):
        standard_model(Restriction(tie_game, (("U",), ())))


def test_rat_event_singleton_model_weak_dominance(tie_game):
    model = singleton_model(tie_game)
    rat = rat_event(model, NotionProfile.uniform("wd", 2))
    assert rat == frozenset({state_label(("U", "L")), state_label(("D", "R"))})
    assert common_box(model, rat) == rat


def test_rat_event_empty_when_strategy_never_optimal():
    # player 1 always plays 'a', but 'b' strictly dominates it everywhere
    game = game_from_payoffs(
        [("a", "b"), ("x", "y")],
        [
            {("a", "x"): 0, ("a", "y"): 0, ("b", "x"): 1, ("b", "y"): 1},
            {("a", "x"): 0, ("a", "y"): 0, ("b", "x"): 0, ("b", "y"): 0},
        ],
    )
    space = StateSpace(("w1", "w2"))
    corr = PossibilityCorrespondence(space, (frozenset({"w1"}), frozenset({"w2"})))
    model = EpistemicModel(game, space, (("a", "a"), ("x", "y")), (corr, corr))
    assert rat_event(model, NotionProfile.uniform("sd", 2)) == frozenset()
    assert rat_event(model, NotionProfile.uniform("brp", 2)) == frozenset()


def test_two_block_model_knowledge_class_even_when_degenerate(tie_game):
    # proper two-block split
    model = two_block_model(tie_game, Restriction(tie_game, (("D",), ("R",))))
    assert model.model_class == "knowledge"
    inside = frozenset({state_label(("D", "R"))})
    assert is_evident(model, inside)
    # empty restriction and full restriction collapse to the constant space
    for restriction in (Restriction(tie_game, ((), ())), tie_game.full_restriction()):
        degenerate = two_block_model(tie_game, restriction)
        assert degenerate.model_class == "knowledge"
        assert all(
            c.of(s) == frozenset(degenerate.space.states)
            for c in degenerate.correspondences
            for s in degenerate.space.states
        )


def test_iterated_elimination_model_flat_game(flat_game):
    model, trace = iterated_elimination_model(flat_game, NotionProfile.uniform("brp", 2))
    assert trace.outcome == flat_game.full_restriction()
    assert model.model_class == "knowledge"
    rat = rat_event(model, NotionProfile.uniform("brp", 2))
    assert rat == frozenset(model.space.states)
    assert restriction_of(model, common_box(model, rat)) == flat_game.full_restriction()


def test_iterated_elimination_model_tie_game_strict(tie_game):
    model, trace = iterated_elimination_model(tie_game, NotionProfile.uniform("sd", 2))
    assert trace.outcome == tie_game.full_restriction()
    evident = frozenset(model.space.states)
    assert is_evident(model, evident)
    assert rat_event(model, NotionProfile.uniform("sd", 2)) == evident


def test_singleton_model_supports_rationality_of_chosen_state(tie_game):
    model = singleton_model(tie_game)
    rat = rat_event(model, NotionProfile.uniform("wd", 2))
    kstar = common_box(model, rat)
    assert state_label(("U", "L")) in kstar


def test_characterizations_on_random_models(tie_game):
    # belief models: common box == largest evident event inside box(E)
    # knowledge models: common box == largest evident event inside E
    from epigame.generators import GeneratorConfig, generate_model

    for seed in range(60):
        for target in ("belief", "knowledge"):
            config = GeneratorConfig(seed=seed, states=(2, 6), target_class=target)
            model = generate_model(config, tie_game)
            rng = random.Random(seed)
            states = list(model.space.states)
            for _ in range(8):
                event = frozenset(s for s in states if rng.random() < 0.5)
                stable = common_box(model, event)
                assert stable == largest_evident_inside(model, box(model, event))
                if target == "knowledge":
                    assert stable == largest_evident_inside(model, event)


def test_model_round_trip(tie_game):
    model = singleton_model(tie_game)
    parsed = parse_model(render_model(model), tie_game)
    assert parsed == model
    report = validation_report(parsed)
    assert "model class: knowledge" in report
    assert "serial=yes" in report


def test_parse_model_errors(tie_game):
    with pytest.raises(ValidationError):
        parse_model("states: a b\nmap 1: a -> U\n", tie_game)  # incomplete maps
    from epigame.errors import ParseError

    with pytest.raises(ParseError):
        parse_model("map 1: a -> U\n", tie_game)
    with pytest.raises(ParseError):
        parse_model("states: a a\n", tie_game)
    with pytest.raises(ParseError):
        parse_model("states: a\nmap 1: b -> U\n", tie_game)


_STATES = ("w0", "w1", "w2", "w3")


@st.composite
def belief_model_and_events(draw):
    size = draw(st.integers(min_value=2, max_value=4))
    states = _STATES[:size]
    seed = draw(st.integers(min_value=0, max_value=10**6))
    e = frozenset(draw(st.sets(st.sampled_from(states))))
    f = frozenset(draw(st.sets(st.sampled_from(states))))
    return size, seed, e, f


@given(belief_model_and_events())
@settings(max_examples=150, deadline=None)
def test_box_is_monotone_on_events(params):
    from epigame.generators import GeneratorConfig, generate_model
    from epigame.games import parse_game

    from conftest import TIE_GAME_TEXT

    size, seed, e, f = params
    game = parse_game(TIE_GAME_TEXT)
    config = GeneratorConfig(seed=seed, states=(size, size), target_class="belief")
    model = generate_model(config, game)
    smaller = e & f
    assert box(model, smaller) <= box(model, e)
    assert box(model, e | f) >= box(model, e)


@given(belief_model_and_events())
@settings(max_examples=150, deadline=None)
def test_union_of_evident_events_is_evident(params):
    from epigame.generators import GeneratorConfig, generate_model
    from epigame.games import parse_game

    from conftest import TIE_GAME_TEXT

    size, seed, e, f = params
    game = parse_game(TIE_GAME_TEXT)
    config = GeneratorConfig(seed=seed, states=(size, size), target_class="knowledge")
    model = generate_model(config, game)
    ev_e = largest_evident_inside(model, e)
    ev_f = largest_evident_inside(model, f)
    assert is_evident(model, ev_e) and is_evident(model, ev_f)
    assert is_evident(model, ev_e | ev_f)


def test_validation_report_flags_invalid(tie_game):
    space = StateSpace(("a", "b"))
    incoherent = PossibilityCorrespondence(space, (frozenset({"a", "b"}), frozenset({"b"})))
    model = EpistemicModel(
        tie_game, space, (("U", "D"), ("L", "R")), (incoherent, incoherent)
    )
    report = validation_report(model)
    assert "coherent=no" in report
    assert "model class: invalid" in report
