"""Finite epistemic models over games.

A model joins a state space, per-player strategy maps, and per-player
possibility correspondences. Correspondence properties are computed, never
declared:

  (i)   seriality:    P(w) is non-empty for every state,
  (ii)  coherence:    w' in P(w) implies P(w') = P(w),
  (iii) reflexivity:  w in P(w).

(i)+(ii) makes a belief correspondence, (i)+(ii)+(iii) a knowledge
correspondence (whose possibility sets partition the space). Event algebra
runs on integer bitmasks internally; the public API speaks frozensets of
state labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .elimination import GLOBAL, NotionProfile, operator
from .errors import (
    EmptyStateSpace,
    InvalidModel,
    ParseError,
    ValidationError,
)
from .games import Game, JointStrategy, Restriction, opponents_product
from .lattice import EliminationTrace, iterate_to_outcome
from .optimality import holds

Event = frozenset[str]


@dataclass(frozen=True)
class StateSpace:
    states: tuple[str, ...]

    def __post_init__(self):
        if not self.states:
            raise ValidationError("state space must be non-empty")
        if len(set(self.states)) != len(self.states):
            raise ValidationError("state labels must be distinct")

    @cached_property
    def index(self) -> dict[str, int]:
        return {s: k for k, s in enumerate(self.states)}

    def mask_of(self, event: Iterable[str]) -> int:
        mask = 0
        for s in event:
            try:
                mask |= 1 << self.index[s]
            except KeyError:
                raise ValidationError(f"unknown state {s!r}") from None
        return mask

    def event_of(self, mask: int) -> Event:
        return frozenset(s for k, s in enumerate(self.states) if mask >> k & 1)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.states)) - 1


@dataclass(frozen=True)
class PossibilityCorrespondence:
    """Total map from states to events, stored in state order."""

    space: StateSpace
    targets: tuple[Event, ...]

    def __post_init__(self):
        if len(self.targets) != len(self.space.states):
            raise ValidationError("correspondence must cover every state")
        object.__setattr__(
            self, "targets", tuple(frozenset(t) for t in self.targets)
        )
        known = set(self.space.states)
        for t in self.targets:
            if not t <= known:
                raise ValidationError(f"correspondence targets unknown states {sorted(t - known)}")

    def of(self, state: str) -> Event:
        return self.targets[self.space.index[state]]

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(self.space.mask_of(t) for t in self.targets)

    @cached_property
    def serial(self) -> bool:
        return all(m != 0 for m in self.masks)

    @cached_property
    def coherent(self) -> bool:
        masks = self.masks
        for k, m in enumerate(masks):
            probe = m
            while probe:
                low = probe & -probe
                if masks[low.bit_length() - 1] != m:
                    return False
                probe ^= low
        return True

    @cached_property
    def reflexive(self) -> bool:
        return all(m >> k & 1 for k, m in enumerate(self.masks))

    @property
    def is_belief_class(self) -> bool:
        return self.serial and self.coherent

    @property
    def is_knowledge_class(self) -> bool:
        return self.is_belief_class and self.reflexive

    def partition_blocks(self) -> tuple[Event, ...]:
        """The distinct possibility sets; a partition of the space for
        knowledge-class correspondences."""
        seen: list[Event] = []
        for t in self.targets:
            if t not in seen:
                seen.append(t)
        return tuple(seen)


@dataclass(frozen=True)
class EpistemicModel:
    """States, strategy maps and (optionally attached) correspondences.

    ``strategy_maps[i]`` is aligned with the state order and must take values
    in the game's strategy set for player ``i``; a model over a restriction
    simply has smaller images.
    """

    game: Game
    space: StateSpace
    strategy_maps: tuple[tuple[str, ...], ...]
    correspondences: tuple[PossibilityCorrespondence, ...] | None = None

    def __post_init__(self):
        if len(self.strategy_maps) != self.game.n:
            raise ValidationError("one strategy map per player is required")
        for i, labels in enumerate(self.strategy_maps):
            if len(labels) != len(self.space.states):
                raise ValidationError(f"strategy map for player {i + 1} is not total")
            for s in labels:
                self.game.validate_strategy(i, s)
        if self.correspondences is not None:
            if len(self.correspondences) != self.game.n:
                raise ValidationError("one correspondence per player is required")
            for c in self.correspondences:
                if c.space != self.space:
                    raise ValidationError("correspondence is over a different state space")

    @cached_property
    def model_class(self) -> str:
        if self.correspondences is None:
            return "invalid"
        if all(c.is_knowledge_class for c in self.correspondences):
            return "knowledge"
        if all(c.is_belief_class for c in self.correspondences):
            return "belief"
        return "invalid"

    def strategy_of(self, i: int, state: str) -> str:
        return self.strategy_maps[i][self.space.index[state]]

    def with_correspondences(
        self, correspondences: Sequence[PossibilityCorrespondence]
    ) -> "EpistemicModel":
        return EpistemicModel(
            self.game, self.space, self.strategy_maps, tuple(correspondences)
        )

    def require_valid(self) -> None:
        if self.model_class == "invalid":
            raise InvalidModel(
                "operation needs a belief- or knowledge-class model; "
                "validate the correspondences first"
            )


# --- event operators ---------------------------------------------------------

def _box_mask(model: EpistemicModel, mask: int) -> int:
    result = 0
    nstates = len(model.space.states)
    all_masks = [c.masks for c in model.correspondences]
    for k in range(nstates):
        if all(masks[k] & ~mask == 0 for masks in all_masks):
            result |= 1 << k
    return result


def box(model: EpistemicModel, event: Iterable[str]) -> Event:
    """States where every player's possibility set lies inside the event."""
    model.require_valid()
    return model.space.event_of(_box_mask(model, model.space.mask_of(event)))


def box_chain(model: EpistemicModel, event: Iterable[str]) -> tuple[Event, ...]:
    """The iterated-box chain from an event until it stabilizes."""
    model.require_valid()
    space = model.space
    chain = [_box_mask(model, space.mask_of(event))]
    while True:
        nxt = _box_mask(model, chain[-1])
        if nxt == chain[-1]:
            return tuple(space.event_of(m) for m in chain)
        chain.append(nxt)


def common_box(model: EpistemicModel, event: Iterable[str]) -> Event:
    """The common-belief/common-knowledge event: the stable value of the
    iterated box, reached within |states| steps on a valid model."""
    return box_chain(model, event)[-1]


def is_evident(model: EpistemicModel, event: Iterable[str]) -> bool:
    """An event F is evident when F is included in box(F)."""
    model.require_valid()
    mask = model.space.mask_of(event)
    return mask & ~_box_mask(model, mask) == 0


def largest_evident_inside(model: EpistemicModel, event: Iterable[str]) -> Event:
    """The inclusion-largest evident event inside ``event``, computed as the
    greatest fixpoint of F -> F & box(F) starting from the event itself."""
    model.require_valid()
    mask = model.space.mask_of(event)
    while True:
        nxt = mask & _box_mask(model, mask)
        if nxt == mask:
            return model.space.event_of(mask)
        mask = nxt


def restriction_of(
    model: EpistemicModel,
    events: Iterable[str] | Sequence[Iterable[str]],
    per_player: bool = False,
) -> Restriction:
    """Project events through the strategy maps: component ``i`` is the image
    of player ``i``'s map over the event (the i-th event when ``per_player``).
    Empty events give empty components."""
    if per_player:
        event_list = [frozenset(e) for e in events]
        if len(event_list) != model.game.n:
            raise ValidationError("one event per player is required")
    else:
        event_list = [frozenset(events)] * model.game.n
    index = model.space.index
    components = []
    for i, event in enumerate(event_list):
        labels = model.strategy_maps[i]
        components.append(tuple({labels[index[s]] for s in event}))
    return Restriction(model.game, tuple(components))


def rat_event(model: EpistemicModel, profile: NotionProfile) -> Event:
    """States where every player's chosen strategy is optimal, per that
    player's notion, in the restriction projected from their possibility set."""
    model.require_valid()
    profile.validate_for(model.game)
    game = model.game
    space = model.space
    restriction_cache: dict[int, Restriction] = {}
    result = set()
    for k, state in enumerate(space.states):
        rational = True
        for i in range(game.n):
            mask = model.correspondences[i].masks[k]
            projected = restriction_cache.get(mask)
            if projected is None:
                projected = restriction_of(model, space.event_of(mask))
                restriction_cache[mask] = projected
            opponents = opponents_product(projected, i)
            if not holds(
                profile.notions[i],
                game,
                i,
                model.strategy_maps[i][k],
                game.strategies[i],
                opponents,
            ):
                rational = False
                break
        if rational:
            result.add(state)
    return frozenset(result)


# --- model constructions -----------------------------------------------------

def state_label(joint: JointStrategy) -> str:
    return ".".join(joint)


def standard_model(restriction: Restriction) -> EpistemicModel:
    """States are the joint strategies of the restriction; strategy maps are
    projections. Correspondences are attached separately."""
    if restriction.has_empty_component():
        raise EmptyStateSpace(
            "standard model needs every component non-empty"
        )
    joints = restriction.joint_strategies
    space = StateSpace(tuple(state_label(j) for j in joints))
    maps = tuple(
        tuple(j[i] for j in joints) for i in range(restriction.game.n)
    )
    return EpistemicModel(restriction.game, space, maps)


def two_block_model(game: Game, restriction: Restriction) -> EpistemicModel:
    """Standard model of the full game whose players consider possible
    exactly the restriction's joint strategies (or their complement).

    With F the restriction's joint strategies as an event, every player's
    correspondence maps states of F to F and everything else to its
    complement; the correspondence collapses to the constant full space when
    F is empty or everything. Always knowledge-class.
    """
    model = standard_model(game.full_restriction())
    space = model.space
    inside = frozenset(
        state_label(j) for j in game.full_restriction().joint_strategies
        if restriction.contains_joint(j)
    )
    all_states = frozenset(space.states)
    complement = all_states - inside
    if not inside or not complement:
        targets = tuple(all_states for _ in space.states)
    else:
        targets = tuple(
            inside if s in inside else complement for s in space.states
        )
    correspondence = PossibilityCorrespondence(space, targets)
    return model.with_correspondences([correspondence] * game.n)


def iterated_elimination_model(
    game: Game, profile: NotionProfile
) -> tuple[EpistemicModel, EliminationTrace]:
    """The knowledge model that makes the surviving joint strategies evident:
    run the global elimination to its outcome and build the two-block model
    around the survivors. The trace carries stages only; per-strategy
    elimination reasons come from :func:`epigame.elimination.outcome`."""
    op = operator(profile, game, GLOBAL)
    trace = iterate_to_outcome(op, game.full_restriction())
    return two_block_model(game, trace.outcome), trace


def singleton_model(game: Game) -> EpistemicModel:
    """Standard model of the full game where each state is its own
    possibility set, making every event evident."""
    model = standard_model(game.full_restriction())
    targets = tuple(frozenset({s}) for s in model.space.states)
    correspondence = PossibilityCorrespondence(model.space, targets)
    return model.with_correspondences([correspondence] * game.n)


# --- text format --------------------------------------------------------------

def parse_model(source: str, game: Game) -> EpistemicModel:
    """Parse the model file format: a ``states:`` line, then total
    ``map i: state -> strategy`` and ``poss i: state -> {states}`` lines."""
    from .games import _content_lines, _parse_player_number, _split_directive

    space: StateSpace | None = None
    maps: dict[tuple[int, str], str] = {}
    poss: dict[tuple[int, str], tuple[str, ...]] = {}

    for number, line in _content_lines(source):
        head, rest = _split_directive(number, line)
        if head == "states":
            if space is not None:
                raise ParseError("duplicate states directive", number, 1)
            try:
                space = StateSpace(tuple(rest.split()))
            except ValidationError as exc:
                raise ParseError(str(exc), number, len("states: ") + 1) from None
        elif head.startswith("map") or head.startswith("poss"):
            keyword = "map" if head.startswith("map") else "poss"
            player = _parse_player_number(number, head, keyword, game.n)
            if "->" not in rest:
                raise ParseError(f"{keyword} line needs '->'", number, len(line))
            left, _, right = rest.partition("->")
            state = left.strip()
            if space is None:
                raise ParseError("states directive must come first", number, 1)
            if state not in space.index:
                raise ParseError(f"unknown state {state!r}", number, 1)
            if keyword == "map":
                target = right.strip()
                if (player, state) in maps:
                    raise ValidationError(
                        f"duplicate map for player {player + 1} at state {state}"
                    )
                maps[(player, state)] = target
            else:
                right = right.strip()
                if not (right.startswith("{") and right.endswith("}")):
                    raise ParseError("poss line needs '{state ...}'", number, len(line))
                if (player, state) in poss:
                    raise ValidationError(
                        f"duplicate poss for player {player + 1} at state {state}"
                    )
                poss[(player, state)] = tuple(right[1:-1].split())
        else:
            raise ParseError(f"unknown directive {head.split()[0]!r}", number, 1)

    if space is None:
        raise ParseError("missing states directive", 0, 0)
    missing = [
        (i + 1, s)
        for i in range(game.n)
        for s in space.states
        if (i, s) not in maps
    ]
    if missing:
        raise ValidationError(f"missing map lines, e.g. player {missing[0][0]} state {missing[0][1]}")
    missing = [
        (i + 1, s)
        for i in range(game.n)
        for s in space.states
        if (i, s) not in poss
    ]
    if missing:
        raise ValidationError(
            f"missing poss lines, e.g. player {missing[0][0]} state {missing[0][1]}"
        )

    strategy_maps = tuple(
        tuple(maps[(i, s)] for s in space.states) for i in range(game.n)
    )
    correspondences = tuple(
        PossibilityCorrespondence(
            space, tuple(frozenset(poss[(i, s)]) for s in space.states)
        )
        for i in range(game.n)
    )
    return EpistemicModel(game, space, strategy_maps, correspondences)


def render_model(model: EpistemicModel) -> str:
    lines = ["states: " + " ".join(model.space.states)]
    for i in range(model.game.n):
        for k, state in enumerate(model.space.states):
            lines.append(f"map {i + 1}: {state} -> {model.strategy_maps[i][k]}")
    if model.correspondences is not None:
        for i, c in enumerate(model.correspondences):
            for state in model.space.states:
                inside = " ".join(s for s in model.space.states if s in c.of(state))
                lines.append(f"poss {i + 1}: {state} -> {{{inside}}}")
    return "\n".join(lines) + "\n"


def validation_report(model: EpistemicModel) -> str:
    """Which of properties (i)-(iii) each correspondence satisfies, plus the
    derived model class."""
    lines = []
    if model.correspondences is None:
        lines.append("correspondences: none attached")
    else:
        for i, c in enumerate(model.correspondences):
            parts = [
                f"serial={'yes' if c.serial else 'no'}",
                f"coherent={'yes' if c.coherent else 'no'}",
                f"reflexive={'yes' if c.reflexive else 'no'}",
            ]
            kind = (
                "knowledge"
                if c.is_knowledge_class
                else "belief" if c.is_belief_class else "invalid"
            )
            lines.append(f"correspondence {i + 1}: " + " ".join(parts) + f" class={kind}")
    lines.append(f"model class: {model.model_class}")
    return "\n".join(lines) + "\n"
