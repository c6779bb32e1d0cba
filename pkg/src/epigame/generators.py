"""Seeded random games and epistemic models, plus exhaustive enumerators of
small correspondences for the brute-force verification suites.

Everything is deterministic under the configured seed: re-running with the
same configuration reproduces the same artifacts bit for bit.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .epistemic import EpistemicModel, PossibilityCorrespondence, StateSpace
from .errors import ValidationError
from .games import Game, game_from_payoffs

_LETTERS = "abcdefghij"

DEFAULT_PAYOFF_POOL = (Fraction(0), Fraction(1), Fraction(2))


@dataclass(frozen=True)
class GeneratorConfig:
    """Ranges for the random generators; every range is inclusive."""

    seed: int
    players: tuple[int, int] = (2, 2)
    strategies: tuple[int, int] = (2, 3)
    payoff_pool: tuple[Fraction, ...] = DEFAULT_PAYOFF_POOL
    states: tuple[int, int] = (2, 6)
    target_class: str = "knowledge"

    def __post_init__(self):
        for name, (low, high) in (
            ("players", self.players),
            ("strategies", self.strategies),
            ("states", self.states),
        ):
            if low > high or low < 1:
                raise ValidationError(f"empty {name} range {low}..{high}")
        if self.players[0] < 2:
            raise ValidationError("games need at least 2 players")
        if not self.payoff_pool:
            raise ValidationError("payoff pool must be non-empty")
        if self.target_class not in ("belief", "knowledge"):
            raise ValidationError("target class must be 'belief' or 'knowledge'")
        object.__setattr__(
            self, "payoff_pool", tuple(Fraction(v) for v in self.payoff_pool)
        )


def generate_game(config: GeneratorConfig) -> Game:
    rng = random.Random(config.seed)
    n = rng.randint(*config.players)
    shape = [rng.randint(*config.strategies) for _ in range(n)]
    strategies = [tuple(_LETTERS[:k]) for k in shape]
    joints = list(itertools.product(*strategies))
    payoffs = [
        {joint: rng.choice(config.payoff_pool) for joint in joints}
        for _ in range(n)
    ]
    return game_from_payoffs(strategies, payoffs)


def _random_partition(rng: random.Random, items: list[str]) -> list[list[str]]:
    shuffled = list(items)
    rng.shuffle(shuffled)
    blocks: list[list[str]] = []
    for item in shuffled:
        if blocks and rng.random() < 0.6:
            rng.choice(blocks).append(item)
        else:
            blocks.append([item])
    return blocks


def _knowledge_correspondence(rng: random.Random, space: StateSpace) -> PossibilityCorrespondence:
    blocks = _random_partition(rng, list(space.states))
    of_state = {}
    for block in blocks:
        event = frozenset(block)
        for s in block:
            of_state[s] = event
    return PossibilityCorrespondence(space, tuple(of_state[s] for s in space.states))


def _belief_correspondence(rng: random.Random, space: StateSpace) -> PossibilityCorrespondence:
    # Blocks partition a non-empty subset of the space; block members point
    # to their own block, outsiders point to any block. That construction is
    # exactly seriality plus coherence.
    states = list(space.states)
    inside = [s for s in states if rng.random() < 0.7]
    if not inside:
        inside = [rng.choice(states)]
    blocks = _random_partition(rng, inside)
    events = [frozenset(b) for b in blocks]
    of_state = {}
    for block, event in zip(blocks, events):
        for s in block:
            of_state[s] = event
    for s in states:
        if s not in of_state:
            of_state[s] = rng.choice(events)
    return PossibilityCorrespondence(space, tuple(of_state[s] for s in space.states))


def generate_model(config: GeneratorConfig, game: Game) -> EpistemicModel:
    rng = random.Random(config.seed ^ 0x5EED)
    count = rng.randint(*config.states)
    space = StateSpace(tuple(f"w{k}" for k in range(count)))
    maps = tuple(
        tuple(rng.choice(game.strategies[i]) for _ in range(count))
        for i in range(game.n)
    )
    maker = (
        _knowledge_correspondence
        if config.target_class == "knowledge"
        else _belief_correspondence
    )
    correspondences = tuple(maker(rng, space) for _ in range(game.n))
    return EpistemicModel(game, space, maps, correspondences)


# --- exhaustive enumeration at tiny sizes -------------------------------------

def set_partitions(items: tuple[str, ...]):
    """All partitions of ``items`` into non-empty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        for k in range(len(partition)):
            yield partition[:k] + [partition[k] + [first]] + partition[k + 1:]
        yield partition + [[first]]


def enumerate_knowledge_correspondences(space: StateSpace):
    for partition in set_partitions(space.states):
        of_state = {}
        for block in partition:
            event = frozenset(block)
            for s in block:
                of_state[s] = event
        yield PossibilityCorrespondence(
            space, tuple(of_state[s] for s in space.states)
        )


def enumerate_belief_correspondences(space: StateSpace):
    """All serial + coherent correspondences: a partition of a non-empty
    subset into blocks plus an assignment of the remaining states to blocks."""
    states = space.states
    n = len(states)
    for mask in range(1, 1 << n):
        inside = tuple(s for k, s in enumerate(states) if mask >> k & 1)
        outside = tuple(s for k, s in enumerate(states) if not mask >> k & 1)
        for partition in set_partitions(inside):
            events = [frozenset(b) for b in partition]
            base = {}
            for block, event in zip(partition, events):
                for s in block:
                    base[s] = event
            for assignment in itertools.product(events, repeat=len(outside)):
                of_state = dict(base)
                for s, event in zip(outside, assignment):
                    of_state[s] = event
                yield PossibilityCorrespondence(
                    space, tuple(of_state[s] for s in space.states)
                )
