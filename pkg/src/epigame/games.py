"""Finite strategic games with exact rational payoffs, restrictions and beliefs.

Every value is immutable; payoffs, probabilities and expectations are
`fractions.Fraction` throughout, so every comparison made anywhere in the
engine is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .errors import ParseError, ValidationError

JointStrategy = tuple[str, ...]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not an exact rational: {value!r}") from exc
    raise ValidationError(f"payoffs must be rationals, got {type(value).__name__}")


@dataclass(frozen=True)
class Game:
    """An n-player strategic game: ordered strategy labels plus total payoff tables.

    ``payoff_tables[i]`` is flat, indexed by the joint strategy in product
    order (last player varies fastest).
    """

    strategies: tuple[tuple[str, ...], ...]
    payoff_tables: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.strategies) < 2:
            raise ValidationError("a game needs at least 2 players")
        for i, labels in enumerate(self.strategies):
            if not labels:
                raise ValidationError(f"player {i + 1} has an empty strategy set")
            if len(set(labels)) != len(labels):
                raise ValidationError(f"player {i + 1} has duplicate strategy labels")
        size = 1
        for labels in self.strategies:
            size *= len(labels)
        if len(self.payoff_tables) != len(self.strategies):
            raise ValidationError("one payoff table per player is required")
        for i, table in enumerate(self.payoff_tables):
            if len(table) != size:
                raise ValidationError(
                    f"payoff table for player {i + 1} has {len(table)} entries, expected {size}"
                )

    @property
    def n(self) -> int:
        return len(self.strategies)

    @cached_property
    def _label_index(self) -> tuple[dict[str, int], ...]:
        return tuple({s: k for k, s in enumerate(labels)} for labels in self.strategies)

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = [1] * self.n
        for i in range(self.n - 2, -1, -1):
            strides[i] = strides[i + 1] * len(self.strategies[i + 1])
        return tuple(strides)

    @cached_property
    def joint_strategies(self) -> tuple[JointStrategy, ...]:
        return tuple(itertools.product(*self.strategies))

    @cached_property
    def _hash(self) -> int:
        return hash((self.strategies, self.payoff_tables))

    def __hash__(self) -> int:
        return self._hash

    def strategy_index(self, i: int, label: str) -> int:
        try:
            return self._label_index[i][label]
        except KeyError:
            raise ValidationError(f"player {i + 1} has no strategy {label!r}") from None

    def payoff(self, i: int, joint: JointStrategy) -> Fraction:
        """Exact payoff of player ``i`` (0-based) at a joint strategy."""
        index = self._label_index
        flat = 0
        for j, stride in enumerate(self._strides):
            flat += index[j][joint[j]] * stride
        return self.payoff_tables[i][flat]

    def full_restriction(self) -> "Restriction":
        return Restriction(self, self.strategies)

    def validate_strategy(self, i: int, label: str) -> None:
        if label not in self._label_index[i]:
            raise ValidationError(f"player {i + 1} has no strategy {label!r}")


def game_from_payoffs(
    strategies: Sequence[Sequence[str]],
    payoffs: Mapping[int, Mapping[JointStrategy, object]] | Sequence[Mapping[JointStrategy, object]],
) -> Game:
    """Build a game from per-player ``{joint: payoff}`` maps; payoffs may be
    ints, strings or Fractions."""
    strategy_sets = tuple(tuple(labels) for labels in strategies)
    joints = tuple(itertools.product(*strategy_sets))
    tables = []
    for i in range(len(strategy_sets)):
        entry = payoffs[i]
        missing = [j for j in joints if j not in entry]
        if missing:
            raise ValidationError(
                f"player {i + 1} is missing payoff entries, e.g. {missing[0]}"
            )
        tables.append(tuple(_as_fraction(entry[j]) for j in joints))
    return Game(strategy_sets, tuple(tables))


@dataclass(frozen=True)
class Restriction:
    """Per-player subsets of a game's strategy sets, the lattice element.

    Components are stored in the parent game's label order, which fixes the
    deterministic iteration order used everywhere (traces, products, output).
    Empty components are legal.
    """

    game: Game
    components: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        canonical = []
        for i, component in enumerate(self.components):
            chosen = set(component)
            unknown = chosen - set(self.game.strategies[i])
            if unknown:
                raise ValidationError(
                    f"player {i + 1}: {sorted(unknown)} not in the game"
                )
            canonical.append(tuple(s for s in self.game.strategies[i] if s in chosen))
        object.__setattr__(self, "components", tuple(canonical))

    def __le__(self, other: "Restriction") -> bool:
        return self.is_subset_of(other)

    def is_subset_of(self, other: "Restriction") -> bool:
        if self.game is not other.game and self.game != other.game:
            raise ValidationError("restrictions of different games are incomparable")
        return all(
            set(mine) <= set(theirs)
            for mine, theirs in zip(self.components, other.components)
        )

    def meet(self, other: "Restriction") -> "Restriction":
        return Restriction(
            self.game,
            tuple(
                tuple(s for s in mine if s in set(theirs))
                for mine, theirs in zip(self.components, other.components)
            ),
        )

    def join(self, other: "Restriction") -> "Restriction":
        return Restriction(
            self.game,
            tuple(
                tuple(mine) + tuple(s for s in theirs if s not in set(mine))
                for mine, theirs in zip(self.components, other.components)
            ),
        )

    def is_full(self) -> bool:
        return self.components == self.game.strategies

    def has_empty_component(self) -> bool:
        return any(not c for c in self.components)

    def contains_joint(self, joint: JointStrategy) -> bool:
        return all(s in set(c) for s, c in zip(joint, self.components))

    @cached_property
    def joint_strategies(self) -> tuple[JointStrategy, ...]:
        return tuple(itertools.product(*self.components))

    def __repr__(self) -> str:
        parts = ", ".join("{" + " ".join(c) + "}" for c in self.components)
        return f"Restriction({parts})"


@lru_cache(maxsize=65536)
def opponents_product(restriction: Restriction, i: int) -> tuple[JointStrategy, ...]:
    """All joint strategies of the opponents of player ``i`` within a
    restriction, in product order. Empty when any opponent component is empty."""
    others = [c for j, c in enumerate(restriction.components) if j != i]
    return tuple(itertools.product(*others))


def insert_own(joint_minus_i: JointStrategy, i: int, s_i: str) -> JointStrategy:
    return joint_minus_i[:i] + (s_i,) + joint_minus_i[i:]


@dataclass(frozen=True)
class MixedStrategy:
    """A probability distribution over one player's strategies.

    Weights are kept for the whole stated support, zeros included.
    """

    player: int
    weights: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "weights",
            tuple((label, _as_fraction(w)) for label, w in self.weights),
        )
        labels = [label for label, _ in self.weights]
        if len(set(labels)) != len(labels):
            raise ValidationError("mixed strategy lists a strategy twice")
        if any(w < 0 for _, w in self.weights):
            raise ValidationError("mixed strategy has a negative weight")
        if sum(w for _, w in self.weights) != 1:
            raise ValidationError("mixed strategy weights must sum to exactly 1")

    @classmethod
    def from_mapping(cls, player: int, weights: Mapping[str, object]) -> "MixedStrategy":
        return cls(player, tuple(sorted((k, _as_fraction(v)) for k, v in weights.items())))

    @classmethod
    def pure(cls, player: int, label: str) -> "MixedStrategy":
        return cls(player, ((label, Fraction(1)),))

    def weight(self, label: str) -> Fraction:
        for name, w in self.weights:
            if name == label:
                return w
        return Fraction(0)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(label for label, w in self.weights if w > 0)

    def __str__(self) -> str:
        return " + ".join(f"{w}*{label}" for label, w in self.weights if w > 0)


@dataclass(frozen=True)
class PointBelief:
    """A single joint strategy of the opponents."""

    joint: JointStrategy

    kind = "point"

    def atoms(self) -> tuple[tuple[JointStrategy, Fraction], ...]:
        return ((self.joint, Fraction(1)),)


@dataclass(frozen=True)
class IndependentBelief:
    """One mixed strategy per opponent, multiplied out."""

    mixes: tuple[MixedStrategy, ...]

    kind = "independent"

    def atoms(self) -> tuple[tuple[JointStrategy, Fraction], ...]:
        pools = [[(label, w) for label, w in m.weights if w > 0] for m in self.mixes]
        out = []
        for combo in itertools.product(*pools):
            weight = Fraction(1)
            for _, w in combo:
                weight *= w
            out.append((tuple(label for label, _ in combo), weight))
        return tuple(out)


@dataclass(frozen=True)
class CorrelatedBelief:
    """A distribution over joint opponent strategies."""

    weights: tuple[tuple[JointStrategy, Fraction], ...]

    kind = "correlated"

    def __post_init__(self):
        object.__setattr__(
            self,
            "weights",
            tuple((tuple(j), _as_fraction(w)) for j, w in self.weights),
        )
        joints = [j for j, _ in self.weights]
        if len(set(joints)) != len(joints):
            raise ValidationError("correlated belief lists a joint strategy twice")
        if any(w < 0 for _, w in self.weights):
            raise ValidationError("correlated belief has a negative weight")
        if sum(w for _, w in self.weights) != 1:
            raise ValidationError("correlated belief weights must sum to exactly 1")

    def atoms(self) -> tuple[tuple[JointStrategy, Fraction], ...]:
        return self.weights

    def __str__(self) -> str:
        return " + ".join(
            f"{w}*({','.join(j)})" for j, w in self.weights if w > 0
        )


Belief = Union[PointBelief, IndependentBelief, CorrelatedBelief]


def validate_belief_support(belief: Belief, opponents: Iterable[JointStrategy]) -> None:
    """Check that every atom of a belief lies within the stated opponent set."""
    allowed = set(opponents)
    for joint, w in belief.atoms():
        if w > 0 and joint not in allowed:
            raise ValidationError(f"belief puts weight on {joint}, outside the restriction")


def expected_payoff(
    game: Game,
    i: int,
    s_i: str | MixedStrategy,
    belief: Belief,
) -> Fraction:
    """Exact expected payoff of player ``i`` playing ``s_i`` under a belief
    about the opponents."""
    if isinstance(s_i, MixedStrategy):
        own = [(label, w) for label, w in s_i.weights if w > 0]
    else:
        game.validate_strategy(i, s_i)
        own = [(s_i, Fraction(1))]
    total = Fraction(0)
    for joint, prob in belief.atoms():
        if prob == 0:
            continue
        for label, weight in own:
            total += prob * weight * game.payoff(i, insert_own(joint, i, label))
    return total


# ---------------------------------------------------------------------------
# Text formats.
#
# Game files:      players: 2 / strategies 1: U D / payoff 1: U L = 1
# Restrictions:    restrict 1: U D      (empty components stay explicit)
# Comments start with '#'; parsing is whitespace-insensitive.
# ---------------------------------------------------------------------------


def _content_lines(source: str):
    for number, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _split_directive(number: int, line: str) -> tuple[str, str]:
    if ":" not in line:
        raise ParseError("expected 'keyword ...:' directive", number, 1)
    head, _, rest = line.partition(":")
    return head.strip(), rest.strip()


def _parse_player_number(number: int, head: str, keyword: str, n: int | None) -> int:
    parts = head.split()
    if len(parts) != 2 or parts[0] != keyword or not parts[1].isdigit():
        raise ParseError(f"malformed {keyword} directive", number, 1)
    player = int(parts[1])
    if player < 1 or (n is not None and player > n):
        raise ParseError(f"player number {player} out of range", number, len(keyword) + 2)
    return player - 1


def parse_game(source: str) -> Game:
    """Parse the game file format into a validated :class:`Game`."""
    n: int | None = None
    strategy_sets: dict[int, tuple[str, ...]] = {}
    payoff_lines: list[tuple[int, int, tuple[str, ...], Fraction]] = []

    for number, line in _content_lines(source):
        head, rest = _split_directive(number, line)
        if head == "players":
            if n is not None:
                raise ParseError("duplicate players directive", number, 1)
            if not rest.isdigit():
                raise ParseError("players count must be an integer", number, len(line))
            n = int(rest)
        elif head.startswith("strategies"):
            player = _parse_player_number(number, head, "strategies", n)
            if player in strategy_sets:
                raise ParseError(f"duplicate strategies for player {player + 1}", number, 1)
            labels = tuple(rest.split())
            strategy_sets[player] = labels
        elif head.startswith("payoff"):
            player = _parse_player_number(number, head, "payoff", n)
            if "=" not in rest:
                raise ParseError("payoff line needs '= value'", number, len(line))
            joint_text, _, value_text = rest.partition("=")
            joint = tuple(joint_text.split())
            try:
                value = Fraction(value_text.strip())
            except (ValueError, ZeroDivisionError):
                raise ParseError(
                    f"not an exact rational: {value_text.strip()!r}",
                    number,
                    line.rfind("=") + 2,
                ) from None
            payoff_lines.append((number, player, joint, value))
        else:
            raise ParseError(f"unknown directive {head.split()[0]!r}", number, 1)

    if n is None:
        raise ParseError("missing players directive", 0, 0)
    if n < 2:
        raise ValidationError("a game needs at least 2 players (n > 1)")
    missing_players = [i + 1 for i in range(n) if i not in strategy_sets]
    if missing_players:
        raise ValidationError(f"missing strategies for players {missing_players}")

    strategies = tuple(strategy_sets[i] for i in range(n))
    payoffs: list[dict[JointStrategy, Fraction]] = [dict() for _ in range(n)]
    for number, player, joint, value in payoff_lines:
        if len(joint) != n:
            raise ParseError(
                f"joint strategy needs {n} entries, got {len(joint)}", number, 1
            )
        for j, label in enumerate(joint):
            if label not in strategy_sets[j]:
                raise ParseError(
                    f"player {j + 1} has no strategy {label!r}", number, 1
                )
        if joint in payoffs[player]:
            raise ValidationError(
                f"duplicate payoff for player {player + 1} at {joint}"
            )
        payoffs[player][joint] = value

    return game_from_payoffs(strategies, payoffs)


def render_game(game: Game) -> str:
    """Render a game in the file format; ``parse_game`` round-trips exactly."""
    lines = [f"players: {game.n}"]
    for i, labels in enumerate(game.strategies):
        lines.append(f"strategies {i + 1}: " + " ".join(labels))
    for i in range(game.n):
        for joint in game.joint_strategies:
            lines.append(
                f"payoff {i + 1}: " + " ".join(joint) + f" = {game.payoff(i, joint)}"
            )
    return "\n".join(lines) + "\n"


def parse_restriction(source: str, game: Game) -> Restriction:
    """Parse ``restrict i: ...`` lines; every player must appear exactly once."""
    seen: dict[int, tuple[str, ...]] = {}
    for number, line in _content_lines(source):
        head, rest = _split_directive(number, line)
        player = _parse_player_number(number, head, "restrict", game.n)
        if player in seen:
            raise ParseError(f"duplicate restrict line for player {player + 1}", number, 1)
        seen[player] = tuple(rest.split())
    missing = [i + 1 for i in range(game.n) if i not in seen]
    if missing:
        raise ValidationError(f"missing restrict lines for players {missing}")
    return Restriction(game, tuple(seen[i] for i in range(game.n)))


def render_restriction(restriction: Restriction) -> str:
    lines = [
        f"restrict {i + 1}: " + " ".join(component)
        for i, component in enumerate(restriction.components)
    ]
    return "\n".join(line.rstrip() for line in lines) + "\n"
