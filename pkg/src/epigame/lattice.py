"""Operators on the complete lattice of restrictions: iteration to a
fixpoint, brute-force largest fixpoints, monotonicity probing, and the
inclusion lemma between a monotonic and a contracting operator."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import (
    BudgetExceeded,
    IterationBudgetExceeded,
    NonContractingStep,
    PremiseViolated,
)
from .games import Game, Restriction


@dataclass(frozen=True)
class RestrictionOperator:
    """A named map from restrictions to restrictions of one fixed game.

    The claimed flags are metadata only; contraction is re-checked on every
    iteration step and monotonicity is only ever established by probing or
    exhaustion.
    """

    name: str
    game: Game
    fn: Callable[[Restriction], Restriction]
    claimed_monotonic: bool = False
    claimed_contracting: bool = True

    def apply(self, restriction: Restriction) -> Restriction:
        return self.fn(restriction)


@dataclass(frozen=True)
class EliminationRecord:
    """One eliminated strategy: at stage ``stage`` player ``player`` lost
    ``strategy`` for ``reason`` (with a checkable witness when one exists)."""

    stage: int
    player: int
    strategy: str
    reason: str
    witness: Any = None


@dataclass(frozen=True)
class EliminationTrace:
    """The full stage sequence of an iteration, ending at the fixpoint.

    ``stages[stabilized_at] == stages[stabilized_at + 1]`` and the last
    stage is the outcome. ``records`` carries per-strategy elimination
    reasons when the producing operator supplies them.
    """

    operator: str
    stages: tuple[Restriction, ...]
    stabilized_at: int
    records: tuple[EliminationRecord, ...] = field(default=())

    @property
    def outcome(self) -> Restriction:
        return self.stages[-1]


def default_budget(start: Restriction) -> int:
    return 1 + sum(len(h) for h in start.game.strategies)


def iterate_to_outcome(
    op: RestrictionOperator,
    start: Restriction,
    budget: int | None = None,
) -> EliminationTrace:
    """Iterate a contracting operator from ``start`` until the stage repeats.

    Raises :class:`NonContractingStep` the moment a stage is not included in
    its predecessor, and :class:`IterationBudgetExceeded` when the operator
    fails to stabilize within the budget (impossible for genuinely
    contracting operators on a finite game, so it signals a bug).
    """
    if budget is None:
        budget = default_budget(start)
    stages = [start]
    current = start
    for _ in range(budget):
        nxt = op.apply(current)
        if not nxt.is_subset_of(current):
            raise NonContractingStep(len(stages) - 1, current, nxt)
        stages.append(nxt)
        if nxt == current:
            return EliminationTrace(op.name, tuple(stages), len(stages) - 2)
        current = nxt
    raise IterationBudgetExceeded(
        f"{op.name} did not stabilize within {budget} applications"
    )


def enumerate_restrictions(game: Game):
    """All restrictions of a game, in a deterministic order (per player, all
    subsets in binary counting order over the game's label order)."""
    per_player = []
    for labels in game.strategies:
        subsets = []
        for mask in range(1 << len(labels)):
            subsets.append(tuple(s for k, s in enumerate(labels) if mask >> k & 1))
        per_player.append(subsets)
    for combo in itertools.product(*per_player):
        yield Restriction(game, combo)


def lattice_size(game: Game) -> int:
    size = 1
    for labels in game.strategies:
        size <<= len(labels)
    return size


def largest_fixpoint_bruteforce(
    op: RestrictionOperator,
    game: Game,
    budget: int = 1 << 20,
) -> Restriction:
    """Componentwise union of all post-fixpoints ``G <= op(G)``, enumerated
    exhaustively. For a monotonic operator this is its largest fixpoint."""
    if lattice_size(game) > budget:
        raise BudgetExceeded(
            f"lattice has {lattice_size(game)} restrictions, budget is {budget}"
        )
    union = Restriction(game, tuple(() for _ in game.strategies))
    for candidate in enumerate_restrictions(game):
        if candidate.is_subset_of(op.apply(candidate)):
            union = union.join(candidate)
    return union


def sample_restriction(rng: random.Random, game: Game, within: Restriction | None = None) -> Restriction:
    pool = within.components if within is not None else game.strategies
    return Restriction(
        game,
        tuple(tuple(s for s in comp if rng.random() < 0.5) for comp in pool),
    )


@dataclass(frozen=True)
class MonotonicityReport:
    operator: str
    passed: bool
    samples_checked: int
    counterexample: tuple[Restriction, Restriction] | None = None


def probe_monotonicity(
    op: RestrictionOperator,
    game: Game,
    samples: int,
    seed: int,
) -> MonotonicityReport:
    """Sample pairs ``G <= G'`` and test ``op(G) <= op(G')``.

    A pass is one-sided evidence only; a returned counterexample is a proof
    of non-monotonicity.
    """
    rng = random.Random(seed)
    for k in range(samples):
        big = sample_restriction(rng, game)
        small = sample_restriction(rng, game, within=big)
        if not op.apply(small).is_subset_of(op.apply(big)):
            return MonotonicityReport(op.name, False, k + 1, (small, big))
    return MonotonicityReport(op.name, True, samples, None)


@dataclass(frozen=True)
class InclusionLemmaReport:
    """Checked premises and the conclusion of the inclusion lemma: if
    ``op1 <= op2`` pointwise, op1 is monotonic and op2 is contracting, then
    the outcome of op1 is included in the outcome of op2."""

    op1: str
    op2: str
    pointwise_checked: int
    monotonicity: MonotonicityReport
    contraction_checked: int
    outcome1: Restriction
    outcome2: Restriction
    conclusion_holds: bool


def check_inclusion_lemma(
    op1: RestrictionOperator,
    op2: RestrictionOperator,
    game: Game,
    samples: int = 200,
    seed: int = 0,
    exhaustive_limit: int = 1 << 10,
) -> InclusionLemmaReport:
    """Verify the premises on sampled (or, on tiny lattices, all)
    restrictions and compare the two outcomes.

    Raises :class:`PremiseViolated` with the witnessing restriction when the
    pointwise inclusion or the contraction of ``op2`` fails; monotonicity of
    ``op1`` is sampled evidence and lands in the report.
    """
    rng = random.Random(seed)
    if lattice_size(game) <= exhaustive_limit:
        candidates = list(enumerate_restrictions(game))
    else:
        candidates = [game.full_restriction()] + [
            sample_restriction(rng, game) for _ in range(samples)
        ]
    for candidate in candidates:
        image1 = op1.apply(candidate)
        image2 = op2.apply(candidate)
        if not image1.is_subset_of(image2):
            raise PremiseViolated("pointwise inclusion op1(G) <= op2(G)", candidate)
        if not image2.is_subset_of(candidate):
            raise PremiseViolated("op2 contracting", candidate)

    monotonicity = probe_monotonicity(op1, game, samples, seed)

    trace1 = iterate_to_outcome(op1, game.full_restriction())
    try:
        trace2 = iterate_to_outcome(op2, game.full_restriction())
    except NonContractingStep as exc:
        raise PremiseViolated("op2 contracting", exc.before) from exc
    return InclusionLemmaReport(
        op1=op1.name,
        op2=op2.name,
        pointwise_checked=len(candidates),
        monotonicity=monotonicity,
        contraction_checked=len(candidates) + len(trace2.stages) - 1,
        outcome1=trace1.outcome,
        outcome2=trace2.outcome,
        conclusion_holds=trace1.outcome.is_subset_of(trace2.outcome),
    )
