"""Iterated elimination of non-optimal strategies.

Two operators over restrictions, differing only in the alternatives a
strategy is measured against:

* the global operator keeps ``s_i in G_i`` satisfying
  ``holds(notion_i, s_i, H_i, G_-i)`` — alternatives come from the player's
  strategy set in the *initial* game;
* the local operator keeps ``s_i in G_i`` satisfying
  ``holds(notion_i, s_i, G_i, G_-i)`` — the customary elimination procedure.

Both eliminate all failing strategies of a stage simultaneously.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .games import Game, Restriction, insert_own, opponents_product
from .lattice import (
    EliminationRecord,
    EliminationTrace,
    RestrictionOperator,
    iterate_to_outcome,
)
from .optimality import (
    MONOTONIC_NOTIONS,
    Notion,
    holds,
    parse_notion,
    solve_dominance_lp,
)

GLOBAL = "global"
LOCAL = "local"


@dataclass(frozen=True)
class NotionProfile:
    """One optimality notion per player."""

    notions: tuple[Notion, ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "notions",
            tuple(parse_notion(n) if isinstance(n, str) else n for n in self.notions),
        )

    @classmethod
    def uniform(cls, notion: Notion | str, n: int) -> "NotionProfile":
        notion = parse_notion(notion) if isinstance(notion, str) else notion
        return cls((notion,) * n)

    @classmethod
    def parse(cls, text: str, n: int) -> "NotionProfile":
        parts = [p for p in text.replace(",", " ").split() if p]
        if len(parts) == 1:
            return cls.uniform(parts[0], n)
        if len(parts) != n:
            raise ValidationError(
                f"profile needs 1 or {n} notions, got {len(parts)}"
            )
        return cls(tuple(parts))

    def validate_for(self, game: Game) -> None:
        if len(self.notions) != game.n:
            raise ValidationError(
                f"profile has {len(self.notions)} notions for {game.n} players"
            )
        if game.n != 2 and Notion.BR_INDEPENDENT in self.notions:
            from .errors import UnsupportedNotion

            raise UnsupportedNotion(
                "independent-belief best response requires exactly 2 players"
            )

    def is_monotonic(self) -> bool:
        effective = {
            Notion.BR_CORRELATED if n is Notion.BR_INDEPENDENT else n
            for n in self.notions
        }
        return effective <= MONOTONIC_NOTIONS

    def __str__(self) -> str:
        if len(set(self.notions)) == 1:
            return self.notions[0].value
        return ",".join(n.value for n in self.notions)


def t_global(profile: NotionProfile, game: Game, g: Restriction) -> Restriction:
    """Keep the strategies that are optimal against alternatives from the
    initial strategy sets."""
    profile.validate_for(game)
    return Restriction(
        game,
        tuple(
            tuple(
                s
                for s in g.components[i]
                if holds(profile.notions[i], game, i, s, game.strategies[i], opponents_product(g, i))
            )
            for i in range(game.n)
        ),
    )


def u_local(profile: NotionProfile, game: Game, g: Restriction) -> Restriction:
    """Keep the strategies that are optimal against alternatives from the
    current restriction."""
    profile.validate_for(game)
    return Restriction(
        game,
        tuple(
            tuple(
                s
                for s in g.components[i]
                if holds(profile.notions[i], game, i, s, g.components[i], opponents_product(g, i))
            )
            for i in range(game.n)
        ),
    )


def operator(profile: NotionProfile, game: Game, mode: str) -> RestrictionOperator:
    profile.validate_for(game)
    if mode == GLOBAL:
        return RestrictionOperator(
            name=f"T[{profile}]",
            game=game,
            fn=lambda g: t_global(profile, game, g),
            claimed_monotonic=profile.is_monotonic(),
            claimed_contracting=True,
        )
    if mode == LOCAL:
        return RestrictionOperator(
            name=f"U[{profile}]",
            game=game,
            fn=lambda g: u_local(profile, game, g),
            claimed_monotonic=False,
            claimed_contracting=True,
        )
    raise ValidationError(f"mode must be {GLOBAL!r} or {LOCAL!r}, got {mode!r}")


def outcome(
    profile: NotionProfile,
    game: Game,
    mode: str,
    budget: int | None = None,
) -> EliminationTrace:
    """Iterate the chosen operator from the full game and annotate every
    eliminated strategy with a machine-checkable reason."""
    op = operator(profile, game, mode)
    trace = iterate_to_outcome(op, game.full_restriction(), budget=budget)
    records = []
    for stage_index in range(len(trace.stages) - 1):
        before = trace.stages[stage_index]
        after = trace.stages[stage_index + 1]
        for i in range(game.n):
            gone = set(before.components[i]) - set(after.components[i])
            for s in before.components[i]:
                if s not in gone:
                    continue
                alternatives = (
                    game.strategies[i] if mode == GLOBAL else before.components[i]
                )
                records.append(
                    explain_elimination(
                        profile.notions[i],
                        game,
                        stage_index,
                        i,
                        s,
                        alternatives,
                        opponents_product(before, i),
                    )
                )
    return EliminationTrace(trace.operator, trace.stages, trace.stabilized_at, tuple(records))


def explain_elimination(
    notion: Notion,
    game: Game,
    stage: int,
    i: int,
    s: str,
    alternatives,
    opponents,
) -> EliminationRecord:
    """Build the elimination record for a strategy that failed its predicate:
    a dominating (pure or mixed) strategy, or a certificate that no belief
    supports it."""
    if notion is Notion.BR_INDEPENDENT and game.n == 2:
        notion = Notion.BR_CORRELATED
    if not opponents:
        return EliminationRecord(
            stage, i, s, f"fails {notion.value} against an empty opponent set", None
        )
    if notion in (Notion.SD, Notion.WD):
        mode = "strict" if notion is Notion.SD else "weak"
        dominator = _pure_dominator(game, i, s, alternatives, opponents, mode)
        kind = "strictly" if notion is Notion.SD else "weakly"
        return EliminationRecord(stage, i, s, f"{kind} dominated", dominator)
    if notion in (Notion.MSD, Notion.MWD):
        mode = "strict" if notion is Notion.MSD else "weak"
        verdict = solve_dominance_lp(game, i, s, alternatives, opponents, mode)
        kind = "strictly" if notion is Notion.MSD else "weakly"
        return EliminationRecord(
            stage, i, s, f"{kind} dominated by a mixed strategy", verdict.witness
        )
    if notion is Notion.BR_POINT:
        better = tuple(
            (t, _better_reply(game, i, s, alternatives, t)) for t in opponents
        )
        return EliminationRecord(
            stage, i, s, "never a best response to a point belief", better
        )
    # correlated: absence of a supporting belief is witnessed by a strict
    # mixed dominator over the same alternatives
    verdict = solve_dominance_lp(game, i, s, alternatives, opponents, "strict")
    return EliminationRecord(
        stage,
        i,
        s,
        "no correlated belief supports it",
        verdict.witness,
    )


def _pure_dominator(game, i, s, alternatives, opponents, mode):
    mine = [game.payoff(i, insert_own(t, i, s)) for t in opponents]
    for candidate in alternatives:
        if candidate == s:
            continue
        theirs = [game.payoff(i, insert_own(t, i, candidate)) for t in opponents]
        if mode == "strict" and all(q > p for q, p in zip(theirs, mine)):
            return candidate
        if (
            mode == "weak"
            and all(q >= p for q, p in zip(theirs, mine))
            and any(q > p for q, p in zip(theirs, mine))
        ):
            return candidate
    return None


def _better_reply(game, i, s, alternatives, t):
    p = game.payoff(i, insert_own(t, i, s))
    for candidate in alternatives:
        if game.payoff(i, insert_own(t, i, candidate)) > p:
            return candidate
    return None
