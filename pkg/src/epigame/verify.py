"""Machine checks for the claims tying common belief/knowledge of
rationality to iterated elimination.

Each claim has a single-instance checker returning a
:class:`VerificationReport` and, where meaningful, a seeded random suite.
Counterexample payloads are replayable: :func:`replay` re-runs the failing
instance and must reproduce the violation.

Claim identifiers used throughout ("thm1.i", "cor2", ...) are the engine's
own stable names for the checked statements; the CLI exposes them verbatim.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .elimination import GLOBAL, LOCAL, NotionProfile, operator, u_local
from .epistemic import (
    EpistemicModel,
    common_box,
    iterated_elimination_model,
    rat_event,
    restriction_of,
    singleton_model,
    state_label,
)
from .errors import (
    HypothesisNotMet,
    InvalidModel,
    NonMonotonicProfile,
    ValidationError,
)
from .games import Game, JointStrategy, Restriction
from .generators import GeneratorConfig, generate_game, generate_model
from .lattice import check_inclusion_lemma, iterate_to_outcome, sample_restriction
from .optimality import MONOTONIC_NOTIONS, Notion, holds

HOLDS_ON_ALL = "holds-on-all"
COUNTEREXAMPLE = "counterexample"


@lru_cache(maxsize=16384)
def elimination_limit(profile: NotionProfile, game: Game, mode: str) -> Restriction:
    """The (cached) outcome of iterating one elimination operator from the
    full game; the verifiers compare against this repeatedly."""
    op = operator(profile, game, mode)
    return iterate_to_outcome(op, game.full_restriction()).outcome


@dataclass
class VerificationReport:
    claim: str
    instances_checked: int
    verdict: str
    counterexample: dict | None = None
    seed: int | None = None
    runtime_seconds: float = 0.0
    notes: tuple[str, ...] = field(default=())

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS_ON_ALL


def _report(claim, instances, violated, payload, seed, started, notes=()):
    return VerificationReport(
        claim=claim,
        instances_checked=instances,
        verdict=COUNTEREXAMPLE if violated else HOLDS_ON_ALL,
        counterexample=payload if violated else None,
        seed=seed,
        runtime_seconds=time.perf_counter() - started,
        notes=tuple(notes),
    )


def _require_monotonic(profile: NotionProfile) -> None:
    if not profile.is_monotonic():
        bad = [n.value for n in profile.notions if n not in MONOTONIC_NOTIONS]
        raise NonMonotonicProfile(
            f"inclusion claim requires monotonic notions; {', '.join(bad)} is not "
            "(use the singleton-model counterexample check instead)"
        )


def _require_class(model: EpistemicModel, wanted: str) -> None:
    if wanted == "belief":
        if model.model_class not in ("belief", "knowledge"):
            raise InvalidModel("claim needs a belief-class model")
    elif model.model_class != wanted:
        raise InvalidModel(f"claim needs a {wanted}-class model")


# --- single-instance checks ----------------------------------------------------

def verify_thm1i(
    game: Game, model: EpistemicModel, profile: NotionProfile, seed: int | None = None
) -> VerificationReport:
    """True common belief of rationality confines play to the global
    elimination outcome: G_(RAT and common-belief-of-RAT) <= T-outcome."""
    started = time.perf_counter()
    _require_monotonic(profile)
    _require_class(model, "belief")
    rat = rat_event(model, profile)
    event = rat & common_box(model, rat)
    chosen = restriction_of(model, event)
    limit = elimination_limit(profile, game, GLOBAL)
    violated = not chosen.is_subset_of(limit)
    payload = {
        "kind": "thm1.i",
        "game": game,
        "model": model,
        "profile": profile,
        "event": event,
        "chosen": chosen,
        "limit": limit,
    }
    return _report("thm1.i", 1, violated, payload, seed, started)


def verify_thm1ii(
    game: Game, model: EpistemicModel, profile: NotionProfile, seed: int | None = None
) -> VerificationReport:
    """Common knowledge of rationality confines play to the global
    elimination outcome: G_(common-knowledge-of-RAT) <= T-outcome."""
    started = time.perf_counter()
    _require_monotonic(profile)
    _require_class(model, "knowledge")
    event = common_box(model, rat_event(model, profile))
    chosen = restriction_of(model, event)
    limit = elimination_limit(profile, game, GLOBAL)
    violated = not chosen.is_subset_of(limit)
    payload = {
        "kind": "thm1.ii",
        "game": game,
        "model": model,
        "profile": profile,
        "event": event,
        "chosen": chosen,
        "limit": limit,
    }
    return _report("thm1.ii", 1, violated, payload, seed, started)


def verify_thm1iii(
    game: Game, profile: NotionProfile, seed: int | None = None
) -> VerificationReport:
    """The two-block knowledge model built around the elimination outcome
    achieves the reverse inclusion: T-outcome <= G_(common-knowledge-of-RAT).
    Holds for every notion, monotonic or not."""
    started = time.perf_counter()
    model, trace = iterated_elimination_model(game, profile)
    kstar = common_box(model, rat_event(model, profile))
    recovered = restriction_of(model, kstar)
    violated = not trace.outcome.is_subset_of(recovered)
    payload = {
        "kind": "thm1.iii",
        "game": game,
        "profile": profile,
        "model": model,
        "limit": trace.outcome,
        "recovered": recovered,
    }
    return _report("thm1.iii", 1, violated, payload, seed, started)


def thm2_hypothesis_clauses(
    game: Game, profile: NotionProfile, joint: JointStrategy
) -> list[str]:
    """Failing clauses of the counterexample hypothesis: the joint strategy
    must be outside the elimination outcome yet mutually optimal against its
    own components."""
    failures = []
    limit = elimination_limit(profile, game, GLOBAL)
    if limit.contains_joint(joint):
        failures.append(f"joint strategy {joint} survives the elimination")
    for i in range(game.n):
        opponents = [joint[:i] + joint[i + 1:]]
        if not holds(profile.notions[i], game, i, joint[i], game.strategies[i], opponents):
            failures.append(
                f"player {i + 1} strategy {joint[i]} is not "
                f"{profile.notions[i].value}-optimal against {opponents[0]}"
            )
    return failures


def verify_thm2(
    game: Game, profile: NotionProfile, joint: JointStrategy, seed: int | None = None
) -> VerificationReport:
    """Build the singleton-possibility knowledge model and confirm that the
    common-knowledge inclusion fails at the given joint strategy.

    Raises :class:`HypothesisNotMet` when the joint strategy does not
    qualify. A ``counterexample`` verdict is the expected, successful result.
    """
    started = time.perf_counter()
    profile.validate_for(game)
    clauses = thm2_hypothesis_clauses(game, profile, joint)
    if clauses:
        raise HypothesisNotMet(clauses)
    model = singleton_model(game)
    rat = rat_event(model, profile)
    kstar = common_box(model, rat)
    chosen = restriction_of(model, kstar)
    limit = elimination_limit(profile, game, GLOBAL)
    state = state_label(joint)
    violated = state in kstar and not chosen.is_subset_of(limit)
    payload = {
        "kind": "thm2",
        "game": game,
        "profile": profile,
        "joint": joint,
        "model": model,
        "kstar": kstar,
        "chosen": chosen,
        "limit": limit,
    }
    return _report("thm2", 1, violated, payload, seed, started)


def search_thm2(game: Game, profile: NotionProfile, seed: int | None = None) -> VerificationReport:
    """Scan all joint strategies for one meeting the counterexample
    hypothesis; verify the first hit."""
    started = time.perf_counter()
    profile.validate_for(game)
    tried = 0
    for joint in game.joint_strategies:
        tried += 1
        if thm2_hypothesis_clauses(game, profile, joint):
            continue
        report = verify_thm2(game, profile, joint, seed=seed)
        report.instances_checked = tried
        report.notes = (f"hypothesis witness {joint}",)
        return report
    return _report(
        "thm2",
        tried,
        False,
        None,
        seed,
        started,
        notes=("no joint strategy meets the hypothesis",),
    )


def verify_cor1(game: Game, model: EpistemicModel, seed: int | None = None) -> VerificationReport:
    """Point-belief rationality under true common belief (or common
    knowledge) confines play to the local strict-dominance outcome."""
    started = time.perf_counter()
    profile = NotionProfile.uniform(Notion.BR_POINT, game.n)
    _require_class(model, "belief")
    limit = elimination_limit(NotionProfile.uniform(Notion.SD, game.n), game, LOCAL)
    rat = rat_event(model, profile)
    event = rat & common_box(model, rat)
    chosen = restriction_of(model, event)
    violated = not chosen.is_subset_of(limit)
    checked = ["belief"]
    if model.model_class == "knowledge" and not violated:
        kchosen = restriction_of(model, common_box(model, rat))
        violated = not kchosen.is_subset_of(limit)
        checked.append("knowledge")
    payload = {
        "kind": "cor1",
        "game": game,
        "model": model,
        "profile": profile,
        "chosen": chosen,
        "limit": limit,
    }
    return _report("cor1", 1, violated, payload, seed, started, notes=tuple(checked))


def verify_cor2(
    game: Game,
    model: EpistemicModel,
    belief_class: str = "correlated",
    seed: int | None = None,
) -> VerificationReport:
    """Best-response rationality (point, independent, or correlated beliefs)
    under true common belief confines play to the local mixed-strict-
    dominance outcome."""
    started = time.perf_counter()
    notion = {
        "point": Notion.BR_POINT,
        "independent": Notion.BR_INDEPENDENT,
        "correlated": Notion.BR_CORRELATED,
    }.get(belief_class)
    if notion is None:
        raise ValidationError(f"unknown belief class {belief_class!r}")
    profile = NotionProfile.uniform(notion, game.n)
    profile.validate_for(game)
    _require_class(model, "belief")
    limit = elimination_limit(NotionProfile.uniform(Notion.MSD, game.n), game, LOCAL)
    rat = rat_event(model, profile)
    event = rat & common_box(model, rat)
    chosen = restriction_of(model, event)
    violated = not chosen.is_subset_of(limit)
    if model.model_class == "knowledge" and not violated:
        kchosen = restriction_of(model, common_box(model, rat))
        violated = not kchosen.is_subset_of(limit)
    payload = {
        "kind": "cor2",
        "game": game,
        "model": model,
        "belief_class": belief_class,
        "chosen": chosen,
        "limit": limit,
    }
    return _report("cor2", 1, violated, payload, seed, started)


# --- seeded random suites --------------------------------------------------------

def _suite_config(seed: int, target_class: str, players=(2, 3), strategies=(2, 4), states=(2, 8)):
    return GeneratorConfig(
        seed=seed,
        players=players,
        strategies=strategies,
        states=states,
        target_class=target_class,
    )


def thm1_suite(
    notion: Notion | str,
    instances: int,
    seed: int = 0,
    players=(2, 3),
    strategies=(2, 4),
    states=(2, 8),
) -> VerificationReport:
    """Random (game, belief model, knowledge model) instances for one
    monotonic notion; checks the common-belief and the common-knowledge
    inclusion on every instance."""
    started = time.perf_counter()
    profile_notion = notion if isinstance(notion, Notion) else Notion(notion)
    for k in range(instances):
        instance_seed = seed + k
        game = generate_game(_suite_config(instance_seed, "belief", players, strategies, states))
        profile = NotionProfile.uniform(profile_notion, game.n)
        belief_model = generate_model(
            _suite_config(instance_seed, "belief", players, strategies, states), game
        )
        knowledge_model = generate_model(
            _suite_config(instance_seed, "knowledge", players, strategies, states), game
        )
        report_i = verify_thm1i(game, belief_model, profile, seed=instance_seed)
        if not report_i.holds:
            report_i.claim = "thm1.i+ii"
            report_i.instances_checked = k + 1
            return report_i
        report_ii = verify_thm1ii(game, knowledge_model, profile, seed=instance_seed)
        if not report_ii.holds:
            report_ii.claim = "thm1.i+ii"
            report_ii.instances_checked = k + 1
            return report_ii
    return _report(
        "thm1.i+ii", instances, False, None, seed, started, notes=(f"notion {profile_notion.value}",)
    )


def thm1iii_suite(
    instances: int,
    seed: int = 0,
    notions: Iterable[Notion] = (
        Notion.SD,
        Notion.WD,
        Notion.MSD,
        Notion.MWD,
        Notion.BR_POINT,
        Notion.BR_CORRELATED,
    ),
    players=(2, 3),
    strategies=(2, 3),
) -> VerificationReport:
    """The construction of the reverse inclusion on random games, for every
    notion including the non-monotonic ones."""
    started = time.perf_counter()
    notions = tuple(notions)
    for k in range(instances):
        instance_seed = seed + k
        game = generate_game(_suite_config(instance_seed, "knowledge", players, strategies))
        for notion in notions:
            report = verify_thm1iii(
                game, NotionProfile.uniform(notion, game.n), seed=instance_seed
            )
            if not report.holds:
                report.instances_checked = k + 1
                return report
    return _report("thm1.iii", instances, False, None, seed, started)


def cor_suite(
    which: str,
    instances: int,
    seed: int = 0,
    belief_class: str = "correlated",
) -> VerificationReport:
    """Random-model suites for the two dominance corollaries."""
    started = time.perf_counter()
    claim = "cor1" if which == "cor1" else "cor2"
    players = (2, 2) if belief_class == "independent" else (2, 3)
    for k in range(instances):
        instance_seed = seed + k
        target = "belief" if k % 2 else "knowledge"
        config = _suite_config(instance_seed, target, players=players, strategies=(2, 3), states=(2, 6))
        game = generate_game(config)
        model = generate_model(config, game)
        if which == "cor1":
            report = verify_cor1(game, model, seed=instance_seed)
        else:
            report = verify_cor2(game, model, belief_class, seed=instance_seed)
        if not report.holds:
            report.instances_checked = k + 1
            return report
    return _report(claim, instances, False, None, seed, started)


def pearce_suite(
    games: int,
    seed: int = 0,
    restrictions_per_game: int = 6,
    players=(2, 3),
    strategies=(2, 4),
) -> VerificationReport:
    """Componentwise equality of the local correlated-best-response and local
    mixed-strict-dominance operators on sampled restrictions with non-empty
    components; this cross-validates the two independent LP formulations."""
    started = time.perf_counter()
    rng = random.Random(seed)
    checked = 0
    for k in range(games):
        game = generate_game(_suite_config(seed + k, "belief", players, strategies))
        brc = NotionProfile.uniform(Notion.BR_CORRELATED, game.n)
        msd = NotionProfile.uniform(Notion.MSD, game.n)
        candidates = [game.full_restriction()]
        while len(candidates) < restrictions_per_game:
            candidate = sample_restriction(rng, game)
            if not candidate.has_empty_component():
                candidates.append(candidate)
        for restriction in candidates:
            checked += 1
            left = u_local(brc, game, restriction)
            right = u_local(msd, game, restriction)
            if left != right:
                payload = {
                    "kind": "pearce",
                    "game": game,
                    "restriction": restriction,
                    "brc": left,
                    "msd": right,
                }
                return _report("pearce", checked, True, payload, seed, started)
    return _report("pearce", checked, False, None, seed, started)


def lemma_inc_suite(games: int, seed: int = 0) -> VerificationReport:
    """The inclusion lemma premises and conclusion for the operator pairs
    (global point-best-response, local strict dominance) and (global mixed
    dominance, local mixed dominance) on random games."""
    started = time.perf_counter()
    for k in range(games):
        instance_seed = seed + k
        game = generate_game(
            _suite_config(instance_seed, "belief", players=(2, 3), strategies=(2, 3))
        )
        pairs = (
            (Notion.BR_POINT, GLOBAL, Notion.SD, LOCAL),
            (Notion.MSD, GLOBAL, Notion.MSD, LOCAL),
        )
        for notion1, mode1, notion2, mode2 in pairs:
            op1 = operator(NotionProfile.uniform(notion1, game.n), game, mode1)
            op2 = operator(NotionProfile.uniform(notion2, game.n), game, mode2)
            report = check_inclusion_lemma(
                op1, op2, game, samples=40, seed=instance_seed, exhaustive_limit=1 << 6
            )
            if not (report.conclusion_holds and report.monotonicity.passed):
                payload = {
                    "kind": "lem.inc",
                    "game": game,
                    "op1": op1.name,
                    "op2": op2.name,
                    "report": report,
                }
                return _report("lem.inc", k + 1, True, payload, seed, started)
    return _report("lem.inc", games, False, None, seed, started)


# --- predicate monotonicity -------------------------------------------------------

def _opponent_subset_values(game, notion, i, s):
    # combinations over the product order keep every subset canonical, so
    # the cached predicate core can be queried directly
    from .optimality import _holds_cached

    joints = list(
        itertools.product(*[c for j, c in enumerate(game.strategies) if j != i])
    )
    values = {}
    for size in range(len(joints) + 1):
        for combo in itertools.combinations(joints, size):
            values[frozenset(combo)] = _holds_cached(
                notion, game, i, s, game.strategies[i], combo
            )
    return values


def check_predicate_monotonicity(game: Game, notion: Notion) -> tuple | None:
    """Exhaustively test monotonicity of one notion on one game; returns a
    witness (player, strategy, smaller, larger) or None."""
    for i in range(game.n):
        for s in game.strategies[i]:
            values = _opponent_subset_values(game, notion, i, s)
            for small, small_value in values.items():
                if not small_value:
                    continue
                for big, big_value in values.items():
                    if small <= big and not big_value:
                        return (i, s, small, big)
    return None


def find_predicate_nonmonotonicity(game: Game, notion: Notion) -> list[tuple]:
    """All monotonicity violations of a notion on a game (exhaustive over
    players, strategies and opponent-subset pairs)."""
    witnesses = []
    for i in range(game.n):
        for s in game.strategies[i]:
            values = _opponent_subset_values(game, notion, i, s)
            for small, small_value in values.items():
                if not small_value:
                    continue
                for big, big_value in values.items():
                    if small < big and not big_value:
                        witnesses.append((i, s, small, big))
    return witnesses


def monotonicity_suite(
    small_samples: int = 5000,
    large_samples: int = 1000,
    seed: int = 0,
) -> VerificationReport:
    """Monotonicity of the four monotonic notions: exhaustive opponent-set
    pairs on sampled 2x2 games with payoffs in {0,1,2}, then random larger
    games with sampled subset pairs."""
    started = time.perf_counter()
    rng = random.Random(seed)
    notions = (Notion.SD, Notion.MSD, Notion.BR_POINT, Notion.BR_CORRELATED)
    checked = 0

    pool = (Fraction(0), Fraction(1), Fraction(2))
    tables = list(itertools.product(pool, repeat=4))
    for _ in range(small_samples):
        game = Game(
            (("a", "b"), ("x", "y")),
            (rng.choice(tables), rng.choice(tables)),
        )
        checked += 1
        for notion in notions:
            witness = check_predicate_monotonicity(game, notion)
            if witness:
                payload = {"kind": "lem.mono", "game": game, "notion": notion, "witness": witness}
                return _report("lem.mono", checked, True, payload, seed, started)

    from .optimality import _holds_cached

    for k in range(large_samples):
        game = generate_game(
            _suite_config(seed + k, "belief", players=(2, 3), strategies=(2, 3))
        )
        checked += 1
        joints_of = [
            tuple(itertools.product(*[c for j, c in enumerate(game.strategies) if j != i]))
            for i in range(game.n)
        ]
        for i in range(game.n):
            joints = joints_of[i]
            pairs = []
            for _ in range(4):
                big = tuple(t for t in joints if rng.random() < 0.7)
                small = tuple(t for t in big if rng.random() < 0.6)
                pairs.append((small, big))
            for notion in notions:
                for s in game.strategies[i]:
                    for small, big in pairs:
                        if _holds_cached(
                            notion, game, i, s, game.strategies[i], small
                        ) and not _holds_cached(
                            notion, game, i, s, game.strategies[i], big
                        ):
                            payload = {
                                "kind": "lem.mono",
                                "game": game,
                                "notion": notion,
                                "witness": (i, s, small, big),
                            }
                            return _report("lem.mono", checked, True, payload, seed, started)
    return _report("lem.mono", checked, False, None, seed, started)


# --- replay -----------------------------------------------------------------------

def replay(report: VerificationReport) -> bool:
    """Re-run the single instance recorded in a counterexample payload;
    returns True when the violation reproduces."""
    payload = report.counterexample
    if payload is None:
        return False
    kind = payload["kind"]
    if kind == "thm1.i":
        return not verify_thm1i(payload["game"], payload["model"], payload["profile"]).holds
    if kind == "thm1.ii":
        return not verify_thm1ii(payload["game"], payload["model"], payload["profile"]).holds
    if kind == "thm1.iii":
        return not verify_thm1iii(payload["game"], payload["profile"]).holds
    if kind == "thm2":
        return not verify_thm2(payload["game"], payload["profile"], payload["joint"]).holds
    if kind == "cor1":
        return not verify_cor1(payload["game"], payload["model"]).holds
    if kind == "cor2":
        return not verify_cor2(payload["game"], payload["model"], payload["belief_class"]).holds
    if kind == "pearce":
        game = payload["game"]
        restriction = payload["restriction"]
        brc = NotionProfile.uniform(Notion.BR_CORRELATED, game.n)
        msd = NotionProfile.uniform(Notion.MSD, game.n)
        return u_local(brc, game, restriction) != u_local(msd, game, restriction)
    if kind == "lem.mono":
        game, notion = payload["game"], payload["notion"]
        i, s, small, big = payload["witness"]
        return holds(notion, game, i, s, game.strategies[i], small) and not holds(
            notion, game, i, s, game.strategies[i], big
        )
    if kind == "lem.inc":
        op_report = payload["report"]
        return not (op_report.conclusion_holds and op_report.monotonicity.passed)
    raise ValidationError(f"unknown payload kind {kind!r}")
