"""Exact engine for iterated strategy elimination and epistemic game analysis."""

from .elimination import (
    GLOBAL,
    LOCAL,
    NotionProfile,
    operator,
    outcome,
    t_global,
    u_local,
)
from .epistemic import (
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
    two_block_model,
    validation_report,
)
from .errors import (
    BudgetExceeded,
    EmptyOpponentSet,
    EmptyStateSpace,
    EmptySupport,
    EngineError,
    HypothesisNotMet,
    InvalidModel,
    IterationBudgetExceeded,
    NonContractingStep,
    NonMonotonicProfile,
    ParseError,
    PremiseViolated,
    UnsupportedNotion,
    ValidationError,
)
from .games import (
    Belief,
    CorrelatedBelief,
    Game,
    IndependentBelief,
    JointStrategy,
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
)
from .generators import GeneratorConfig, generate_game, generate_model
from .lattice import (
    EliminationRecord,
    EliminationTrace,
    InclusionLemmaReport,
    MonotonicityReport,
    RestrictionOperator,
    check_inclusion_lemma,
    enumerate_restrictions,
    iterate_to_outcome,
    largest_fixpoint_bruteforce,
    probe_monotonicity,
)
from .optimality import (
    BestResponseVerdict,
    DominanceVerdict,
    Notion,
    holds,
    solve_br_lp,
    solve_dominance_lp,
)
from .simplex import Constraint, LinearProgram, LPSolution, Relation, Status, solve
from .verify import (
    VerificationReport,
    replay,
    search_thm2,
    verify_cor1,
    verify_cor2,
    verify_thm1i,
    verify_thm1ii,
    verify_thm1iii,
    verify_thm2,
)

__all__ = [name for name in dir() if not name.startswith("_")]
