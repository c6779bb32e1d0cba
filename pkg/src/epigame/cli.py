"""Command-line interface.

Exit codes: 0 when the requested verdict holds (or the command simply
succeeded), 1 when a counterexample was found, 2 on input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import verify as verify_mod
from .elimination import GLOBAL, LOCAL, NotionProfile, outcome
from .epistemic import (
    common_box,
    parse_model,
    rat_event,
    render_model,
    validation_report,
)
from .errors import EngineError, HypothesisNotMet
from .games import (
    Game,
    MixedStrategy,
    parse_game,
    render_game,
    render_restriction,
)
from .generators import GeneratorConfig, generate_game, generate_model
from .lattice import EliminationTrace
from .optimality import Notion
from .verify import VerificationReport


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise EngineError(f"cannot read {path}: {exc}") from exc


def _load_game(path: str) -> Game:
    return parse_game(_read(path))


def _render_witness(witness) -> str:
    if witness is None:
        return "-"
    if isinstance(witness, MixedStrategy):
        return str(witness)
    if isinstance(witness, str):
        return witness
    if isinstance(witness, tuple):
        return ";".join(
            f"({','.join(t)})->{reply}" for t, reply in witness
        )
    return str(witness)


def render_trace(trace: EliminationTrace, mode: str, profile: NotionProfile) -> str:
    """Line-oriented dump of a full elimination run, stable field order."""
    lines = [
        f"operator: {trace.operator}",
        f"mode: {mode}",
        f"profile: {profile}",
        f"stabilized_at: {trace.stabilized_at}",
    ]
    for k, stage in enumerate(trace.stages):
        for i, component in enumerate(stage.components):
            lines.append(f"stage {k} restrict {i + 1}: " + " ".join(component))
    for record in trace.records:
        lines.append(
            f"eliminate stage={record.stage} player={record.player + 1} "
            f"strategy={record.strategy} reason={record.reason} "
            f"witness={_render_witness(record.witness)}"
        )
    for i, component in enumerate(trace.outcome.components):
        lines.append(f"outcome restrict {i + 1}: " + " ".join(component))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def render_report(report: VerificationReport) -> str:
    lines = [
        f"claim: {report.claim}",
        f"instances: {report.instances_checked}",
        f"verdict: {report.verdict}",
    ]
    if report.seed is not None:
        lines.append(f"seed: {report.seed}")
    for note in report.notes:
        lines.append(f"note: {note}")
    payload = report.counterexample
    if payload:
        for key in sorted(payload):
            if key == "kind":
                continue
            value = payload[key]
            if isinstance(value, Game):
                for line in render_game(value).rstrip().splitlines():
                    lines.append(f"counterexample {key}: {line}")
            elif value.__class__.__name__ == "EpistemicModel":
                for line in render_model(value).rstrip().splitlines():
                    lines.append(f"counterexample {key}: {line}")
            elif value.__class__.__name__ == "Restriction":
                for line in render_restriction(value).rstrip().splitlines():
                    lines.append(f"counterexample {key}: {line}")
            elif isinstance(value, frozenset):
                lines.append(f"counterexample {key}: " + " ".join(sorted(value)))
            else:
                lines.append(f"counterexample {key}: {value}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epigame",
        description="Exact iterated elimination and epistemic analysis of finite games.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    eliminate = commands.add_parser("eliminate", help="iterate an elimination operator")
    eliminate.add_argument("--game", required=True, metavar="FILE")
    eliminate.add_argument("--notion", required=True, help="one notion or a comma list per player")
    eliminate.add_argument("--mode", choices=[GLOBAL, LOCAL], default=LOCAL)
    eliminate.add_argument("--trace", action="store_true", help="print every stage")
    eliminate.add_argument("--dump", metavar="FILE", help="write the structured trace dump")

    epistemic = commands.add_parser("epistemic", help="evaluate events on a model")
    epistemic.add_argument("--game", required=True, metavar="FILE")
    epistemic.add_argument("--model", required=True, metavar="FILE")
    epistemic.add_argument("--profile", default="sd", help="one notion or a comma list")
    epistemic.add_argument("action", choices=["rat", "commonbox", "validate"])
    epistemic.add_argument("event", nargs="?", help="comma-separated states (for commonbox)")

    verify = commands.add_parser("verify", help="check a claim or run its random suite")
    verify.add_argument(
        "claim",
        choices=[
            "thm1i",
            "thm1ii",
            "thm1iii",
            "thm2",
            "cor1",
            "cor2",
            "pearce",
            "lemma-inc",
            "monotonicity",
        ],
    )
    verify.add_argument("--game", metavar="FILE")
    verify.add_argument("--model", metavar="FILE")
    verify.add_argument("--profile", help="one notion or a comma list")
    verify.add_argument("--joint", help="comma-separated joint strategy (thm2)")
    verify.add_argument("--belief-class", choices=["point", "independent", "correlated"],
                        default="correlated")
    verify.add_argument("--samples", type=int, default=300)
    verify.add_argument("--seed", type=int, default=0)

    generate = commands.add_parser("generate", help="emit a random game or model")
    kind = generate.add_subparsers(dest="kind", required=True)
    gen_game = kind.add_parser("game")
    gen_game.add_argument("--seed", type=int, required=True)
    gen_game.add_argument("--players", type=int, nargs=2, default=(2, 2), metavar=("LO", "HI"))
    gen_game.add_argument("--strategies", type=int, nargs=2, default=(2, 3), metavar=("LO", "HI"))
    gen_model = kind.add_parser("model")
    gen_model.add_argument("--seed", type=int, required=True)
    gen_model.add_argument("--game", required=True, metavar="FILE")
    gen_model.add_argument("--states", type=int, nargs=2, default=(2, 6), metavar=("LO", "HI"))
    gen_model.add_argument("--class", dest="target_class",
                           choices=["belief", "knowledge"], default="knowledge")
    return parser


def _cmd_eliminate(args) -> int:
    game = _load_game(args.game)
    profile = NotionProfile.parse(args.notion, game.n)
    trace = outcome(profile, game, args.mode)
    dump = render_trace(trace, args.mode, profile)
    if args.dump:
        Path(args.dump).write_text(dump, encoding="utf-8")
    if args.trace:
        print(dump, end="")
    else:
        print(render_restriction(trace.outcome), end="")
        print(f"stabilized_at: {trace.stabilized_at}")
    return 0


def _cmd_epistemic(args) -> int:
    game = _load_game(args.game)
    model = parse_model(_read(args.model), game)
    if args.action == "validate":
        print(validation_report(model), end="")
        return 0
    if model.model_class == "invalid":
        # diagnose which of the correspondence properties failed
        print(validation_report(model), end="", file=sys.stderr)
    profile = NotionProfile.parse(args.profile, game.n)
    if args.action == "rat":
        event = rat_event(model, profile)
        print("rat: " + " ".join(s for s in model.space.states if s in event))
        return 0
    if args.event is None:
        raise EngineError("commonbox needs an event argument (comma-separated states)")
    requested = frozenset(s for s in args.event.split(",") if s)
    stable = common_box(model, requested)
    print("commonbox: " + " ".join(s for s in model.space.states if s in stable))
    return 0


def _profile_for(args, game: Game) -> NotionProfile:
    if not args.profile:
        raise EngineError(f"verify {args.claim} needs --profile")
    return NotionProfile.parse(args.profile, game.n)


def _cmd_verify(args) -> int:
    claim = args.claim
    game = _load_game(args.game) if args.game else None
    model = None
    if args.model:
        if game is None:
            raise EngineError("--model needs --game")
        model = parse_model(_read(args.model), game)

    if claim in ("thm1i", "thm1ii"):
        if game is not None and model is not None:
            check = verify_mod.verify_thm1i if claim == "thm1i" else verify_mod.verify_thm1ii
            report = check(game, model, _profile_for(args, game), seed=args.seed)
        else:
            notions = (
                [Notion(args.profile)] if args.profile else
                [Notion.SD, Notion.MSD, Notion.BR_POINT, Notion.BR_CORRELATED]
            )
            report = None
            for notion in notions:
                report = verify_mod.thm1_suite(notion, args.samples, seed=args.seed)
                if not report.holds:
                    break
    elif claim == "thm1iii":
        if game is not None:
            report = verify_mod.verify_thm1iii(game, _profile_for(args, game), seed=args.seed)
        else:
            report = verify_mod.thm1iii_suite(args.samples, seed=args.seed)
    elif claim == "thm2":
        if game is None:
            raise EngineError("verify thm2 needs --game")
        profile = _profile_for(args, game)
        if args.joint:
            joint = tuple(args.joint.split(","))
            try:
                report = verify_mod.verify_thm2(game, profile, joint, seed=args.seed)
            except HypothesisNotMet as exc:
                print(f"hypothesis not met: {exc}", file=sys.stderr)
                return 2
        else:
            report = verify_mod.search_thm2(game, profile, seed=args.seed)
    elif claim in ("cor1", "cor2"):
        if game is not None and model is not None:
            if claim == "cor1":
                report = verify_mod.verify_cor1(game, model, seed=args.seed)
            else:
                report = verify_mod.verify_cor2(game, model, args.belief_class, seed=args.seed)
        else:
            report = verify_mod.cor_suite(claim, args.samples, seed=args.seed,
                                          belief_class=args.belief_class)
    elif claim == "pearce":
        report = verify_mod.pearce_suite(args.samples, seed=args.seed)
    elif claim == "lemma-inc":
        report = verify_mod.lemma_inc_suite(args.samples, seed=args.seed)
    else:  # monotonicity
        if game is not None:
            for notion in (Notion.SD, Notion.MSD, Notion.BR_POINT, Notion.BR_CORRELATED):
                witness = verify_mod.check_predicate_monotonicity(game, notion)
                if witness:
                    print(f"claim: lem.mono\nverdict: counterexample\nnotion: {notion}")
                    print(f"witness: {witness}")
                    return 1
            weak_witnesses = verify_mod.find_predicate_nonmonotonicity(game, Notion.WD)
            print("claim: lem.mono\nverdict: holds-on-all")
            print(f"note: wd non-monotonicity witnesses on this game: {len(weak_witnesses)}")
            return 0
        report = verify_mod.monotonicity_suite(
            small_samples=args.samples, large_samples=max(1, args.samples // 5), seed=args.seed
        )

    print(render_report(report), end="")
    return 0 if report.holds else 1


def _cmd_generate(args) -> int:
    if args.kind == "game":
        config = GeneratorConfig(
            seed=args.seed,
            players=tuple(args.players),
            strategies=tuple(args.strategies),
        )
        print(render_game(generate_game(config)), end="")
        return 0
    game = _load_game(args.game)
    config = GeneratorConfig(
        seed=args.seed,
        states=tuple(args.states),
        target_class=args.target_class,
    )
    print(render_model(generate_model(config, game)), end="")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eliminate":
            return _cmd_eliminate(args)
        if args.command == "epistemic":
            return _cmd_epistemic(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_generate(args)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
