"""Command line entry points: serve, chat, simulate, check."""

from __future__ import annotations

import argparse
import sys

from .config import build_engine, configure_logging


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="tourdesk", description="travel counter dialogue engine")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the chat service")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--config", default=None)
    serve.add_argument("--ui", default=None, help="directory with a built web UI to mount at /ui")

    chat = sub.add_parser("chat", help="terminal chat")
    chat.add_argument("--config", default=None)
    chat.add_argument("--language", default=None)
    chat.add_argument("--show-das", action="store_true", help="print DA lists and cues")

    simulate = sub.add_parser("simulate", help="run a scripted dialogue")
    simulate.add_argument("--script", required=True)
    simulate.add_argument("--seed", type=int, default=None)
    simulate.add_argument("--config", default=None)

    check = sub.add_parser("check", help="validate shipped assets and template coverage")
    check.add_argument("--config", default=None)

    args = parser.parse_args(argv)
    configure_logging()

    if args.command == "serve":
        return _serve(args)
    if args.command == "chat":
        return _chat(args)
    if args.command == "simulate":
        return _simulate(args)
    return _check(args)


def _serve(args) -> int:
    import uvicorn

    from .server import create_app

    engine = build_engine(args.config)
    app = create_app(engine, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _chat(args) -> int:
    from .dst import FlowPhase

    overrides = {"language": args.language} if args.language else {}
    engine = build_engine(args.config, **overrides)
    session = engine.open_session()
    record = engine.run_turn(session, "")
    _print_turn(record, args.show_das)
    while session.state.phase is not FlowPhase.DONE:
        try:
            line = input("you> ")
        except EOFError:
            print()
            break
        record = engine.run_turn(session, line)
        _print_turn(record, args.show_das)
    print("(session over)")
    return 0


def _print_turn(record, show_das: bool) -> None:
    print(f"bot> {record.system_utterance}")
    if show_das:
        from .da import serialize_da_list

        cues = ", ".join(
            f"{c.intent}[during {c.during.expression}/{c.during.motion}, "
            f"after {c.after.expression}/{c.after.motion}]"
            for c in record.cues
        )
        print(f"   das: {serialize_da_list(record.system_das)}")
        print(f"   cues: {cues}")


def _simulate(args) -> int:
    from .engine import load_script

    engine = build_engine(args.config, **({"seed": args.seed} if args.seed is not None else {}))
    script = load_script(args.script, engine.assets.ontology)
    report = engine.simulate(script)
    for step in report.steps:
        status = "ok" if step.ok else f"EXPECTED {list(step.expected)}"
        print(f"step {step.index:2d} [{step.kind:9s}] -> {', '.join(step.system_intents)} ({status})")
        print(f"        {step.system_utterance}")
    print(f"final phase: {report.final_phase.value}; customer turns: {report.customer_turns}")
    if not report.ok:
        print(f"{len(report.failures)} expectation failure(s)", file=sys.stderr)
        return 1
    return 0


def _check(args) -> int:
    from .nlg import coverage_check, decision_shapes
    from .policy import reachable_decisions

    try:
        engine = build_engine(args.config)
    except Exception as exc:
        print(f"asset loading failed: {exc}", file=sys.stderr)
        return 1
    shapes = decision_shapes(reachable_decisions(engine.assets.db, engine.config.policy_config()))
    gaps = coverage_check(engine.assets.templates, shapes)
    print(f"ontology: {len(engine.assets.ontology.intents)} intents, "
          f"{len(engine.assets.ontology.slots)} slots")
    print(f"lexicon: {len(engine.assets.matcher.entries)} entries; "
          f"corpus: {len(engine.assets.matcher.corpus_index)} pairs")
    print(f"attractions: {', '.join(engine.assets.db.names())}")
    print(f"reachable DA shapes: {len(shapes)}; languages: {sorted(engine.assets.templates.languages)}")
    if gaps:
        for intent, slots, language in gaps:
            print(f"MISSING template: {intent}({', '.join(sorted(slots))}) [{language}]", file=sys.stderr)
        return 1
    print("template coverage: OK")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
