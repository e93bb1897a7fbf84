"""Command-line entry points: run, eval, train, serve."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bundled import bundled_path, load_demo_glosses, load_demo_spec
from .dialogue import load_glosses, sentence_paraphrase
from .engine import (
    InteractiveAnswerer,
    OracleAnswerer,
    evaluate_corpus,
    format_eval_table,
    format_transcript,
    run_session,
    train_offline,
)
from .fstruct import print_fs, read_fs
from .hypgen import META, POLICY_NAMES, RepairConfig, RepairNetworks
from .ilspec import SpecError, load_spec
from .minet import ModelFormatError
from .repairmem import read_records
from .sexpr import ParseError


def _load_spec(path):
    if path is None:
        return load_demo_spec()
    return load_spec(Path(path).read_text(encoding="utf-8"))


def _load_glosses(path):
    if path is None:
        return load_demo_glosses()
    return load_glosses(Path(path).read_text(encoding="utf-8"))


def _load_networks(path, spec):
    if path is None:
        default = bundled_path("demo.model")
        if default.exists():
            return RepairNetworks.load(default.read_bytes())
        return RepairNetworks.fresh(spec)
    return RepairNetworks.load(Path(path).read_bytes())


def _read_corpus(path):
    return read_records(Path(path).read_text(encoding="utf-8"))


def _parse_budgets(text):
    try:
        budgets = tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad budget list {text!r}")
    if not budgets or any(b < 0 for b in budgets):
        raise argparse.ArgumentTypeError(f"bad budget list {text!r}")
    return budgets


def _parse_policies(text):
    names = tuple(part.strip() for part in text.split(",") if part.strip() != "")
    for name in names:
        if name not in POLICY_NAMES:
            raise argparse.ArgumentTypeError(
                f"unknown policy {name!r}; choose from {', '.join(POLICY_NAMES)}"
            )
    if not names:
        raise argparse.ArgumentTypeError("empty policy list")
    return names


def cmd_run(args) -> int:
    spec = _load_spec(args.spec)
    nets = _load_networks(args.model, spec)
    glosses = _load_glosses(args.glosses)
    config = RepairConfig(max_questions=args.max_questions)
    records = _read_corpus(args.record_file)

    for i, record in enumerate(records, start=1):
        if args.interactive:
            answerer = InteractiveAnswerer()
            gold = record.gold
        else:
            gold = record.gold
            if args.gold is not None:
                gold = read_fs(Path(args.gold).read_text(encoding="utf-8"))
            if gold is None:
                print(
                    f"error: record {i} has no gold structure; "
                    "pass --gold or use --interactive",
                    file=sys.stderr,
                )
                return 2
            answerer = OracleAnswerer(gold, spec)
        result = run_session(
            record.output,
            spec,
            nets,
            answerer,
            config,
            policy=args.policy,
            glosses=glosses,
            gold=gold,
        )
        print(f"record {i}: {' '.join(record.output.utterance)}")
        if result.transcript:
            print(format_transcript(result.transcript))
        print(f"final: {print_fs(result.final_ilt)}")
        print(f"paraphrase: {sentence_paraphrase(result.final_ilt, glosses)}")
        if result.accuracy_before is not None:
            print(
                f"accuracy: {result.accuracy_before:.4f} -> "
                f"{result.accuracy_after:.4f}"
            )
        print(f"questions: {result.questions_used}")
        if i < len(records):
            print()
    return 0


def cmd_eval(args) -> int:
    spec = _load_spec(args.spec)
    nets = _load_networks(args.model, spec)
    records = _read_corpus(args.corpus)
    rows = evaluate_corpus(
        records,
        spec,
        nets,
        budgets=args.budgets,
        policies=args.policies,
        persistent=args.persistent,
        config=RepairConfig(),
    )
    table = format_eval_table(rows)
    if args.out is not None:
        Path(args.out).write_text(table, encoding="utf-8")
    else:
        print(table, end="")
    return 0


def cmd_train(args) -> int:
    spec = _load_spec(args.spec)
    if args.model is not None:
        nets = RepairNetworks.load(Path(args.model).read_bytes())
    else:
        nets = RepairNetworks.fresh(spec, lam=args.smoothing_lambda)
    records = _read_corpus(args.corpus)
    trained = train_offline(records, spec, nets)
    Path(args.model_out).write_bytes(nets.save())
    print(f"trained on {trained} records -> {args.model_out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    spec = _load_spec(args.spec)
    nets = _load_networks(args.model, spec)
    glosses = _load_glosses(args.glosses)
    app = create_app(
        spec, nets, glosses, RepairConfig(max_questions=args.max_questions)
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repair",
        description="Interactive repair of fragmented semantic parser output.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="repair the records in a file, one session each")
    run.add_argument("record_file")
    mode = run.add_mutually_exclusive_group()
    mode.add_argument(
        "--interactive",
        action="store_true",
        help="answer the questions yourself on the console",
    )
    mode.add_argument("--gold", help="answer from a gold structure file")
    run.add_argument("--spec", help="interlingua spec file (default: bundled)")
    run.add_argument("--model", help="network model file (default: bundled)")
    run.add_argument("--glosses", help="gloss table file (default: bundled)")
    run.add_argument("--max-questions", type=int, default=10)
    run.add_argument("--policy", choices=POLICY_NAMES, default=META)
    run.set_defaults(func=cmd_run)

    ev = sub.add_parser("eval", help="evaluate all question policies over a corpus")
    ev.add_argument("corpus")
    ev.add_argument("--spec", help="interlingua spec file (default: bundled)")
    ev.add_argument("--model", help="network model file (default: bundled)")
    ev.add_argument("--budgets", type=_parse_budgets, default=(0, 5, 10, 25))
    ev.add_argument("--policies", type=_parse_policies, default=POLICY_NAMES)
    ev.add_argument("--out", help="write the table here instead of stdout")
    ev.add_argument(
        "--persistent",
        action="store_true",
        help="let reinforcement carry across records within a cell",
    )
    ev.set_defaults(func=cmd_eval)

    tr = sub.add_parser("train", help="train networks offline from gold records")
    tr.add_argument("corpus")
    tr.add_argument("--spec", help="interlingua spec file (default: bundled)")
    tr.add_argument("--model", help="warm-start model file")
    tr.add_argument("--model-out", required=True)
    tr.add_argument("--smoothing-lambda", type=float, default=0.5)
    tr.set_defaults(func=cmd_train)

    sv = sub.add_parser("serve", help="serve repair sessions over HTTP")
    sv.add_argument("--port", type=int, default=8470)
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--spec", help="interlingua spec file (default: bundled)")
    sv.add_argument("--model", help="network model file (default: bundled)")
    sv.add_argument("--glosses", help="gloss table file (default: bundled)")
    sv.add_argument("--max-questions", type=int, default=10)
    sv.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ParseError, SpecError, ModelFormatError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
