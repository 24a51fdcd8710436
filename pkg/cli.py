import argparse
import json
import logging
import sys

from src.homkernel.config import FIELD_CHOICES, load_config
from src.homkernel.errors import UnknownExampleId
from src.homkernel.fields import FieldDescriptor
from src.homkernel.journal import ReproduceJournal
from src.homkernel.reporting import emit
from src.homkernel.reproduce import REGISTRY, reproduce, reproduce_all
from src.homkernel.script import run_file


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homkernel", description="Graded module computations and homological checks")
    parser.add_argument("--config", default="config.json")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run")
    run.add_argument("file")
    run.add_argument("--json", action="store_true")
    run.add_argument("--field", choices=FIELD_CHOICES)
    run.add_argument("--res-bound", type=int)

    repro = subparsers.add_parser("reproduce")
    repro.add_argument("example_id", help="registered id or 'all'")
    repro.add_argument("--json", action="store_true")
    repro.add_argument("--no-journal", action="store_true")

    subparsers.add_parser("list")

    history = subparsers.add_parser("history")
    history.add_argument("--limit", type=int, default=20)

    return parser


def main() -> None:
    parser = build_parser()
    args = parser.parse_args()
    config = load_config(args.config)
    logging.basicConfig(
        level=getattr(logging, str(config["logging"]["level"]).upper(), logging.WARNING),
        format="%(asctime)s | %(levelname)s | %(message)s",
    )

    if args.command == "run":
        if args.res_bound is not None:
            config["kernel"]["resolution_bound"] = args.res_bound
        field = FieldDescriptor.from_tag(args.field) if args.field else None
        document = run_file(args.file, config, field_override=field)
        sys.stdout.buffer.write(emit(document, "json" if args.json else "text"))
        sys.exit(document["exit_code"])

    if args.command == "reproduce":
        journal = None if args.no_journal else ReproduceJournal(config["database_path"])
        try:
            if args.example_id == "all":
                document = reproduce_all(config, journal)
            else:
                document = reproduce(args.example_id, config, journal)
        except UnknownExampleId as exc:
            print(json.dumps({"error": str(exc)}, indent=2))
            sys.exit(2)
        sys.stdout.buffer.write(emit(document, "json" if args.json else "text"))
        sys.exit(document["exit_code"])

    if args.command == "list":
        print(json.dumps({case_id: case.description for case_id, case in REGISTRY.items()}, indent=2))
        return

    if args.command == "history":
        journal = ReproduceJournal(config["database_path"])
        print(json.dumps({"stats": journal.stats(), "runs": journal.recent_runs(args.limit)}, indent=2))
        return


if __name__ == "__main__":
    main()
