import argparse
import json

from app.cli.handlers.common import EXIT_OK
from app.core.schemas import InstanceFile, SolutionFile

MODELS = {"instance": InstanceFile, "solution": SolutionFile}


def register(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("schema", help="print the JSON schema of a file format")
    p.add_argument("format", choices=sorted(MODELS))
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    print(json.dumps(MODELS[args.format].model_json_schema(), indent=2))
    return EXIT_OK
