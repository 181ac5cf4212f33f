#!/usr/bin/env python3
"""
Main entry point for clanroute.

Subcommands build clan embeddings, multiplicative-weights distributions,
routing simulations and verification artifacts. Exit status is 0 on
success, 1 on invalid input and 2 when a proven inequality fails.
"""

import argparse
import logging
import sys
from typing import NoReturn

from pydantic import ValidationError

from src.commands.factory import CommandFactory
from src.utils.config import Config
from src.utils.errors import ClanRouteError, InequalityViolation, InputError
from src.utils.logging_setup import setup_logging

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors raise InputError instead of exiting 2."""

    def error(self, message: str) -> NoReturn:
        raise InputError(f"{self.prog}: {message}")


def _add_mode(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, help="Distortion parameter (integer >= 1)")
    parser.add_argument("--eps", type=float, help="Copy parameter in (0, 1]")


def _add_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", help="Edge-list graph file")
    parser.add_argument("--metric", help="Dense CSV distance table")


def build_parser() -> argparse.ArgumentParser:
    """Parser with global flags and one subparser per command."""
    common = _Parser(add_help=False)
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Set the logging level",
    )
    common.add_argument("--log-file", help="Log file path (optional)")
    common.add_argument("--env-file", help="Environment file path")
    common.add_argument("--threads", type=int, help="Worker threads")
    common.add_argument("--seed", type=int, help="Root 64-bit seed")
    common.add_argument("--out", help="Output path (stdout when omitted)")
    common.add_argument("--verify", action="store_true", default=None, help="Assert every bound")

    parser = _Parser(
        prog="clanroute",
        description="Clan embeddings, spanning clan trees and compact routing",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed-ultra", parents=[common], help="Ultrametric clan embedding")
    _add_source(p)
    _add_mode(p)
    p.add_argument("--measure", help="Measure file of 'id value' lines")
    p.add_argument("--measure-kind", choices=["ge1", "probability"])
    p.add_argument("--variant", choices=["standard", "balanced"])

    p = sub.add_parser("embed-span", parents=[common], help="Spanning clan embedding")
    p.add_argument("--graph", required=True, help="Edge-list graph file")
    _add_mode(p)
    p.add_argument("--measure", help="Probability measure file")
    p.add_argument("--root", type=int, help="Root vertex (default 0)")

    p = sub.add_parser("build-dist", parents=[common], help="MWU embedding distribution")
    _add_source(p)
    _add_mode(p)
    p.add_argument("--slack", type=float, required=True, help="Additive slack in (0, 1/2)")
    p.add_argument("--host", choices=["ultra", "span"])
    p.add_argument("--variant", choices=["standard", "balanced"])
    p.add_argument("--root", type=int, help="Root vertex of the spanning oracle")
    p.add_argument("--max-rounds", type=int, help="Refuse larger round counts")
    p.add_argument("--log-weights", help="CSV path for the per-round measures")

    p = sub.add_parser("sample", parents=[common], help="Draw from a distribution")
    p.add_argument("--dist", required=True, help="Distribution JSON")

    p = sub.add_parser("route-sim", parents=[common], help="Compact routing simulation")
    p.add_argument("--graph", required=True, help="Edge-list graph file")
    _add_mode(p)
    p.add_argument("--labels", choices=["exact", "approx2"])
    p.add_argument("--pairs", help="'all' or a number of sampled pairs")
    p.add_argument("--samples", type=int, help="Independent embedding samples")

    p = sub.add_parser("gen-girth", parents=[common], help="High-girth instance")
    p.add_argument("--kind", choices=["dense", "epsilon"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--retries", type=int)

    p = sub.add_parser("verify", parents=[common], help="Check a stored embedding")
    _add_source(p)
    p.add_argument("--emb", required=True, help="Embedding JSON")
    p.add_argument("--bound", type=float, required=True, help="Distortion bound")

    p = sub.add_parser("path-dist", parents=[common], help="Path distortion of a sequence")
    p.add_argument("--emb", required=True, help="Embedding JSON")
    p.add_argument("--seq", required=True, help="Whitespace-separated point ids")
    _add_source(p)

    return parser


def dispatch(argv: list[str]) -> int:
    """Run one subcommand and return its exit status."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    except InputError as e:
        sys.stderr.write(e.one_line() + "\n")
        return EXIT_INPUT

    logger = logging.getLogger(__name__)
    try:
        config = Config(args.env_file)
        setup_logging(args.log_level or config.log_level, args.log_file or config.log_file)
        data = {key: value for key, value in vars(args).items() if value is not None}
        data.setdefault("seed", config.default_seed)
        data.setdefault("threads", config.threads)
        data.setdefault("verify", config.verify)
        data.setdefault("max_rounds", config.max_rounds)
        data.setdefault("retries", config.girth_retries)
        command = CommandFactory.create_command(data, config)
        logger.info(f"Running {args.command}")
        command.run()
    except InequalityViolation as e:
        sys.stderr.write(e.one_line() + "\n")
        return EXIT_VIOLATION
    except ValidationError as e:
        sys.stderr.write(InputError(str(e).splitlines()[0]).one_line() + "\n")
        return EXIT_INPUT
    except ClanRouteError as e:
        sys.stderr.write(e.one_line() + "\n")
        return EXIT_INPUT
    return EXIT_OK


def run() -> None:
    """Console script entry point."""
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    run()
