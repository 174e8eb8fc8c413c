#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Command line entry point of the LOSR engine."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from constants import EXIT_ERROR, EXIT_OK
from core.config import load_config
from core.context import Context
from core.enums import SolverBackend
from core.exceptions import ConfigurationError
from events.assemblage import AssemblageEvents
from events.conversion import ConversionEvents
from events.membership import MembershipEvents
from utils.logging import configure_logging, levels

logger = logging.getLogger(__name__)

HANDLERS = (AssemblageEvents, ConversionEvents, MembershipEvents)


def common_parser() -> argparse.ArgumentParser:
    """Options shared by every sub-command; unset values fall back to config.yaml."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="alternative config.yaml option schema")
    common.add_argument("--eps-feas", type=float, help="feasibility tolerance")
    common.add_argument("--seed", type=int, help="seed of the free sampler")
    common.add_argument("--jobs", type=int, help="concurrent conversions, 0 for all cores")
    common.add_argument("--solvers", help="comma separated cvxpy solvers, tried in order")
    common.add_argument("--backend", choices=[backend.value for backend in SolverBackend])
    common.add_argument("--dump-sdp", type=Path, help="write every phase-1 program here")
    common.add_argument("--log-level", choices=list(levels))
    return common


def main(argv: Sequence[str] | None = None) -> int:
    """Parse `argv`, run the selected sub-command and return its exit code."""
    parser = argparse.ArgumentParser(
        prog="losr", description="Decide LOSR conversions between quantum assemblages."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = common_parser()

    # Handlers need a context before registering, the real one is bound after parsing.
    handlers = [handler(None) for handler in HANDLERS]
    for handler in handlers:
        handler.register(subparsers, common)

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_ERROR

    try:
        config = load_config(
            args.config,
            eps_feas=args.eps_feas,
            seed=args.seed,
            jobs=args.jobs,
            solvers=args.solvers,
            backend=args.backend,
            log_level=args.log_level,
        )
    except (ConfigurationError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR

    configure_logging(config.log_level)
    if args.dump_sdp:
        args.dump_sdp.mkdir(parents=True, exist_ok=True)
    context = Context(config, args.dump_sdp)
    for handler in handlers:
        handler.context = context

    logger.debug(f"running {args.command} with {config}")
    return args.handler(args)


if __name__ == "__main__":  # pragma: nocover
    sys.exit(main())
