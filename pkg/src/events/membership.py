#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Quantum membership and witness functional command handlers."""

import argparse
import json

from constants import EXIT_OK
from core.domain import BwiAssemblage, MdiAssemblage
from core.exceptions import InvalidOperatorError
from events.base import BaseEventHandler, exit_code, handle_errors
from managers.functional import FunctionalManager, make_sptp, sptp_support_check
from managers.membership import certify

FUNCTIONALS = {"sptp": make_sptp}


class MembershipEvents(BaseEventHandler):
    """Commands certifying post-quantumness of MDI and Bob-with-input assemblages."""

    def register(self, subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser):
        """Add `membership` and `functional`."""
        membership = subparsers.add_parser(
            "membership", parents=[common], help="level-1 quantum membership of an MDI assemblage"
        )
        membership.add_argument("source", help="JSON file or catalog entry")
        membership.add_argument("--json", action="store_true", help="print a JSON summary")
        membership.add_argument(
            "--no-optional-relations",
            dest="optional_relations",
            action="store_false",
            help="drop the projective relations on Bob's side",
        )
        membership.set_defaults(handler=self._on_membership)

        functional = subparsers.add_parser(
            "functional", parents=[common], help="evaluate a witness functional"
        )
        functional.add_argument("--name", choices=sorted(FUNCTIONALS), default="sptp")
        functional.add_argument("source", help="JSON file or catalog entry")
        functional.set_defaults(handler=self._on_functional)

    @handle_errors
    def _on_membership(self, args: argparse.Namespace) -> int:
        """Print the membership verdict."""
        entry = self.load(args.source)
        if not isinstance(entry, MdiAssemblage):
            raise InvalidOperatorError(f"{args.source} is not an MDI assemblage")
        result = certify(entry, self.context.feasibility, args.optional_relations)
        if args.json:
            self.emit(json.dumps(result.to_dict(), indent=2))
        else:
            self.emit(result.verdict.value)
        return exit_code(result.verdict)

    @handle_errors
    def _on_functional(self, args: argparse.Namespace) -> int:
        """Print the value and whether the assemblage sits on the zero set of S_PTP."""
        entry = self.load(args.source)
        if not isinstance(entry, BwiAssemblage):
            raise InvalidOperatorError(f"{args.source} is not a Bob-with-input assemblage")
        functional = FUNCTIONALS[args.name](entry.n_a, entry.n_x, entry.n_y)
        value = FunctionalManager().evaluate(functional, entry)
        self.emit(f"{functional.name} = {value:.12g}")
        self.emit(f"support check: {'pass' if sptp_support_check(entry) else 'fail'}")
        return EXIT_OK
