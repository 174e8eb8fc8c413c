#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Free-set, conversion and pre-order command handlers."""

import argparse
from pathlib import Path

from config.dot import DotGraph
from constants import B, B_IN, B_OUT, EXIT_ERROR, R_FAMILY
from core.domain import Assemblage, BoxDistribution
from core.enums import AssemblageKind, FeasibilityStatus
from core.exceptions import InvalidOperatorError
from events.base import BaseEventHandler, exit_code, handle_errors
from managers.catalog import AXIS_INDEX, CatalogEntry
from managers.conversion import build_conversion
from managers.free import free_test_for, sample_free
from managers.preorder import Node, PreorderManager

SAMPLE_ALPHABETS = {
    AssemblageKind.CHANNEL: ({"A": 2, "X": 2}, {B_IN: 2, B_OUT: 2}),
    AssemblageKind.BWI: ({"A": 2, "X": 2, "Y": 2}, {B: 2}),
    AssemblageKind.MDI: ({"A": 2, "X": 2, "B": 2}, {B_IN: 2}),
}

FREE_LABELS = {
    FeasibilityStatus.FEASIBLE: "Feasible (LOSR-free)",
    FeasibilityStatus.INFEASIBLE: "Infeasible (not LOSR-free)",
    FeasibilityStatus.INDETERMINATE: "Indeterminate",
}


def node_rank(entry: CatalogEntry, position: int) -> tuple:
    """R-family entries by decreasing theta then axis x < y < z, others by position."""
    if entry.name == R_FAMILY:
        return (0, -entry.params["theta"], AXIS_INDEX[entry.params["axis"]], 0)
    return (1, 0.0, 0, position)


class ConversionEvents(BaseEventHandler):
    """Commands deciding LOSR-freeness and LOSR conversions."""

    def register(self, subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser):
        """Add `check-free`, `convert` and `preorder`."""
        free = subparsers.add_parser(
            "check-free", parents=[common], help="decide whether an assemblage is LOSR-free"
        )
        source = free.add_mutually_exclusive_group(required=True)
        source.add_argument("source", nargs="?", help="JSON file or catalog entry")
        source.add_argument(
            "--sample",
            choices=[kind.value for kind in AssemblageKind],
            help="check a sampled free assemblage of this kind (uses --seed)",
        )
        free.set_defaults(handler=self._on_check_free)

        convert = subparsers.add_parser(
            "convert", parents=[common], help="decide an LOSR conversion"
        )
        convert.add_argument("--from", dest="source", required=True)
        convert.add_argument("--to", dest="target", required=True)
        convert.set_defaults(handler=self._on_convert)

        preorder = subparsers.add_parser(
            "preorder", parents=[common], help="explore all conversions within a set"
        )
        preorder.add_argument(
            "--set", dest="entries", nargs="+", required=True, help="entries or brace products"
        )
        preorder.add_argument("--out", type=Path, help="write the DOT graph to this file")
        preorder.set_defaults(handler=self._on_preorder)

    def _assemblage(self, source: str) -> Assemblage:
        entry = self.load(source)
        if isinstance(entry, BoxDistribution):
            raise InvalidOperatorError(f"{source} is a box, not an assemblage")
        return entry

    @handle_errors
    def _on_check_free(self, args: argparse.Namespace) -> int:
        """Print the verdict of the free test."""
        if args.sample:
            kind = AssemblageKind(args.sample)
            alphabets, dims = SAMPLE_ALPHABETS[kind]
            assemblage = sample_free(kind, alphabets, dims, self.context.config.seed)
        else:
            assemblage = self._assemblage(args.source)
        problem = free_test_for(assemblage, self.context.config.strategy_limit)
        verdict = self.context.feasibility.solve(problem, name=f"free test {args.source or ''}")
        self.emit(FREE_LABELS[verdict.status])
        return exit_code(verdict.status)

    @handle_errors
    def _on_convert(self, args: argparse.Namespace) -> int:
        """Print the verdict of source -> target."""
        problem = build_conversion(
            self._assemblage(args.source),
            self._assemblage(args.target),
            self.context.config.strategy_limit,
        )
        verdict = self.context.feasibility.solve(problem, name=f"{args.source} to {args.target}")
        self.emit(verdict.describe())
        return exit_code(verdict.status)

    @handle_errors
    def _on_preorder(self, args: argparse.Namespace) -> int:
        """Write the DOT graph; exit 2 on unresolved pairs, 1 on transitivity violations."""
        entries = [entry for text in args.entries for entry in self.catalog.expand(text)]
        nodes = [
            Node(entry.label, self._assemblage(entry.label), node_rank(entry, position))
            for position, entry in enumerate(entries)
        ]
        manager = PreorderManager(
            self.context.feasibility, self.context.config.jobs, self.context.config.strategy_limit
        )
        graph = manager.explore(nodes)

        contents = DotGraph(graph).contents
        if args.out:
            args.out.write_text(contents)
            self.logger.info(f"wrote {args.out}")
        else:
            self.out.write(contents)
        for cls in graph.equivalence_classes():
            self.emit("class: " + " ~ ".join(cls))

        if graph.transitivity_violations():
            return EXIT_ERROR
        if graph.unresolved:
            return exit_code(FeasibilityStatus.INDETERMINATE)
        return exit_code(FeasibilityStatus.FEASIBLE)
