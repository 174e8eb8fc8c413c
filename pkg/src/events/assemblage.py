#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Catalog and validation command handlers."""

import argparse
from pathlib import Path

from config.assemblage import AssemblageDocument, BoxDocument
from constants import EXIT_ERROR, EXIT_OK
from core.domain import BoxDistribution, validate
from events.base import BaseEventHandler, handle_errors


class AssemblageEvents(BaseEventHandler):
    """Commands emitting and checking assemblages."""

    def register(self, subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser):
        """Add `catalog` and `validate`."""
        catalog = subparsers.add_parser(
            "catalog", parents=[common], help="emit a catalog entry as JSON"
        )
        catalog.add_argument("name", nargs="?", help="entry, e.g. r-family:theta=pi/8,axis=z")
        catalog.add_argument("--out", type=Path, help="write the document to this file")
        catalog.set_defaults(handler=self._on_catalog)

        check = subparsers.add_parser(
            "validate", parents=[common], help="check the invariants of an assemblage"
        )
        check.add_argument("source", help="JSON file or catalog entry")
        check.set_defaults(handler=self._on_validate)

    @handle_errors
    def _on_catalog(self, args: argparse.Namespace) -> int:
        """List the catalog, or emit one entry."""
        if not args.name:
            for name in self.catalog.names:
                self.emit(name)
            return EXIT_OK

        entry = self.load(args.name)
        document = BoxDocument(entry) if isinstance(entry, BoxDistribution) else None
        contents = (document or AssemblageDocument(entry)).contents
        if args.out:
            args.out.write_text(contents)
            self.logger.info(f"wrote {args.name} to {args.out}")
        else:
            self.out.write(contents)
        return EXIT_OK

    @handle_errors
    def _on_validate(self, args: argparse.Namespace) -> int:
        """Print one line per invariant; exit 1 when any fails."""
        report = validate(self.load(args.source), self.context.config.psd_tol)
        self.emit(report.summary())
        self.emit(f"{report.subject}: {'valid' if report.valid else 'INVALID'}")
        return EXIT_OK if report.valid else EXIT_ERROR
