#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Base utilities exposing common functionalities for all command handler classes."""

from __future__ import annotations

import argparse
import sys
from functools import wraps
from pathlib import Path
from typing import Callable, TextIO

from config.assemblage import read_assemblage
from constants import EXIT_ERROR, EXIT_INDETERMINATE, EXIT_OK
from core.context import Context
from core.enums import FeasibilityStatus, MembershipVerdict
from core.exceptions import LosrError
from managers.catalog import CatalogManager, Entry
from utils.logging import WithLogging

Hook = Callable[["BaseEventHandler", argparse.Namespace], int]


class BaseEventHandler(WithLogging):
    """Base class for all command handler classes of the CLI."""

    def __init__(self, context: Context | None, out: TextIO | None = None):
        self.context = context
        self.out = out or sys.stdout
        self.catalog = CatalogManager()

    def register(self, subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser):
        """Add the handler's sub-commands; each sets `handler` to a bound hook."""
        raise NotImplementedError

    def emit(self, text: str) -> None:
        """Write one result line to the output stream."""
        print(text, file=self.out)

    def load(self, source: str) -> Entry:
        """Read `source` as a JSON document when it is a file, else as a catalog entry."""
        if Path(source).is_file():
            self.logger.debug(f"reading {source}")
            return read_assemblage(source)
        return self.catalog.build(source)


def handle_errors(hook: Hook) -> Hook:
    """Decorator turning engine errors into a single-line message and exit code 1."""

    @wraps(hook)
    def wrapper_hook(event_handler: BaseEventHandler, args: argparse.Namespace) -> int:
        """Return the hook exit code, or EXIT_ERROR on engine errors."""
        try:
            return hook(event_handler, args)
        except LosrError as e:
            event_handler.logger.debug(f"{hook.__name__} failed", exc_info=True)
            print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
            return EXIT_ERROR

    return wrapper_hook


def exit_code(status: FeasibilityStatus | MembershipVerdict) -> int:
    """EXIT_INDETERMINATE for Indeterminate outcomes, EXIT_OK otherwise."""
    if status.value == FeasibilityStatus.INDETERMINATE.value:
        return EXIT_INDETERMINATE
    return EXIT_OK
