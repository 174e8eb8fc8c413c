#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Exceptions raised by the engine."""


class LosrError(Exception):
    """Base class for all errors raised by the engine."""


class DimensionMismatchError(LosrError, ValueError):
    """Operands have incompatible dimensions."""


class UnknownLabelError(LosrError, KeyError):
    """A subsystem label does not exist on the operator."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown label"


class InvalidOperatorError(LosrError, ValueError):
    """An operator, state, POVM or channel does not satisfy its defining conditions."""


class StrategyLimitError(LosrError, ValueError):
    """The number of deterministic strategies exceeds the configured limit."""


class UnknownCatalogEntryError(LosrError, KeyError):
    """The catalog has no entry with the given name."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown catalog entry"


class ParameterRangeError(LosrError, ValueError):
    """A catalog parameter is outside of its admissible range."""


class SchemaError(LosrError, ValueError):
    """A serialized document violates the expected schema."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer
        self.message = message


class ConfigurationError(LosrError, ValueError):
    """Engine configuration is invalid."""


class ProblemTooLargeError(LosrError, ValueError):
    """A problem exceeds what the selected builder or adapter accepts."""
