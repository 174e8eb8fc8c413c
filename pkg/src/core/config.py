#!/usr/bin/env python3
# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.


"""Structured configuration for the engine."""

import logging
import os
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ValidationError, validator

from constants import DEFAULT_CONFIG_FILE
from core.enums import SolverBackend
from core.exceptions import ConfigurationError
from utils.logging import levels

logger = logging.getLogger(__name__)


class BaseConfigModel(BaseModel):
    """Class to be used for defining the structured configuration options."""

    def __getitem__(self, x: str) -> Any:
        """Return the item using the notation instance[key]."""
        return getattr(self, x.replace("-", "_"))

    class Config:
        """Pydantic model configuration."""

        allow_mutation = False
        extra = "forbid"


class EngineConfig(BaseConfigModel):
    """Tolerances, solver selection and execution options."""

    eps_feas: float
    hermitian_tol: float
    psd_tol: float
    solvers: tuple[str, ...]
    backend: SolverBackend
    jobs: int
    seed: int
    strategy_limit: int
    max_iterations: int
    log_level: str

    @validator("eps_feas", "hermitian_tol", "psd_tol")
    def _positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("tolerances must be positive")
        return value

    @validator("solvers", pre=True)
    def _split_solvers(cls, value: Any) -> tuple[str, ...]:
        if isinstance(value, str):
            value = value.split(",")
        solvers = tuple(name.strip().upper() for name in value if name.strip())
        if not solvers:
            raise ValueError("at least one solver is required")
        return solvers

    @validator("jobs")
    def _resolve_jobs(cls, value: int) -> int:
        if value < 0:
            raise ValueError("jobs must be non-negative")
        return value or os.cpu_count() or 1

    @validator("strategy_limit", "max_iterations")
    def _at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @validator("log_level")
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in levels:
            raise ValueError(f"unknown log level {value}")
        return value


def read_defaults(path: Path | str | None = None) -> dict[str, Any]:
    """Read option defaults from a config.yaml option schema."""
    with open(path or DEFAULT_CONFIG_FILE) as fid:
        options = yaml.safe_load(fid)["options"]
    return {key.replace("-", "_"): option["default"] for key, option in options.items()}


def load_config(path: Path | str | None = None, **overrides: Any) -> EngineConfig:
    """Build the engine configuration from the defaults file and explicit overrides.

    Overrides set to None are ignored, so CLI flags can be passed through untouched.
    """
    values = read_defaults(path)
    values.update(
        {key.replace("-", "_"): value for key, value in overrides.items() if value is not None}
    )
    try:
        return EngineConfig(**values)
    except ValidationError as e:
        raise ConfigurationError(str(e)) from e
