#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Engine context definition."""

from functools import cached_property
from pathlib import Path

import numpy as np

from common.solver import AbstractSolverAdapter
from common.solver.cvx import CvxpyAdapter
from common.solver.projection import ProjectionAdapter
from core.config import EngineConfig, load_config
from core.enums import SolverBackend
from managers.feasibility import FeasibilityManager
from utils.logging import WithLogging


class Context(WithLogging):
    """Configuration of a run together with the objects derived from it."""

    def __init__(self, config: EngineConfig | None = None, dump_dir: Path | str | None = None):
        self.config = config or load_config()
        self.dump_dir = dump_dir

    @cached_property
    def adapter(self) -> AbstractSolverAdapter:
        """The solver adapter selected by the configuration."""
        if self.config.backend == SolverBackend.PROJECTION:
            return ProjectionAdapter(max_iterations=self.config.max_iterations)
        return CvxpyAdapter(self.config.solvers, self.config.max_iterations)

    @cached_property
    def feasibility(self) -> FeasibilityManager:
        """Decision policy bound to the configured adapter and tolerance."""
        return FeasibilityManager(self.adapter, self.config.eps_feas, self.dump_dir)

    def rng(self, offset: int = 0) -> np.random.Generator:
        """Generator seeded from the configured seed."""
        return np.random.default_rng(self.config.seed + offset)
