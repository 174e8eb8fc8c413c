# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

from typing import Callable

import numpy as np
import pytest

from common.solver import AbstractSolverAdapter, PhaseOneResult
from core.config import EngineConfig, load_config
from core.enums import PhaseOneStatus
from core.problem import ConicProblem, ProblemBuilder, RealLowering, trace_map
from core.tensor import bell_state
from managers.catalog import catalog


class StubAdapter(AbstractSolverAdapter):
    """Adapter returning a fixed phase-1 result and recording the lowering it got."""

    name = "stub"

    def __init__(self, result: PhaseOneResult | Callable[[RealLowering], PhaseOneResult]):
        self.result = result
        self.lowerings: list[RealLowering] = []

    def phase_one(self, lowering: RealLowering) -> PhaseOneResult:
        self.lowerings.append(lowering)
        return self.result(lowering) if callable(self.result) else self.result


@pytest.fixture
def rng() -> np.random.Generator:
    """Provide a seeded random generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def engine_config() -> EngineConfig:
    """Provide the default engine configuration from config.yaml."""
    return load_config()


@pytest.fixture
def bell():
    """Provide the two-qubit maximally entangled state."""
    return bell_state()


@pytest.fixture
def sigma_ptp():
    """Provide the transposed-Pauli Bob-with-input assemblage."""
    return catalog("sigma-ptp")


@pytest.fixture
def n_pr():
    """Provide the PR-box MDI assemblage."""
    return catalog("n-pr")


@pytest.fixture
def negative_trace_problem() -> ConicProblem:
    """Provide {X >= 0, tr X = -1}, which no point satisfies."""
    builder = ProblemBuilder("negative trace")
    builder.add_block("X", 1)
    builder.add_equality("trace", [("X", trace_map(1))], -1.0)
    return builder.build()


@pytest.fixture
def stub_adapter() -> Callable[..., StubAdapter]:
    """Provide a factory of adapters answering with the given phase-1 result."""

    def factory(status: PhaseOneStatus, gap: float | None = None, blocks=None) -> StubAdapter:
        return StubAdapter(PhaseOneResult(status, gap=gap, blocks=blocks))

    return factory
