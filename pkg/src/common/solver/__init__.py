#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Abstract classes for the conic solver adapters."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from core.enums import PhaseOneStatus
from core.problem import RealLowering


@dataclass(frozen=True, eq=False)
class PhaseOneResult:
    """Primal point of the phase-1 program with its optimal value.

    `blocks` holds the real symmetric blocks Y_k, `gap` the largest equality
    violation left at that point.
    """

    status: PhaseOneStatus
    gap: float | None = None
    blocks: dict[str, np.ndarray] | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)


class AbstractSolverAdapter(ABC):
    """Base Abstract class representing a solver adapter.

    An adapter receives the real lowering of a conic problem and solves

        minimize s  subject to  Y_k >= 0,  -s <= G vec(Y) - h <= s.
    """

    name: str

    @abstractmethod
    def phase_one(self, lowering: RealLowering) -> PhaseOneResult:
        """Solve the phase-1 program.

        Args:
            lowering: the real data of the problem

        Returns:
            PhaseOneResult with FAILED status when no backend produced a point
        """
        ...
