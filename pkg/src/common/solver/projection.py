#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Reference adapter alternating projections onto the affine set and the PSD cone.

Slow and only meant to cross-check the cvxpy adapter on tiny instances.
"""

import numpy as np
from scipy import linalg

from common.solver import AbstractSolverAdapter, PhaseOneResult
from constants import REFERENCE_ADAPTER_MAX_VARIABLES
from core.enums import PhaseOneStatus
from core.problem import RealLowering
from core.tensor import vec
from utils.logging import WithLogging


def project_psd(y: np.ndarray) -> np.ndarray:
    """Nearest PSD matrix to the symmetric part of y in Frobenius norm."""
    values, vectors = np.linalg.eigh((y + y.T) / 2)
    return (vectors * np.clip(values, 0, None)) @ vectors.T


class ProjectionAdapter(AbstractSolverAdapter, WithLogging):
    """Alternating projections between {G z = h} and the product of PSD cones."""

    name = "projection"

    def __init__(self, max_iterations: int = 5000, tol: float = 1e-12):
        self.max_iterations = max_iterations
        self.tol = tol

    def _project_cone(self, lowering: RealLowering, z: np.ndarray) -> np.ndarray:
        return np.concatenate(
            [vec(project_psd(y)) for y in lowering.unpack(z).values()]
            or [np.zeros(0)]
        )

    def phase_one(self, lowering: RealLowering) -> PhaseOneResult:
        """Iterate until the PSD iterate stops moving; FAILED above the size limit."""
        if lowering.n_variables > REFERENCE_ADAPTER_MAX_VARIABLES:
            error = (
                f"{lowering.n_variables} variables exceed the reference adapter limit "
                f"of {REFERENCE_ADAPTER_MAX_VARIABLES}"
            )
            self.logger.warning(error)
            return PhaseOneResult(
                PhaseOneStatus.FAILED,
                diagnostics={"solver": self.name, "error": error},
            )
        g = lowering.matrix.toarray()
        h = lowering.rhs
        g_pinv = linalg.pinv(g) if g.size else np.zeros((lowering.n_variables, 0))

        z = np.zeros(lowering.n_variables)
        converged = False
        iterations = 0
        for iterations in range(1, self.max_iterations + 1):
            affine = z - g_pinv @ (g @ z - h)
            update = self._project_cone(lowering, affine)
            step = float(np.linalg.norm(update - z))
            z = update
            if step <= self.tol:
                converged = True
                break

        gap = float(np.max(np.abs(g @ z - h), initial=0.0))
        self.logger.debug(f"alternating projections: {iterations} iterations, gap {gap:.3e}")
        return PhaseOneResult(
            PhaseOneStatus.SOLVED if converged else PhaseOneStatus.INACCURATE,
            gap=gap,
            blocks=lowering.unpack(z),
            diagnostics={"solver": self.name, "iterations": iterations, "converged": converged},
        )
