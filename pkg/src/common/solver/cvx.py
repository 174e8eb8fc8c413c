#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Solver adapter backed by cvxpy."""

from typing import Sequence

import cvxpy as cp
import numpy as np
from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt

from common.solver import AbstractSolverAdapter, PhaseOneResult
from core.enums import PhaseOneStatus
from core.problem import RealLowering
from utils.logging import WithLogging

ACCEPTED = {cp.OPTIMAL: PhaseOneStatus.SOLVED, cp.OPTIMAL_INACCURATE: PhaseOneStatus.INACCURATE}


class CvxpyAdapter(AbstractSolverAdapter, WithLogging):
    """Phase-1 program modeled with cvxpy, falling back along the solver list."""

    name = "cvxpy"

    def __init__(self, solvers: Sequence[str] = ("CLARABEL", "SCS"), max_iterations: int = 5000):
        self.solvers = tuple(solvers)
        self.max_iterations = max_iterations

    def _options(self, solver: str) -> dict:
        if solver == cp.SCS:
            return {"max_iters": self.max_iterations * 20, "eps": 1e-9}
        if solver == cp.CLARABEL:
            return {"max_iter": self.max_iterations}
        return {}

    def _model(self, lowering: RealLowering) -> tuple[cp.Problem, list[cp.Variable], cp.Variable]:
        ys = [cp.Variable((size, size), symmetric=True) for size in lowering.block_sizes]
        gap = cp.Variable(nonneg=True)
        constraints = [y >> 0 for y in ys]
        if lowering.matrix.shape[0]:
            if ys:
                z = cp.hstack([cp.vec(y, order="F") for y in ys])
                residual = lowering.matrix @ z - lowering.rhs
            else:
                residual = cp.Constant(-lowering.rhs)
            constraints += [residual <= gap, -residual <= gap]
        return cp.Problem(cp.Minimize(gap), constraints), ys, gap

    def phase_one(self, lowering: RealLowering) -> PhaseOneResult:
        """Solve with the first solver of the list that terminates acceptably."""
        problem, ys, gap = self._model(lowering)
        attempts: list[str] = []

        try:
            for attempt in Retrying(
                stop=stop_after_attempt(len(self.solvers)),
                retry=retry_if_exception_type(cp.error.SolverError),
            ):
                with attempt:
                    solver = self.solvers[attempt.retry_state.attempt_number - 1]
                    attempts.append(solver)
                    self.logger.debug(f"phase 1 with {solver}: {lowering.n_variables} variables")
                    problem.solve(solver=solver, **self._options(solver))
                    if problem.status not in ACCEPTED:
                        raise cp.error.SolverError(f"{solver} terminated with {problem.status}")
        except (RetryError, cp.error.SolverError) as e:
            self.logger.warning(f"no solver produced a point: {e}")
            return PhaseOneResult(
                PhaseOneStatus.FAILED,
                diagnostics={"solvers": attempts, "error": str(e), "status": problem.status},
            )

        return PhaseOneResult(
            ACCEPTED[problem.status],
            gap=float(gap.value),
            blocks={
                name: np.asarray(y.value) for name, y in zip(lowering.block_names, ys)
            },
            diagnostics={
                "solver": attempts[-1],
                "solvers": attempts,
                "status": problem.status,
                "solve_time": problem.solver_stats.solve_time,
            },
        )
