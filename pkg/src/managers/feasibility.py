#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Feasibility decision policy on top of a solver adapter."""

import math
from pathlib import Path

from common.solver import AbstractSolverAdapter, PhaseOneResult
from common.solver.cvx import CvxpyAdapter
from config.sdpa import SdpaDump
from constants import EPS_FEAS, INFEASIBLE_FACTOR
from core.enums import FeasibilityStatus, PhaseOneStatus
from core.problem import ConicProblem, FeasibilityVerdict, lower_to_real
from core.tensor import real_unembed
from utils.logging import WithLogging


class FeasibilityManager(WithLogging):
    """Turn phase-1 solutions into Feasible / Infeasible / Indeterminate verdicts.

    Feasible needs a re-substituted witness with every equality residual and every
    negative eigenvalue within eps_feas. Infeasible needs a phase-1 optimum above
    INFEASIBLE_FACTOR * eps_feas. Anything in between is Indeterminate.
    """

    def __init__(
        self,
        adapter: AbstractSolverAdapter | None = None,
        eps_feas: float = EPS_FEAS,
        dump_dir: Path | str | None = None,
    ):
        self.adapter = adapter or CvxpyAdapter()
        self.eps_feas = eps_feas
        self.dump_dir = dump_dir

    def solve(self, problem: ConicProblem, name: str | None = None) -> FeasibilityVerdict:
        """Decide feasibility of `problem`; `name` labels logs and dumps."""
        name = name or problem.provenance or "problem"
        lowering = lower_to_real(problem)
        if self.dump_dir is not None:
            SdpaDump(lowering, name).write(self.dump_dir, name)
        self.logger.info(
            f"solving {name}: {len(problem.blocks)} blocks, "
            f"{lowering.matrix.shape[0]} real equations, {lowering.n_variables} variables"
        )
        result = self.adapter.phase_one(lowering)
        verdict = self._decide(problem, result)
        if verdict.status == FeasibilityStatus.INDETERMINATE:
            self.logger.warning(f"{name}: {verdict.describe()}")
        else:
            self.logger.info(f"{name}: {verdict.describe()}")
        return verdict

    def _decide(self, problem: ConicProblem, result: PhaseOneResult) -> FeasibilityVerdict:
        diagnostics = dict(result.diagnostics, phase_one_status=result.status.value)
        if result.status == PhaseOneStatus.FAILED or result.blocks is None:
            return FeasibilityVerdict(
                FeasibilityStatus.INDETERMINATE,
                diagnostics=diagnostics,
                provenance=problem.provenance,
            )

        witness = {name: real_unembed(y) for name, y in result.blocks.items()}
        residual = problem.max_residual(witness)
        min_eig = problem.min_eigenvalue(witness)
        gap = result.gap if result.gap is not None else math.inf
        diagnostics["phase_one_gap"] = gap

        if residual <= self.eps_feas and min_eig >= -self.eps_feas:
            status = FeasibilityStatus.FEASIBLE
        elif result.status == PhaseOneStatus.SOLVED and gap > INFEASIBLE_FACTOR * self.eps_feas:
            status = FeasibilityStatus.INFEASIBLE
        else:
            status = FeasibilityStatus.INDETERMINATE

        return FeasibilityVerdict(
            status,
            witness=witness if status == FeasibilityStatus.FEASIBLE else None,
            infeasibility_gap=gap if status == FeasibilityStatus.INFEASIBLE else None,
            max_residual=residual,
            min_eigenvalue=min_eig,
            diagnostics=diagnostics,
            provenance=problem.provenance,
        )


def solve(
    problem: ConicProblem,
    eps_feas: float = EPS_FEAS,
    adapter: AbstractSolverAdapter | None = None,
) -> FeasibilityVerdict:
    """Decide feasibility of `problem` with the given adapter."""
    return FeasibilityManager(adapter, eps_feas).solve(problem)
