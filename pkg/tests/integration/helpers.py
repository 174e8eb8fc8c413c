#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import itertools
import logging

import cvxpy as cp
import numpy as np

from core.domain import BwiAssemblage

logger = logging.getLogger(__name__)


def local_hidden_state_model(s: BwiAssemblage, y: int = 0) -> bool:
    """Whether sigma_{a|x,y} at fixed y admits a local hidden state model.

    Solved directly with hermitian cvxpy variables, independently of the engine lowering.
    """
    strategies = list(itertools.product(range(s.n_a), repeat=s.n_x))
    d = s.element(0, 0, y).side
    hidden = [cp.Variable((d, d), hermitian=True) for _ in strategies]
    constraints = [state >> 0 for state in hidden]
    for a in range(s.n_a):
        for x in range(s.n_x):
            target = np.asarray(s.element(a, x, y).entries)
            constraints.append(
                sum(state for state, lam in zip(hidden, strategies) if lam[x] == a) == target
            )

    problem = cp.Problem(cp.Minimize(0), constraints)
    problem.solve(solver=cp.CLARABEL)
    logger.info(f"local hidden state model: {problem.status}")
    return problem.status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE)
