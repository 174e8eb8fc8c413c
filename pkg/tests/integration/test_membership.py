#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import logging

import numpy as np
import pytest

from constants import B_IN
from core.enums import MembershipVerdict
from core.realization import mdi_from_quantum
from core.tensor import bell_state
from managers.catalog import catalog, computational_and_x
from managers.free import sample_free
from managers.membership import certify

logger = logging.getLogger(__name__)

PARITY = [np.diag([1, 0, 0, 1]), np.diag([0, 1, 1, 0])]


@pytest.mark.slow
def test_pr_assemblage_is_post_quantum(feasibility):
    result = certify(catalog("n-pr"), feasibility)
    logger.info(f"{result.to_dict()}")

    assert result.verdict == MembershipVerdict.POST_QUANTUM
    assert result.matrix_size == 8


@pytest.mark.slow
def test_quantum_realization_is_compatible(feasibility):
    parity = mdi_from_quantum(
        bell_state(), computational_and_x(), [lambda x, f=f: np.trace(f @ x) for f in PARITY], 2
    )

    result = certify(parity, feasibility)
    assert result.verdict == MembershipVerdict.QUANTUM_COMPATIBLE_AT_LEVEL_1
    assert result.matrix_size == 7


@pytest.mark.slow
def test_transposed_pauli_assemblage_passes_level_one(feasibility):
    result = certify(catalog("n-ptp"), feasibility)

    assert result.verdict == MembershipVerdict.QUANTUM_COMPATIBLE_AT_LEVEL_1


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_free_samples_pass_level_one(feasibility, seed):
    sample = sample_free("mdi", {"A": 2, "X": 2, "B": 2}, {B_IN: 2}, seed=seed)

    result = certify(sample, feasibility)
    assert result.verdict == MembershipVerdict.QUANTUM_COMPATIBLE_AT_LEVEL_1
