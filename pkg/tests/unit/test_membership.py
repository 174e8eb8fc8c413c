#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import numpy as np
import pytest

from constants import B_IN
from core.enums import FeasibilityStatus, MembershipVerdict, PhaseOneStatus
from core.exceptions import ProblemTooLargeError
from core.realization import mdi_from_quantum
from core.tensor import ComplexMatrix, min_eigenvalue, real_embed
from managers.catalog import computational_and_x
from managers.feasibility import FeasibilityManager
from managers.free import sample_free
from managers.membership import (
    MOMENTS,
    MembershipManager,
    MomentMatrix,
    MomentOperator,
    build_membership_test,
    certify,
    moment_operators,
    moments_from_realization,
)

PSI = np.array([1, 0, 0, 1]) / np.sqrt(2)
PARITY = [np.diag([1, 0, 0, 1]), np.diag([0, 1, 1, 0])]


@pytest.fixture
def parity_assemblage(bell):
    return mdi_from_quantum(
        bell, computational_and_x(), [lambda x, f=f: np.trace(f @ x) for f in PARITY], 2
    )


def test_operator_rows(n_pr):
    operators = moment_operators(n_pr.n_a, n_pr.n_x, n_pr.n_b, n_pr.d_in)

    assert len(operators) == 8
    assert [str(op) for op in operators[:4]] == ["I", "M_0|0", "M_0|1", "M_0|2"]
    assert str(operators[-1]) == "F_0^11"


def test_dagger_swaps_compression_indices():
    f = MomentOperator("F", b=0, i=0, j=1)

    assert f.dagger == MomentOperator("F", b=0, i=1, j=0)
    assert MomentOperator("M", a=0, x=1).dagger == MomentOperator("M", a=0, x=1)


def test_last_outcomes_are_eliminated():
    moments = MomentMatrix(2, 1, 2, 2)

    assert moments.expand_m(1, 0) == [
        (1, MomentOperator("I")),
        (-1, MomentOperator("M", a=0, x=0)),
    ]
    assert moments.expand_f(1, 0, 1) == [(-1, MomentOperator("F", b=0, i=0, j=1))]
    assert moments.cell(MomentOperator("I"), MomentOperator("M", a=0, x=0)) == moments.size


def test_explicit_realization_satisfies_the_relaxation(parity_assemblage):
    problem = build_membership_test(parity_assemblage)
    gram = moments_from_realization(PSI, computational_and_x(), PARITY, 2, 2, 2)

    assert problem.block(MOMENTS).dim == gram.shape[0] == 7
    assert problem.max_residual({MOMENTS: gram}) == pytest.approx(0, abs=1e-12)
    assert min_eigenvalue(ComplexMatrix(gram)) >= -1e-12


def test_realization_of_another_assemblage_violates_the_data(n_pr):
    problem = build_membership_test(n_pr)
    alice = [computational_and_x()[0]] * 3
    gram = moments_from_realization(PSI, alice, PARITY, 2, 2, 2)

    residuals = problem.residuals({MOMENTS: gram})
    assert residuals["measurement data"] > 0.1
    assert residuals["normalisation"] == pytest.approx(0)


def test_optional_relations_can_be_dropped(parity_assemblage):
    full = build_membership_test(parity_assemblage)
    reduced = MembershipManager(optional_relations=False).build(parity_assemblage)

    labels = {equality.label for equality in full.equalities}
    assert "projective Bob measurement" in labels
    assert len(reduced.equalities) == len(full.equalities) - 1
    assert reduced.n_rows < full.n_rows


def test_large_input_dimension_is_refused():
    n = sample_free("mdi", {"A": 2, "X": 1, "B": 2}, {B_IN: 5}, seed=0)

    with pytest.raises(ProblemTooLargeError):
        build_membership_test(n)


@pytest.mark.parametrize(
    "status,gap,expected",
    [
        (PhaseOneStatus.FAILED, None, MembershipVerdict.INDETERMINATE),
        (PhaseOneStatus.SOLVED, 1.0, MembershipVerdict.POST_QUANTUM),
        (PhaseOneStatus.INACCURATE, 1.0, MembershipVerdict.INDETERMINATE),
    ],
)
def test_certify_maps_feasibility_verdicts(n_pr, stub_adapter, status, gap, expected):
    blocks = None if status == PhaseOneStatus.FAILED else {MOMENTS: np.zeros((16, 16))}
    result = certify(n_pr, FeasibilityManager(stub_adapter(status, gap, blocks)))

    assert result.verdict == expected
    assert result.matrix_size == 8
    assert result.to_dict()["verdict"] == expected.value


def test_certify_accepts_a_verified_witness(parity_assemblage, stub_adapter):
    gram = moments_from_realization(PSI, computational_and_x(), PARITY, 2, 2, 2)
    adapter = stub_adapter(PhaseOneStatus.SOLVED, 0.0, {MOMENTS: real_embed(ComplexMatrix(gram))})
    result = certify(parity_assemblage, FeasibilityManager(adapter))

    assert result.verdict == MembershipVerdict.QUANTUM_COMPATIBLE_AT_LEVEL_1
    assert result.feasibility.status == FeasibilityStatus.FEASIBLE
    assert set(result.to_dict()) == {"verdict", "status", "gap", "max_residual", "matrix_size"}
