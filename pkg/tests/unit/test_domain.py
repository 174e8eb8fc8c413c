#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import numpy as np
import pytest

from core.domain import BoxDistribution, BwiAssemblage, bwi_measure_out, validate
from core.exceptions import DimensionMismatchError, InvalidOperatorError
from core.tensor import I2, SIGMA_Z, ComplexMatrix
from managers.catalog import catalog


@pytest.mark.parametrize(
    "name",
    [
        "r-family",
        "i-ptp",
        "i-pr",
        "sigma-ptp",
        "sigma-pr",
        "sigma-aq",
        "sigma-chsh",
        "n-ptp",
        "n-pr",
        "p-aq",
        "pr-box",
    ],
)
def test_catalog_entries_are_valid(name):
    report = validate(catalog(name))

    assert report.valid, report.summary()


def test_unnormalised_bwi_assemblage_fails_validation():
    elements = {
        (a, x, y): ComplexMatrix(I2 / 4) for a in range(2) for x in range(2) for y in range(2)
    }
    elements[(0, 0, 0)] = ComplexMatrix(I2 / 2)
    report = BwiAssemblage(elements, 2, 2, 2).validate()

    failed = {check.name for check in report.failures}
    assert not report.valid
    assert "normalisation" in failed
    assert "p(a|x) independent of y" in failed


def test_bwi_assemblage_needs_every_key():
    with pytest.raises(DimensionMismatchError):
        BwiAssemblage({(0, 0, 0): ComplexMatrix(I2)}, 2, 1, 1)


def test_negative_element_fails_psd_check():
    elements = {
        (0, 0, 0): ComplexMatrix((I2 / 2 + SIGMA_Z) / 2),
        (1, 0, 0): ComplexMatrix((I2 / 2 - SIGMA_Z) / 2),
    }
    report = BwiAssemblage(elements, 2, 1, 1).validate()

    assert [check.name for check in report.failures] == ["element PSD"]


def test_pr_box_reaches_the_algebraic_maximum():
    box = catalog("pr-box")

    assert box.chsh_value() == pytest.approx(4)
    assert not box.is_local()


def test_almost_quantum_box_is_nonlocal():
    box = catalog("p-aq")

    assert box.p(1, 1, 1, 0) == pytest.approx(np.sqrt(2) / 9)
    assert not box.is_local()


def test_almost_quantum_box_chsh_value():
    box = catalog("p-aq")

    def correlator(x: int, y: int) -> float:
        return sum((-1) ** (a + b) * box.p(a, b, x, y) for a in range(2) for b in range(2))

    value = correlator(0, 0) - correlator(0, 1) + correlator(1, 0) + correlator(1, 1)
    assert value == pytest.approx(2.3706, abs=1e-3)
    assert value < 2 * np.sqrt(2)


def test_mixture_of_deterministic_boxes_is_local():
    table = np.zeros((2, 2, 2, 2))
    table[0, 0] = 0.5
    table[1, 1] = 0.5

    box = BoxDistribution(table)
    assert box.validate().valid
    assert box.is_local()
    assert box.chsh_value() == pytest.approx(2)


def test_box_with_wrong_rank_is_rejected():
    with pytest.raises(DimensionMismatchError):
        BoxDistribution(np.zeros((2, 2, 2)))


def test_measuring_sigma_chsh_in_the_computational_basis():
    box = bwi_measure_out(catalog("sigma-chsh"), [np.diag([1, 0]), np.diag([0, 1])])

    assert box.shape == (2, 2, 2, 2)
    assert box.validate().valid
    # sigma_z on Bob's side, both values of y carry the same state
    assert box.correlator(0, 0) == pytest.approx(1)
    assert box.correlator(1, 0) == pytest.approx(0)


def test_measure_out_rejects_incomplete_measurement():
    with pytest.raises(InvalidOperatorError):
        bwi_measure_out(catalog("sigma-chsh"), [np.diag([1, 0])])


def test_mdi_effects_match_the_stored_choi_operators(n_pr):
    for (a, b, x), element in n_pr.elements.items():
        assert np.allclose(n_pr.effect(a, b, x), 2 * element.entries.T)
    assert n_pr.alphabets == {"A": 2, "B": 2, "X": 3}
    assert np.allclose(n_pr.distribution(), 0.5)


def test_channel_assemblage_properties():
    assemblage = catalog("i-pr")

    assert assemblage.dims == {"B_in": 2, "B_out": 2}
    assert np.allclose(assemblage.distribution(), 0.5 * np.array([[1, 1, 0], [1, 1, 2]]))
