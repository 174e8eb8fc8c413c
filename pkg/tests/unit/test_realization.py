#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import numpy as np
import pytest

from core.exceptions import DimensionMismatchError, InvalidOperatorError
from core.realization import (
    bwi_from_quantum,
    channel_from_bwi,
    channel_from_quantum,
    check_povm,
    check_state,
    mdi_from_quantum,
    steered_states,
)
from core.tensor import I2, ComplexMatrix, maximally_entangled
from managers.catalog import computational_and_x, controlled_transpose, pauli_projectors


def test_steering_the_bell_state_with_sigma_z(bell):
    states = steered_states(bell, computational_and_x())

    assert np.allclose(states[(0, 0)], np.diag([0.5, 0]))
    assert np.allclose(states[(1, 0)], np.diag([0, 0.5]))
    assert np.allclose(states[(0, 1)] + states[(1, 1)], I2 / 2)


def test_steering_needs_a_bipartite_state():
    with pytest.raises(DimensionMismatchError):
        steered_states(ComplexMatrix(I2 / 2), computational_and_x())


@pytest.mark.parametrize(
    "povm",
    [
        [],
        [[I2 / 2, I2 / 2], [I2]],
        [[np.diag([1.5, 0]), np.diag([-0.5, 1])]],
    ],
)
def test_invalid_measurements_are_rejected(povm):
    with pytest.raises(InvalidOperatorError):
        check_povm(povm, 2)


def test_non_normalised_state_is_rejected():
    with pytest.raises(InvalidOperatorError):
        check_state(ComplexMatrix(I2))


def test_controlled_transpose_is_not_completely_positive(bell):
    with pytest.raises(InvalidOperatorError):
        channel_from_quantum(bell, pauli_projectors(True), controlled_transpose, 2, 2)


def test_channel_from_quantum_with_discarded_control(bell):
    assemblage = channel_from_quantum(
        bell, computational_and_x(), lambda x: np.einsum("ijik->jk", x.reshape(2, 2, 2, 2)), 2, 2
    )

    assert assemblage.validate().valid
    for element in assemblage.elements.values():
        assert np.allclose(element.entries, maximally_entangled(2) / 2)


def test_bwi_from_quantum_applies_the_y_channels(bell):
    assemblage = bwi_from_quantum(
        bell, computational_and_x(), [lambda rho: rho, lambda rho: np.trace(rho) * I2 / 2]
    )

    assert assemblage.n_y == 2
    assert np.allclose(assemblage.element(1, 0, 0).entries, np.diag([0, 0.5]))
    assert np.allclose(assemblage.element(1, 0, 1).entries, I2 / 4)


def test_mdi_from_quantum_with_a_parity_measurement(bell):
    parity = [np.diag([1, 0, 0, 1]), np.diag([0, 1, 1, 0])]
    assemblage = mdi_from_quantum(
        bell, computational_and_x(), [lambda x, f=f: np.trace(f @ x) for f in parity], 2
    )

    assert assemblage.validate().valid
    # b is the parity of Alice's sigma_z outcome and the B_in basis state
    assert np.allclose(assemblage.effect(0, 0, 0), np.diag([0.5, 0]))
    assert np.allclose(assemblage.effect(0, 1, 0), np.diag([0, 0.5]))


def test_mdi_from_quantum_needs_a_complete_measurement(bell):
    with pytest.raises(InvalidOperatorError):
        mdi_from_quantum(
            bell, computational_and_x(), [lambda x: np.trace(np.diag([1, 0, 0, 1]) @ x)], 2
        )


def test_channel_from_bwi(sigma_ptp):
    channels = channel_from_bwi(sigma_ptp, y=1)

    assert channels.d_in == 1
    assert channels.d_out == 2
    assert np.allclose(channels.element(0, 2).entries, sigma_ptp.element(0, 2, 1).entries)
