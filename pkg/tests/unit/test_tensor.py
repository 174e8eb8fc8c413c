#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import numpy as np
import pytest

from core.exceptions import DimensionMismatchError, InvalidOperatorError, UnknownLabelError
from core.tensor import (
    I2,
    SIGMA_X,
    SIGMA_Z,
    ComplexMatrix,
    SubsystemLabel,
    is_hermitian,
    is_psd,
    kron,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
    permute,
    real_embed,
    real_unembed,
    trace_out,
    unvec,
    vec,
)


def random_hermitian(rng: np.random.Generator, n: int) -> ComplexMatrix:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return ComplexMatrix((g + g.conj().T) / 2)


def test_bell_marginals_are_maximally_mixed(bell):
    assert partial_trace(bell, ["A"]).allclose(ComplexMatrix(I2 / 2))
    assert trace_out(bell, ["A"]).allclose(ComplexMatrix(I2 / 2))
    assert partial_trace(bell, ["B"]).labels == ("B",)


def test_partial_trace_of_product_keeps_factor():
    rho = ComplexMatrix(np.diag([0.25, 0.75]).astype(complex))
    sigma = ComplexMatrix((I2 + SIGMA_X) / 2)
    product = kron(rho.relabel(["A"]), sigma.relabel(["B"]))

    assert product.dims == (2, 2)
    assert partial_trace(product, ["B"]).allclose(sigma)
    assert partial_trace(product, [SubsystemLabel("A", 0)]).allclose(rho)


def test_partial_transpose_of_bell_is_swap_over_two(bell):
    swap = np.eye(4)[[0, 2, 1, 3]]
    transposed = partial_transpose(bell, "B")

    assert np.allclose(transposed.entries, swap / 2)
    assert min_eigenvalue(transposed) == pytest.approx(-0.5)
    assert not is_psd(transposed)


def test_permute_swaps_factors():
    product = kron(
        ComplexMatrix(SIGMA_Z, labels=("A",)), ComplexMatrix(SIGMA_X, labels=("B",))
    )
    swapped = permute(product, ["B", "A"])

    assert swapped.labels == ("B", "A")
    assert np.allclose(swapped.entries, np.kron(SIGMA_X, SIGMA_Z))


def test_permute_rejects_non_permutation():
    with pytest.raises(DimensionMismatchError):
        permute(ComplexMatrix(np.eye(4), (2, 2)), [0, 0])


@pytest.mark.parametrize(
    "entries,dims",
    [
        (np.zeros((2, 3)), ()),
        (np.eye(4), (3,)),
    ],
)
def test_malformed_matrices_are_rejected(entries, dims):
    with pytest.raises(DimensionMismatchError):
        ComplexMatrix(entries, dims)


def test_duplicate_labels_are_rejected():
    with pytest.raises(InvalidOperatorError):
        ComplexMatrix(np.eye(4), (2, 2), ("A", "A"))


def test_unknown_label(bell):
    with pytest.raises(UnknownLabelError):
        partial_trace(bell, ["C"])
    with pytest.raises(UnknownLabelError):
        bell.index_of(SubsystemLabel("A", 1))


def test_vec_is_column_major():
    m = np.array([[1, 2], [3, 4]], dtype=complex)

    assert np.array_equal(vec(m), np.array([1, 3, 2, 4]))
    assert np.array_equal(unvec(vec(m), 2), m)


def test_real_embedding_preserves_the_spectrum(rng):
    h = random_hermitian(rng, 4)
    y = real_embed(h)
    doubled = np.sort(np.repeat(np.linalg.eigvalsh(h.entries), 2))

    assert np.allclose(y, y.T)
    assert np.allclose(np.linalg.eigvalsh(y), doubled)
    assert np.allclose(real_unembed(y), h.entries)


def test_real_embedding_psd_status_matches_eigendecomposition(rng):
    for _ in range(200):
        h = random_hermitian(rng, 4)
        shifted = ComplexMatrix(h.entries - min_eigenvalue(h) * np.eye(4) * rng.uniform(0, 2))
        direct = np.linalg.eigvalsh(shifted.entries)[0] >= -1e-9
        embedded = np.linalg.eigvalsh(real_embed(shifted))[0] >= -1e-9
        assert direct == embedded


def test_real_embedding_needs_hermitian_input():
    with pytest.raises(InvalidOperatorError):
        real_embed(ComplexMatrix(np.array([[0, 1], [0, 0]], dtype=complex)))


@pytest.mark.parametrize(
    "entries,expected",
    [
        (np.eye(2), True),
        (-np.eye(2), False),
        (np.eye(4)[[0, 2, 1, 3]] / 2, False),
    ],
)
def test_is_psd(entries, expected):
    assert is_psd(ComplexMatrix(entries)) is expected


def test_is_hermitian():
    assert is_hermitian(ComplexMatrix(SIGMA_X))
    assert not is_hermitian(ComplexMatrix(np.array([[0, 1j], [1j, 0]])))
