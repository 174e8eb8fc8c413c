#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Complex linear algebra over labeled tensor-product spaces.

Subsystem 0 is the most significant Kronecker factor. Matrices are stored row-major,
vectorisation of operators (`vec`) is column-major.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

from constants import HERMITIAN_TOL, PSD_TOL
from core.exceptions import DimensionMismatchError, InvalidOperatorError, UnknownLabelError

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Pauli index convention shared by every Pauli-indexed family: 0 -> X, 1 -> Y, 2 -> Z
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class SubsystemLabel:
    """Name and position of one tensor factor."""

    name: str
    index: int


LabelRef = Union[SubsystemLabel, str, int]


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Dense complex square matrix with subsystem-dimension metadata."""

    entries: np.ndarray
    dims: tuple[int, ...] = field(default=())
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatchError(f"expected a square matrix, got shape {entries.shape}")
        dims = tuple(int(d) for d in self.dims) if self.dims else (entries.shape[0],)
        if int(np.prod(dims)) != entries.shape[0]:
            raise DimensionMismatchError(
                f"subsystem dims {dims} do not multiply to side length {entries.shape[0]}"
            )
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(dims):
                raise DimensionMismatchError(f"{len(labels)} labels given for {len(dims)} dims")
            if len(set(labels)) != len(labels):
                raise InvalidOperatorError(f"subsystem labels must be unique, got {labels}")
            object.__setattr__(self, "labels", labels)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def identity(cls, dims: Sequence[int], labels: Sequence[str] | None = None) -> ComplexMatrix:
        """Identity operator on the given subsystems."""
        return cls(np.eye(int(np.prod(dims)), dtype=complex), tuple(dims), labels)

    @property
    def side(self) -> int:
        """Side length of the matrix."""
        return self.entries.shape[0]

    @property
    def subsystems(self) -> list[SubsystemLabel]:
        """Labels of the tensor factors, in order."""
        names = self.labels or tuple(str(i) for i in range(len(self.dims)))
        return [SubsystemLabel(name, i) for i, name in enumerate(names)]

    def index_of(self, ref: LabelRef) -> int:
        """Resolve a label, label name or position to the factor position."""
        if isinstance(ref, SubsystemLabel):
            if self.labels is not None and (
                ref.index >= len(self.labels) or self.labels[ref.index] != ref.name
            ):
                raise UnknownLabelError(f"label {ref.name} is not subsystem {ref.index}")
            ref = ref.index
        if isinstance(ref, str):
            if self.labels is None or ref not in self.labels:
                raise UnknownLabelError(f"unknown subsystem label {ref}")
            return self.labels.index(ref)
        if not 0 <= int(ref) < len(self.dims):
            raise UnknownLabelError(f"subsystem index {ref} out of range for dims {self.dims}")
        return int(ref)

    def dim_of(self, ref: LabelRef) -> int:
        """Dimension of one factor."""
        return self.dims[self.index_of(ref)]

    def relabel(self, labels: Sequence[str]) -> ComplexMatrix:
        """Same matrix with new factor names."""
        return ComplexMatrix(self.entries, self.dims, tuple(labels))

    def trace(self) -> complex:
        """Full trace."""
        return complex(np.trace(self.entries))

    @property
    def dagger(self) -> ComplexMatrix:
        """Conjugate transpose."""
        return ComplexMatrix(self.entries.conj().T, self.dims, self.labels)

    @property
    def transpose(self) -> ComplexMatrix:
        """Full transpose."""
        return ComplexMatrix(self.entries.T, self.dims, self.labels)

    def __add__(self, other: ComplexMatrix) -> ComplexMatrix:
        _check_same_shape(self, other)
        return ComplexMatrix(self.entries + other.entries, self.dims, self.labels)

    def __sub__(self, other: ComplexMatrix) -> ComplexMatrix:
        _check_same_shape(self, other)
        return ComplexMatrix(self.entries - other.entries, self.dims, self.labels)

    def __mul__(self, scalar: complex) -> ComplexMatrix:
        return ComplexMatrix(self.entries * scalar, self.dims, self.labels)

    __rmul__ = __mul__

    def __matmul__(self, other: ComplexMatrix) -> ComplexMatrix:
        _check_same_shape(self, other)
        return ComplexMatrix(self.entries @ other.entries, self.dims, self.labels)

    def allclose(self, other: ComplexMatrix, atol: float = 1e-9) -> bool:
        """Entrywise comparison within an absolute tolerance."""
        return self.entries.shape == other.entries.shape and bool(
            np.allclose(self.entries, other.entries, atol=atol, rtol=0)
        )

    def __repr__(self) -> str:
        return f"ComplexMatrix(dims={self.dims}, labels={self.labels})"


def _check_same_shape(a: ComplexMatrix, b: ComplexMatrix) -> None:
    if a.entries.shape != b.entries.shape:
        raise DimensionMismatchError(f"shape {a.entries.shape} vs {b.entries.shape}")


def as_matrix(m: ComplexMatrix | np.ndarray) -> ComplexMatrix:
    """Wrap raw arrays, pass matrices through."""
    return m if isinstance(m, ComplexMatrix) else ComplexMatrix(np.asarray(m))


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product, `a` being the most significant factor."""
    labels = a.labels + b.labels if a.labels is not None and b.labels is not None else None
    return ComplexMatrix(np.kron(a.entries, b.entries), a.dims + b.dims, labels)


def kron_all(factors: Iterable[ComplexMatrix]) -> ComplexMatrix:
    """Kronecker product of several factors, left to right."""
    return reduce(kron, factors)


def partial_trace(m: ComplexMatrix, keep: Iterable[LabelRef]) -> ComplexMatrix:
    """Trace out every subsystem not listed in `keep`, keeping the original order."""
    kept = sorted({m.index_of(ref) for ref in keep})
    n = len(m.dims)
    tensor = m.entries.reshape(m.dims + m.dims)
    rows = list(range(n))
    cols = [n + i if i in kept else i for i in range(n)]
    out = [i for i in kept] + [n + i for i in kept]
    reduced = np.einsum(tensor, rows + cols, out)
    dims = tuple(m.dims[i] for i in kept)
    side = int(np.prod(dims)) if dims else 1
    labels = tuple(m.labels[i] for i in kept) if m.labels is not None else None
    return ComplexMatrix(reduced.reshape(side, side), dims or (1,), labels if dims else None)


def trace_out(m: ComplexMatrix, drop: Iterable[LabelRef]) -> ComplexMatrix:
    """Trace out the listed subsystems."""
    dropped = {m.index_of(ref) for ref in drop}
    return partial_trace(m, [i for i in range(len(m.dims)) if i not in dropped])


def partial_transpose(m: ComplexMatrix, on: LabelRef | Iterable[LabelRef]) -> ComplexMatrix:
    """Transpose the listed factors only."""
    refs = [on] if isinstance(on, (SubsystemLabel, str, int)) else list(on)
    n = len(m.dims)
    tensor = m.entries.reshape(m.dims + m.dims)
    for i in {m.index_of(ref) for ref in refs}:
        tensor = np.swapaxes(tensor, i, n + i)
    return ComplexMatrix(tensor.reshape(m.side, m.side), m.dims, m.labels)


def permute(m: ComplexMatrix, order: Sequence[LabelRef]) -> ComplexMatrix:
    """Reorder the tensor factors; `order` lists the old factors in their new position."""
    perm = [m.index_of(ref) for ref in order]
    if sorted(perm) != list(range(len(m.dims))):
        raise DimensionMismatchError(f"{order} is not a permutation of the subsystems")
    n = len(m.dims)
    tensor = m.entries.reshape(m.dims + m.dims).transpose(perm + [n + i for i in perm])
    labels = tuple(m.labels[i] for i in perm) if m.labels is not None else None
    return ComplexMatrix(
        tensor.reshape(m.side, m.side), tuple(m.dims[i] for i in perm), labels
    )


def hermiticity_defect(m: ComplexMatrix) -> float:
    """Largest entrywise deviation from Hermiticity."""
    return float(np.max(np.abs(m.entries - m.entries.conj().T), initial=0.0))


def is_hermitian(m: ComplexMatrix, tol: float = HERMITIAN_TOL) -> bool:
    """True when max |M - M^dagger| <= tol."""
    return hermiticity_defect(m) <= tol


def hermitian_part(m: ComplexMatrix) -> ComplexMatrix:
    """(M + M^dagger) / 2."""
    return ComplexMatrix((m.entries + m.entries.conj().T) / 2, m.dims, m.labels)


def min_eigenvalue(m: ComplexMatrix) -> float:
    """Smallest eigenvalue of the Hermitian part."""
    if m.side == 0:
        return 0.0
    return float(np.linalg.eigvalsh(hermitian_part(m).entries)[0])


def is_psd(m: ComplexMatrix, tol: float = PSD_TOL) -> bool:
    """True when the minimum eigenvalue is at least -tol."""
    return min_eigenvalue(m) >= -tol


def real_embed(h: ComplexMatrix, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Real symmetric matrix [[Re h, -Im h], [Im h, Re h]] with the spectrum of h doubled."""
    if not is_hermitian(h, tol):
        raise InvalidOperatorError(
            f"real embedding needs a Hermitian matrix, defect {hermiticity_defect(h):.3e}"
        )
    re, im = h.entries.real, h.entries.imag
    return np.block([[re, -im], [im, re]])


def real_unembed(y: np.ndarray) -> np.ndarray:
    """Hermitian matrix whose embedding is the symmetrised part of `y`."""
    n = y.shape[0] // 2
    if y.shape != (2 * n, 2 * n):
        raise DimensionMismatchError(f"expected an even square matrix, got {y.shape}")
    re = (y[:n, :n] + y[n:, n:]) / 2
    im = (y[n:, :n] - y[:n, n:]) / 2
    h = re + 1j * im
    return (h + h.conj().T) / 2


def vec(m: ComplexMatrix | np.ndarray) -> np.ndarray:
    """Column-major vectorisation."""
    entries = m.entries if isinstance(m, ComplexMatrix) else np.asarray(m)
    return entries.reshape(-1, order="F")


def unvec(v: np.ndarray, side: int) -> np.ndarray:
    """Inverse of `vec`."""
    return np.asarray(v).reshape((side, side), order="F")


def ket(index: int, dim: int) -> np.ndarray:
    """Computational basis column vector."""
    v = np.zeros((dim, 1), dtype=complex)
    v[index, 0] = 1
    return v


def projector(vector: np.ndarray) -> np.ndarray:
    """|v><v| for a column vector."""
    v = np.asarray(vector, dtype=complex).reshape(-1, 1)
    return v @ v.conj().T


def maximally_entangled(dim: int) -> np.ndarray:
    """|Omega><Omega| with |Omega> = sum_i |ii> / sqrt(dim)."""
    omega = np.eye(dim, dtype=complex).reshape(-1, 1) / np.sqrt(dim)
    return omega @ omega.conj().T


def bell_state() -> ComplexMatrix:
    """Two-qubit |phi+><phi+| on subsystems A and B."""
    return ComplexMatrix(maximally_entangled(2), (2, 2), ("A", "B"))


def rotation(axis: int, theta: float) -> np.ndarray:
    """exp(-i theta sigma_axis / 2) with the Pauli index convention 0 -> X, 1 -> Y, 2 -> Z."""
    return np.cos(theta / 2) * I2 - 1j * np.sin(theta / 2) * PAULIS[axis]


def controlled(unitary: np.ndarray) -> np.ndarray:
    """|0><0| (x) I + |1><1| (x) U, control on the first factor."""
    d = unitary.shape[0]
    return np.block(
        [[np.eye(d, dtype=complex), np.zeros((d, d))], [np.zeros((d, d)), unitary]]
    )
