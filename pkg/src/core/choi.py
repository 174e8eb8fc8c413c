#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Choi-Jamiolkowski representation of maps and the link product of combs.

A map E from `in_labels` to `out_labels` is represented by W = (E (x) I)|Omega><Omega|
with the normalised |Omega> = sum_i |ii> / sqrt(d_in). Output factors come first.
A CPTP map therefore has a unit-trace Choi operator with tr_out(W) = I / d_in.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from constants import B_IN, B_OUT, FACTORIZATION_TOL, HERMITIAN_TOL, PSD_TOL
from core.exceptions import DimensionMismatchError, UnknownLabelError
from core.tensor import (
    ComplexMatrix,
    as_matrix,
    is_hermitian,
    is_psd,
    kron,
    partial_trace,
    permute,
    trace_out,
    vec,
)

MapAction = Callable[[np.ndarray], "np.ndarray | ComplexMatrix | complex"]


@dataclass(frozen=True, eq=False)
class ChoiOperator:
    """Choi operator with labeled output and input subsystems."""

    matrix: ComplexMatrix
    out_labels: tuple[str, ...]
    in_labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.out_labels) + tuple(self.in_labels)
        if len(labels) != len(self.matrix.dims):
            raise DimensionMismatchError(
                f"{len(labels)} labels for a matrix with dims {self.matrix.dims}"
            )
        object.__setattr__(self, "out_labels", tuple(self.out_labels))
        object.__setattr__(self, "in_labels", tuple(self.in_labels))
        if self.matrix.labels != labels:
            object.__setattr__(self, "matrix", self.matrix.relabel(labels))

    @classmethod
    def from_array(
        cls,
        entries: np.ndarray,
        out_dims: Sequence[int],
        in_dims: Sequence[int],
        out_labels: Sequence[str] = (B_OUT,),
        in_labels: Sequence[str] = (B_IN,),
    ) -> ChoiOperator:
        """Wrap a raw array ordered as outputs then inputs."""
        return cls(
            ComplexMatrix(entries, tuple(out_dims) + tuple(in_dims)),
            tuple(out_labels),
            tuple(in_labels),
        )

    @property
    def labels(self) -> tuple[str, ...]:
        """All labels, outputs first."""
        return self.out_labels + self.in_labels

    def dim_of(self, label: str) -> int:
        """Dimension of the named subsystem."""
        return self.matrix.dim_of(label)

    @property
    def out_dims(self) -> tuple[int, ...]:
        """Dimensions of the output factors."""
        return self.matrix.dims[: len(self.out_labels)]

    @property
    def in_dims(self) -> tuple[int, ...]:
        """Dimensions of the input factors."""
        return self.matrix.dims[len(self.out_labels) :]

    @property
    def d_in(self) -> int:
        """Total input dimension, 1 for preparations."""
        return int(np.prod(self.in_dims))

    @property
    def d_out(self) -> int:
        """Total output dimension, 1 for measurement effects."""
        return int(np.prod(self.out_dims))

    @property
    def entries(self) -> np.ndarray:
        """Raw matrix entries."""
        return self.matrix.entries

    def relabel(self, mapping: dict[str, str]) -> ChoiOperator:
        """Rename subsystems; names missing from `mapping` are kept."""
        return ChoiOperator(
            self.matrix,
            tuple(mapping.get(label, label) for label in self.out_labels),
            tuple(mapping.get(label, label) for label in self.in_labels),
        )

    def scaled(self, factor: float) -> ChoiOperator:
        """Operator multiplied by a scalar."""
        return ChoiOperator(self.matrix * factor, self.out_labels, self.in_labels)

    def __add__(self, other: ChoiOperator) -> ChoiOperator:
        if self.labels != other.labels:
            raise DimensionMismatchError(f"labels {self.labels} vs {other.labels}")
        return ChoiOperator(self.matrix + other.matrix, self.out_labels, self.in_labels)

    def output_marginal(self) -> ComplexMatrix:
        """tr_out(W), an operator on the inputs."""
        if not self.in_labels:
            return ComplexMatrix(np.array([[self.matrix.trace()]]))
        return partial_trace(self.matrix, self.in_labels)

    def is_cptp(self, tol: float = PSD_TOL) -> bool:
        """PSD with tr_out(W) = I / d_in."""
        if not (is_hermitian(self.matrix, HERMITIAN_TOL) and is_psd(self.matrix, tol)):
            return False
        target = np.eye(self.d_in) / self.d_in
        return bool(np.max(np.abs(self.output_marginal().entries - target)) <= tol)

    def is_cptni(self, tol: float = PSD_TOL) -> bool:
        """PSD with tr_out(W) <= I / d_in."""
        if not (is_hermitian(self.matrix, HERMITIAN_TOL) and is_psd(self.matrix, tol)):
            return False
        gap = np.eye(self.d_in) / self.d_in - self.output_marginal().entries
        return is_psd(ComplexMatrix(gap), tol)


def choi_of_map(
    apply: MapAction,
    d_in: int,
    d_out: int,
    in_label: str = B_IN,
    out_label: str = B_OUT,
) -> ChoiOperator:
    """Choi operator of a linear map given by its action on matrices.

    `d_out == 1` yields a map with trivial output, `d_in == 1` a preparation.
    """
    blocks = np.zeros((d_out * d_in, d_out * d_in), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            unit = np.zeros((d_in, d_in), dtype=complex)
            unit[i, j] = 1
            image = np.atleast_2d(_raw(apply(unit)))
            if image.shape != (d_out, d_out):
                raise DimensionMismatchError(
                    f"map returned shape {image.shape}, expected {(d_out, d_out)}"
                )
            blocks += np.kron(image, unit)
    out_labels, out_dims = ((out_label,), (d_out,)) if d_out > 1 else ((), ())
    in_labels, in_dims = ((in_label,), (d_in,)) if d_in > 1 else ((), ())
    if not out_dims and not in_dims:
        raise DimensionMismatchError("a map between trivial systems has no Choi operator")
    return ChoiOperator.from_array(blocks / d_in, out_dims, in_dims, out_labels, in_labels)


def _raw(value: np.ndarray | ComplexMatrix | complex) -> np.ndarray:
    return value.entries if isinstance(value, ComplexMatrix) else np.asarray(value, dtype=complex)


def apply_choi(w: ChoiOperator, rho: ComplexMatrix | np.ndarray) -> ComplexMatrix:
    """E(rho) = d_in tr_in(W (I (x) rho^T))."""
    rho = as_matrix(rho)
    if rho.side != w.d_in:
        raise DimensionMismatchError(f"input of dimension {rho.side}, map expects {w.d_in}")
    if not w.out_labels:
        return ComplexMatrix(np.array([[w.d_in * np.sum(w.entries * rho.entries)]]))
    product = w.entries @ np.kron(np.eye(w.d_out), rho.entries.T)
    lifted = ComplexMatrix(product, w.matrix.dims, w.labels)
    if not w.in_labels:
        return ComplexMatrix(product, w.out_dims, w.out_labels)
    return partial_trace(lifted, w.out_labels) * w.d_in


def identity_channel(dim: int, in_label: str = B_IN, out_label: str = B_OUT) -> ChoiOperator:
    """Choi operator |Omega><Omega| of the identity channel."""
    return choi_of_map(lambda rho: rho, dim, dim, in_label, out_label)


def compose_comb(pre: ChoiOperator, post: ChoiOperator) -> ChoiOperator:
    """Comb made of a pre-processing and a post-processing channel with no side channel."""
    joint = kron(pre.matrix, post.matrix)
    n_pre_out, n_post_out = len(pre.out_labels), len(post.out_labels)
    n_pre = len(pre.labels)
    order = (
        list(range(n_pre_out))
        + list(range(n_pre, n_pre + n_post_out))
        + list(range(n_pre_out, n_pre))
        + list(range(n_pre + n_post_out, n_pre + len(post.labels)))
    )
    return ChoiOperator(
        permute(joint, order),
        pre.out_labels + post.out_labels,
        pre.in_labels + post.in_labels,
    )


def _link_einsum(
    elem: ChoiOperator,
    comb_labels: Sequence[str],
    comb_dims: Sequence[int],
    contracted: set[str],
    result_labels: Sequence[str],
    comb_stack: np.ndarray,
) -> np.ndarray:
    """Batched tr_X(J_elem^{T_X} J_comb) over a stack of comb matrices.

    Contracting row with row and column with column is the same as partially
    transposing the elem operator on X and tracing X out of the product.
    """
    letters = iter(string.ascii_letters)
    row = {label: next(letters) for label in set(elem.labels) | set(comb_labels)}
    col = {label: next(letters) for label in row}
    batch = next(letters)

    elem_sub = "".join(row[label] for label in elem.labels) + "".join(
        col[label] for label in elem.labels
    )
    comb_sub = (
        batch
        + "".join(row[label] for label in comb_labels)
        + "".join(col[label] for label in comb_labels)
    )
    out_sub = (
        batch
        + "".join(row[label] for label in result_labels)
        + "".join(col[label] for label in result_labels)
    )
    elem_tensor = elem.entries.reshape(elem.matrix.dims + elem.matrix.dims)
    comb_tensor = comb_stack.reshape((comb_stack.shape[0],) + tuple(comb_dims) * 2)
    result = np.einsum(f"{elem_sub},{comb_sub}->{out_sub}", elem_tensor, comb_tensor)
    side = int(np.prod([_dims_lookup(elem, comb_labels, comb_dims, l) for l in result_labels]))
    return result.reshape(comb_stack.shape[0], side, side)


def _dims_lookup(
    elem: ChoiOperator, comb_labels: Sequence[str], comb_dims: Sequence[int], label: str
) -> int:
    if label in elem.labels:
        return elem.dim_of(label)
    return comb_dims[list(comb_labels).index(label)]


@dataclass(frozen=True)
class LinkLayout:
    """Labels and normalisation of a link product between fixed wirings."""

    out_labels: tuple[str, ...]
    in_labels: tuple[str, ...]
    dims: tuple[int, ...]
    factor: float


def link_layout(
    elem: ChoiOperator,
    comb_out: Sequence[str],
    comb_in: Sequence[str],
    comb_dims: Sequence[int],
    contracted: Iterable[str],
) -> LinkLayout:
    """Check the wiring of a link product and compute the result layout."""
    contracted = set(contracted)
    comb_labels = tuple(comb_out) + tuple(comb_in)
    for label in contracted:
        if label not in elem.labels or label not in comb_labels:
            raise UnknownLabelError(f"contracted label {label} must appear in both operands")
        comb_dim = comb_dims[comb_labels.index(label)]
        if elem.dim_of(label) != comb_dim:
            raise DimensionMismatchError(
                f"label {label} has dimension {elem.dim_of(label)} vs {comb_dim}"
            )
    out_labels = tuple(l for l in elem.out_labels if l not in contracted) + tuple(
        l for l in comb_out if l not in contracted
    )
    in_labels = tuple(l for l in elem.in_labels if l not in contracted) + tuple(
        l for l in comb_in if l not in contracted
    )
    if len(set(out_labels + in_labels)) != len(out_labels + in_labels):
        raise DimensionMismatchError(
            f"uncontracted labels collide: {out_labels + in_labels}; relabel one operand"
        )
    dims = tuple(_dims_lookup(elem, comb_labels, comb_dims, l) for l in out_labels + in_labels)

    def in_dim(labels: Sequence[str]) -> int:
        return int(np.prod([_dims_lookup(elem, comb_labels, comb_dims, l) for l in labels]))

    factor = in_dim(elem.in_labels) * in_dim(tuple(comb_in)) / in_dim(in_labels)
    return LinkLayout(out_labels, in_labels, dims, factor)


def link_product(
    j_elem: ChoiOperator, j_comb: ChoiOperator, contracted: Iterable[str]
) -> ChoiOperator:
    """Compose two Choi operators along the contracted wires.

    The result is scaled so that Choi normalisation is preserved: for an instrument
    element linked into a two-slot comb this is d_{B_in} d_{B_out} tr(...), for an
    MDI effect linked into a pre-processing channel d_{B_in} tr(...).
    """
    contracted = set(contracted)
    layout = link_layout(
        j_elem, j_comb.out_labels, j_comb.in_labels, j_comb.matrix.dims, contracted
    )
    result = _link_einsum(
        j_elem,
        j_comb.labels,
        j_comb.matrix.dims,
        contracted,
        layout.out_labels + layout.in_labels,
        j_comb.entries[None, :, :],
    )[0]
    return ChoiOperator(
        ComplexMatrix(result * layout.factor, layout.dims),
        layout.out_labels,
        layout.in_labels,
    )


def link_product_matrix(
    j_elem: ChoiOperator,
    comb_out: Sequence[str],
    comb_in: Sequence[str],
    comb_dims: Sequence[int],
    contracted: Iterable[str],
) -> tuple[np.ndarray, LinkLayout]:
    """Matrix of J_comb -> j_elem * J_comb acting on column-major vectorisations."""
    contracted = set(contracted)
    layout = link_layout(j_elem, comb_out, comb_in, comb_dims, contracted)
    n = int(np.prod(comb_dims))
    results = _link_einsum(
        j_elem,
        tuple(comb_out) + tuple(comb_in),
        comb_dims,
        contracted,
        layout.out_labels + layout.in_labels,
        basis_stack(n),
    )
    columns = results.transpose(0, 2, 1).reshape(n * n, -1)
    return columns.T * layout.factor, layout


def basis_stack(n: int) -> np.ndarray:
    """Matrix units E_k with vec(E_k) the k-th standard basis vector."""
    k = np.arange(n * n)
    stack = np.zeros((n * n, n, n), dtype=complex)
    stack[k, k % n, k // n] = 1
    return stack


@dataclass(frozen=True, eq=False)
class NoSignallingReport:
    """Outcome of a comb no-signalling check."""

    no_signalling: bool
    distance: float
    marginal: ChoiOperator | None


def validate_comb_no_signalling(
    j: ChoiOperator,
    from_labels: Sequence[str],
    to_labels: Sequence[str],
    tol: float = FACTORIZATION_TOL,
) -> NoSignallingReport:
    """Check that the inputs `from_labels` cannot signal to the outputs `to_labels`.

    Every other output is traced out; the remainder must factorise as
    F (x) I/d on `from_labels`. F is returned as a Choi operator from the remaining
    inputs to `to_labels`.
    """
    for label in tuple(from_labels) + tuple(to_labels):
        if label not in j.labels:
            raise UnknownLabelError(f"unknown comb label {label}")
    traced = [l for l in j.out_labels if l not in to_labels]
    reduced = trace_out(j.matrix, traced) if traced else j.matrix
    d_from = int(np.prod([j.dim_of(l) for l in from_labels]))
    marginal = trace_out(reduced, from_labels) * d_from
    identity = ComplexMatrix.identity([j.dim_of(l) for l in from_labels], tuple(from_labels))
    product = permute(kron(marginal, identity * (1 / d_from)), reduced.labels)
    distance = float(np.linalg.norm(reduced.entries - product.entries))
    in_labels = tuple(l for l in j.in_labels if l not in from_labels)
    out_labels = tuple(l for l in j.out_labels if l in to_labels)
    ok = distance <= tol
    return NoSignallingReport(
        no_signalling=ok,
        distance=distance,
        marginal=ChoiOperator(marginal, out_labels, in_labels) if ok else None,
    )


def vec_choi(w: ChoiOperator) -> np.ndarray:
    """Column-major vectorisation of a Choi matrix."""
    return vec(w.matrix)
