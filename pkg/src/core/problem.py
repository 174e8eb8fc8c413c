#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Conic feasibility problems over complex Hermitian PSD blocks.

A problem is a list of named Hermitian blocks X_k >= 0 and affine equalities
sum_k L_k vec(X_k) = c, with complex sparse L_k acting on column-major
vectorisations. Lowering to real data replaces every block of size n by a real
symmetric block Y of size 2n with X = (Y11 + Y22)/2 + i (Y21 - Y12)/2, the inverse of
`real_embed`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Mapping, Sequence

import numpy as np
from scipy import sparse

from core.enums import FeasibilityStatus
from core.exceptions import DimensionMismatchError
from core.tensor import ComplexMatrix, min_eigenvalue, partial_trace, permute, unvec, vec
from utils.logging import WithLogging


@dataclass(frozen=True)
class PsdBlock:
    """Named Hermitian PSD variable; a 1x1 block is a nonnegative scalar."""

    name: str
    dim: int


@dataclass(frozen=True, eq=False)
class LinearTerm:
    """A complex linear map applied to vec(block)."""

    block: str
    coefficients: sparse.csr_matrix


@dataclass(frozen=True, eq=False)
class Equality:
    """sum of terms = constant.

    `side` is set for matrix-valued equalities between Hermitian operators; only their
    upper triangle is lowered since the lower one is its complex conjugate.
    """

    label: str
    terms: tuple[LinearTerm, ...]
    constant: np.ndarray
    side: int | None = None

    @property
    def rows(self) -> int:
        """Number of complex scalar equations."""
        return self.constant.shape[0]


@dataclass(frozen=True, eq=False)
class ConicProblem:
    """Block-PSD variables plus affine equalities, with builder provenance."""

    blocks: tuple[PsdBlock, ...]
    equalities: tuple[Equality, ...]
    provenance: str = ""
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        names = [block.name for block in self.blocks]
        if len(set(names)) != len(names):
            raise DimensionMismatchError("block names must be unique")
        dims = {block.name: block.dim for block in self.blocks}
        for equality in self.equalities:
            for term in equality.terms:
                if term.block not in dims:
                    raise DimensionMismatchError(
                        f"equality {equality.label} references unknown block {term.block}"
                    )
                expected = (equality.rows, dims[term.block] ** 2)
                if term.coefficients.shape != expected:
                    raise DimensionMismatchError(
                        f"equality {equality.label}: term on {term.block} has shape "
                        f"{term.coefficients.shape}, expected {expected}"
                    )
            if equality.side is not None:
                constant = unvec(equality.constant, equality.side)
                if np.max(np.abs(constant - constant.conj().T), initial=0.0) > 1e-9:
                    raise DimensionMismatchError(
                        f"equality {equality.label} has a non-Hermitian constant"
                    )

    def block(self, name: str) -> PsdBlock:
        """Look a block up by name."""
        for block in self.blocks:
            if block.name == name:
                return block
        raise KeyError(name)

    @property
    def n_rows(self) -> int:
        """Total number of complex scalar equations."""
        return sum(equality.rows for equality in self.equalities)

    def residuals(self, values: Mapping[str, np.ndarray]) -> dict[str, float]:
        """Largest absolute violation per equality label for the given block values."""
        result: dict[str, float] = {}
        for equality in self.equalities:
            lhs = np.zeros(equality.rows, dtype=complex)
            for term in equality.terms:
                lhs = lhs + term.coefficients @ vec(values[term.block])
            violation = float(np.max(np.abs(lhs - equality.constant), initial=0.0))
            result[equality.label] = max(result.get(equality.label, 0.0), violation)
        return result

    def max_residual(self, values: Mapping[str, np.ndarray]) -> float:
        """Largest equality violation."""
        return max(self.residuals(values).values(), default=0.0)

    def min_eigenvalue(self, values: Mapping[str, np.ndarray]) -> float:
        """Smallest eigenvalue across all blocks."""
        return min(
            (min_eigenvalue(ComplexMatrix(values[block.name])) for block in self.blocks),
            default=0.0,
        )


@dataclass(frozen=True, eq=False)
class FeasibilityVerdict:
    """Decision on a problem with the data backing it."""

    status: FeasibilityStatus
    witness: Mapping[str, np.ndarray] | None = None
    infeasibility_gap: float | None = None
    max_residual: float | None = None
    min_eigenvalue: float | None = None
    diagnostics: Mapping[str, Any] = field(default_factory=dict)
    provenance: str = ""

    @property
    def feasible(self) -> bool:
        """True for Feasible verdicts."""
        return self.status == FeasibilityStatus.FEASIBLE

    def describe(self) -> str:
        """One-line summary."""
        parts = [self.status.value]
        if self.infeasibility_gap is not None:
            parts.append(f"gap={self.infeasibility_gap:.3e}")
        if self.max_residual is not None:
            parts.append(f"residual={self.max_residual:.3e}")
        if self.min_eigenvalue is not None:
            parts.append(f"min_eig={self.min_eigenvalue:.3e}")
        return " ".join(parts)


class ProblemBuilder(WithLogging):
    """Incremental construction of a ConicProblem."""

    def __init__(self, provenance: str, **metadata: Any):
        self.provenance = provenance
        self.metadata = metadata
        self._blocks: list[PsdBlock] = []
        self._dims: dict[str, int] = {}
        self._equalities: list[Equality] = []

    def add_block(self, name: str, dim: int) -> str:
        """Declare a PSD block and return its name."""
        if name in self._dims:
            raise DimensionMismatchError(f"block {name} declared twice")
        self._blocks.append(PsdBlock(name, dim))
        self._dims[name] = dim
        return name

    def add_equality(
        self,
        label: str,
        terms: Sequence[tuple[str, Any]],
        constant: np.ndarray | complex,
        side: int | None = None,
    ) -> None:
        """Add sum_k L_k vec(X_k) = constant; matrix constants are vectorised column-major."""
        constant = np.asarray(constant, dtype=complex)
        constant = vec(constant) if constant.ndim == 2 else np.atleast_1d(constant)
        merged: dict[str, sparse.csr_matrix] = {}
        for block, coefficients in terms:
            matrix = sparse.csr_matrix(coefficients, dtype=complex)
            merged[block] = merged[block] + matrix if block in merged else matrix
        self._equalities.append(
            Equality(
                label,
                tuple(LinearTerm(block, matrix) for block, matrix in merged.items()),
                constant,
                side,
            )
        )

    def build(self) -> ConicProblem:
        """Freeze the problem."""
        problem = ConicProblem(
            tuple(self._blocks), tuple(self._equalities), self.provenance, dict(self.metadata)
        )
        self.logger.debug(
            f"{self.provenance}: {len(problem.blocks)} blocks, {problem.n_rows} equations"
        )
        return problem


def linear_map_matrix(fn: Callable[[np.ndarray], np.ndarray], n: int) -> sparse.csr_matrix:
    """Matrix of a linear map on n x n matrices, acting on column-major vectorisations."""
    columns = []
    for k in range(n * n):
        unit = np.zeros((n, n), dtype=complex)
        unit[k % n, k // n] = 1
        columns.append(vec(np.atleast_2d(fn(unit))))
    return sparse.csr_matrix(np.column_stack(columns))


@lru_cache(maxsize=None)
def identity_map(n: int) -> sparse.csr_matrix:
    """vec(X) -> vec(X)."""
    return sparse.identity(n * n, dtype=complex, format="csr")


@lru_cache(maxsize=None)
def trace_map(n: int) -> sparse.csr_matrix:
    """vec(X) -> tr X."""
    return sparse.csr_matrix(vec(np.eye(n, dtype=complex))[None, :])


@lru_cache(maxsize=None)
def partial_trace_map(dims: tuple[int, ...], keep: tuple[int, ...]) -> sparse.csr_matrix:
    """vec(X) -> vec(tr_{not keep} X) for X on subsystems `dims`."""
    n = int(np.prod(dims))
    return linear_map_matrix(
        lambda x: partial_trace(ComplexMatrix(x, dims), keep).entries,
        n,
    )


@lru_cache(maxsize=None)
def tensor_identity_map(
    dims: tuple[int, ...], id_dim: int, order: tuple[int, ...], scale: float
) -> sparse.csr_matrix:
    """vec(F) -> vec(permute(F (x) scale I_{id_dim}, order)) for F on subsystems `dims`."""
    n = int(np.prod(dims))
    return linear_map_matrix(
        lambda f: permute(
            ComplexMatrix(np.kron(f, scale * np.eye(id_dim)), dims + (id_dim,)), order
        ).entries,
        n,
    )


@lru_cache(maxsize=None)
def scalar_identity_map(d: int, scale: float) -> sparse.csr_matrix:
    """1x1 block t -> vec(scale t I_d)."""
    return sparse.csr_matrix(scale * vec(np.eye(d, dtype=complex))[:, None])


@dataclass(frozen=True, eq=False)
class RealLowering:
    """Real data of a problem: G vec(Y) = h over symmetric blocks Y of size 2n."""

    block_names: tuple[str, ...]
    block_sizes: tuple[int, ...]
    offsets: tuple[int, ...]
    matrix: sparse.csr_matrix
    rhs: np.ndarray
    row_labels: tuple[str, ...]

    @property
    def n_variables(self) -> int:
        """Length of the concatenated vec(Y_k)."""
        return int(sum(size * size for size in self.block_sizes))

    def unpack(self, z: np.ndarray) -> dict[str, np.ndarray]:
        """Split a concatenated vector into symmetric real blocks."""
        blocks = {}
        for name, size, offset in zip(self.block_names, self.block_sizes, self.offsets):
            y = unvec(z[offset : offset + size * size], size).real
            blocks[name] = (y + y.T) / 2
        return blocks


@lru_cache(maxsize=None)
def _embedding_selectors(n: int) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
    """P_A, P_B with vec(A) = P_A vec(Y), vec(B) = P_B vec(Y) for Y of size 2n."""
    rows, cols_a1, cols_a2, cols_b1, cols_b2 = [], [], [], [], []
    side = 2 * n
    for j in range(n):
        for i in range(n):
            rows.append(i + j * n)
            cols_a1.append(i + j * side)
            cols_a2.append((n + i) + (n + j) * side)
            cols_b1.append((n + i) + j * side)
            cols_b2.append(i + (n + j) * side)
    shape = (n * n, side * side)
    half = np.full(len(rows), 0.5)
    p_a = sparse.csr_matrix((np.concatenate([half, half]), (rows * 2, cols_a1 + cols_a2)), shape)
    p_b = sparse.csr_matrix((np.concatenate([half, -half]), (rows * 2, cols_b1 + cols_b2)), shape)
    return p_a, p_b


def lower_to_real(problem: ConicProblem) -> RealLowering:
    """Split every complex equation into real and imaginary rows over symmetric blocks."""
    names = tuple(block.name for block in problem.blocks)
    sizes = tuple(2 * block.dim for block in problem.blocks)
    offsets = tuple(int(v) for v in np.cumsum((0,) + tuple(s * s for s in sizes))[:-1])
    index = {name: i for i, name in enumerate(names)}
    n_vars = int(sum(s * s for s in sizes))

    row_blocks, rhs, labels = [], [], []
    for equality in problem.equalities:
        keep = np.arange(equality.rows)
        if equality.side is not None:
            keep = keep[(keep % equality.side) <= (keep // equality.side)]
        real_parts, imag_parts = [], []
        for term in equality.terms:
            block = problem.blocks[index[term.block]]
            p_a, p_b = _embedding_selectors(block.dim)
            coefficients = term.coefficients[keep]
            l_r, l_i = coefficients.real, coefficients.imag
            offset = offsets[index[term.block]]
            width = sizes[index[term.block]] ** 2
            pad = lambda m: sparse.hstack(  # noqa: E731
                [
                    sparse.csr_matrix((m.shape[0], offset)),
                    m,
                    sparse.csr_matrix((m.shape[0], n_vars - offset - width)),
                ]
            )
            real_parts.append(pad(l_r @ p_a - l_i @ p_b))
            imag_parts.append(pad(l_i @ p_a + l_r @ p_b))
        constant = equality.constant[keep]
        for parts, values in ((real_parts, constant.real), (imag_parts, constant.imag)):
            if parts:
                stacked = sparse.csr_matrix(sum(parts[1:], parts[0]))
            else:
                stacked = sparse.csr_matrix((len(keep), n_vars))
            stacked.eliminate_zeros()
            nonzero = np.diff(stacked.indptr) > 0
            informative = nonzero | (np.abs(values) > 0)
            row_blocks.append(stacked[informative])
            rhs.append(values[informative])
            labels.extend([equality.label] * int(informative.sum()))

    matrix = (
        sparse.vstack(row_blocks, format="csr") if row_blocks else sparse.csr_matrix((0, n_vars))
    )
    return RealLowering(
        names,
        sizes,
        offsets,
        matrix,
        np.concatenate(rhs) if rhs else np.zeros(0),
        tuple(labels),
    )
