#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""First-level moment-matrix relaxation of the quantum set of MDI assemblages.

A quantum MDI assemblage can be written with a pure state psi, projective
measurements M_{a|x} for Alice and a projective measurement F_b on B (x) B_in for
Bob. With the compressions F_b^{ij} = <i|F_b|j> on B, every matrix element of the
effects is a moment: <i|E_{ab|x}|j> = <psi|M_{a|x} (x) F_b^{ij}|psi>. The relaxation
asks for a PSD Gram matrix of the operators I, M_{a|x} and F_b^{ij}, with the last
outcome of every measurement eliminated through completeness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy import sparse

from constants import EPS_FEAS, MEMBERSHIP_MAX_DIM
from core.domain import MdiAssemblage
from core.enums import FeasibilityStatus, MembershipVerdict
from core.exceptions import DimensionMismatchError, ProblemTooLargeError
from core.problem import ConicProblem, FeasibilityVerdict, ProblemBuilder
from managers.feasibility import FeasibilityManager
from utils.logging import WithLogging

MOMENTS = "moments"

Term = tuple[complex, "MomentOperator"]


@dataclass(frozen=True)
class MomentOperator:
    """One row of the moment matrix: I, M_{a|x} or F_b^{ij}."""

    kind: str
    a: int = 0
    x: int = 0
    b: int = 0
    i: int = 0
    j: int = 0

    @property
    def dagger(self) -> MomentOperator:
        """(F_b^{ij})^dagger = F_b^{ji}; I and M_{a|x} are Hermitian."""
        if self.kind == "F":
            return MomentOperator("F", b=self.b, i=self.j, j=self.i)
        return self

    def __str__(self) -> str:
        if self.kind == "M":
            return f"M_{self.a}|{self.x}"
        if self.kind == "F":
            return f"F_{self.b}^{self.i}{self.j}"
        return "I"


IDENTITY = MomentOperator("I")


def moment_operators(n_a: int, n_x: int, n_b: int, d: int) -> list[MomentOperator]:
    """Operator rows in order: I, M_{a|x} (a < |A|-1, by x), F_b^{ij} (b < |B|-1, by b, i, j)."""
    operators = [IDENTITY]
    operators += [MomentOperator("M", a=a, x=x) for x in range(n_x) for a in range(n_a - 1)]
    operators += [
        MomentOperator("F", b=b, i=i, j=j)
        for b in range(n_b - 1)
        for i in range(d)
        for j in range(d)
    ]
    return operators


class MomentMatrix:
    """Index bookkeeping between operator pairs and cells of the moment matrix."""

    def __init__(self, n_a: int, n_x: int, n_b: int, d: int):
        self.n_a, self.n_x, self.n_b, self.d = n_a, n_x, n_b, d
        self.operators = moment_operators(n_a, n_x, n_b, d)
        self._index = {op: k for k, op in enumerate(self.operators)}

    @property
    def size(self) -> int:
        """Number of operator rows."""
        return len(self.operators)

    def index(self, op: MomentOperator) -> int:
        """Row of an operator."""
        return self._index[op]

    def cell(self, left: MomentOperator, right: MomentOperator) -> int:
        """Column-major position of <left^dagger right>."""
        return self.index(left) + self.index(right) * self.size

    def expand_m(self, a: int, x: int) -> list[Term]:
        """M_{a|x} in the kept basis, the last outcome being I - sum of the others."""
        if a < self.n_a - 1:
            return [(1, MomentOperator("M", a=a, x=x))]
        return [(1, IDENTITY)] + [
            (-1, MomentOperator("M", a=other, x=x)) for other in range(self.n_a - 1)
        ]

    def expand_f(self, b: int, i: int, j: int) -> list[Term]:
        """F_b^{ij} in the kept basis, the last outcome being delta_ij I - sum of the others."""
        if b < self.n_b - 1:
            return [(1, MomentOperator("F", b=b, i=i, j=j))]
        terms: list[Term] = [(1, IDENTITY)] if i == j else []
        return terms + [
            (-1, MomentOperator("F", b=other, i=i, j=j)) for other in range(self.n_b - 1)
        ]

    def kept_m(self) -> Iterator[MomentOperator]:
        """Alice operators present in the matrix."""
        return (op for op in self.operators if op.kind == "M")

    def kept_f(self) -> Iterator[MomentOperator]:
        """Bob operators present in the matrix."""
        return (op for op in self.operators if op.kind == "F")


class _Rows:
    """Scalar linear equations on vec(moments)."""

    def __init__(self, moments: MomentMatrix):
        self.moments = moments
        self.rows: list[dict[int, complex]] = []
        self.constants: list[complex] = []

    def add(self, terms: Sequence[tuple[complex, MomentOperator, MomentOperator]], value: complex):
        row: dict[int, complex] = {}
        for coef, left, right in terms:
            cell = self.moments.cell(left, right)
            row[cell] = row.get(cell, 0) + coef
        self.rows.append(row)
        self.constants.append(value)

    def matrix(self) -> sparse.csr_matrix:
        n = self.moments.size**2
        data, rows, cols = [], [], []
        for r, row in enumerate(self.rows):
            for cell, coef in row.items():
                rows.append(r)
                cols.append(cell)
                data.append(coef)
        return sparse.csr_matrix(
            (np.asarray(data, dtype=complex), (rows, cols)), shape=(len(self.rows), n)
        )


class MembershipManager(WithLogging):
    """Builds and decides the level-1 membership program.

    `optional_relations` toggles sum_i (F_b^{ij})^dagger F_{b'}^{ij'} = delta_{bb'} F_b^{jj'};
    without them the F-F block of the matrix is unbounded.
    """

    def __init__(self, optional_relations: bool = True):
        self.optional_relations = optional_relations

    def build(self, n: MdiAssemblage) -> ConicProblem:
        """Feasibility problem over the moment matrix of `n`."""
        if n.d_in > MEMBERSHIP_MAX_DIM:
            raise ProblemTooLargeError(
                f"membership test supports d_in <= {MEMBERSHIP_MAX_DIM}, got {n.d_in}"
            )
        if min(n.n_a, n.n_b) < 2:
            raise DimensionMismatchError("membership test needs at least two outcomes per party")
        moments = MomentMatrix(n.n_a, n.n_x, n.n_b, n.d_in)
        builder = ProblemBuilder(
            "level-1 membership", operators=[str(op) for op in moments.operators]
        )
        builder.add_block(MOMENTS, moments.size)
        self.logger.info(f"moment matrix with {moments.size} operator rows")

        for label, rows in (
            ("normalisation", self._normalisation(moments)),
            ("projective Alice measurements", self._projectivity(moments)),
            ("Alice and Bob commute", self._commutation(moments)),
            ("compressions of a Hermitian measurement", self._hermiticity(moments)),
            ("measurement data", self._data(moments, n)),
        ):
            builder.add_equality(label, [(MOMENTS, rows.matrix())], np.array(rows.constants))
        if self.optional_relations:
            rows = self._projective_bob(moments)
            if rows.rows:
                builder.add_equality(
                    "projective Bob measurement",
                    [(MOMENTS, rows.matrix())],
                    np.array(rows.constants),
                )
        return builder.build()

    def _normalisation(self, moments: MomentMatrix) -> _Rows:
        rows = _Rows(moments)
        rows.add([(1, IDENTITY, IDENTITY)], 1)
        return rows

    def _projectivity(self, moments: MomentMatrix) -> _Rows:
        rows = _Rows(moments)
        for m in moments.kept_m():
            rows.add([(1, m, m), (-1, IDENTITY, m)], 0)
            for other in moments.kept_m():
                if other.x == m.x and other.a != m.a:
                    rows.add([(1, m, other)], 0)
        return rows

    def _commutation(self, moments: MomentMatrix) -> _Rows:
        rows = _Rows(moments)
        for m in moments.kept_m():
            for f in moments.kept_f():
                rows.add([(1, m, f), (-1, f.dagger, m)], 0)
        return rows

    def _hermiticity(self, moments: MomentMatrix) -> _Rows:
        rows = _Rows(moments)
        for f in moments.kept_f():
            rows.add([(1, IDENTITY, f.dagger), (-1, f, IDENTITY)], 0)
        return rows

    def _projective_bob(self, moments: MomentMatrix) -> _Rows:
        rows = _Rows(moments)
        d = moments.d
        for b in range(moments.n_b - 1):
            for b_other in range(moments.n_b - 1):
                for j in range(d):
                    for j_other in range(d):
                        terms = [
                            (
                                1,
                                MomentOperator("F", b=b, i=i, j=j),
                                MomentOperator("F", b=b_other, i=i, j=j_other),
                            )
                            for i in range(d)
                        ]
                        if b == b_other:
                            terms.append((-1, IDENTITY, MomentOperator("F", b=b, i=j, j=j_other)))
                        rows.add(terms, 0)
        return rows

    def _data(self, moments: MomentMatrix, n: MdiAssemblage) -> _Rows:
        rows = _Rows(moments)
        for (a, b, x) in sorted(n.elements):
            effect = n.effect(a, b, x)
            for i in range(n.d_in):
                for j in range(n.d_in):
                    terms = [
                        (cm * cf, m, f)
                        for cm, m in moments.expand_m(a, x)
                        for cf, f in moments.expand_f(b, i, j)
                    ]
                    rows.add(terms, effect[i, j])
        return rows


@dataclass(frozen=True, eq=False)
class MembershipResult:
    """Membership verdict with the underlying feasibility verdict."""

    verdict: MembershipVerdict
    feasibility: FeasibilityVerdict
    matrix_size: int

    def to_dict(self) -> dict:
        """JSON-ready summary."""
        return {
            "verdict": self.verdict.value,
            "status": self.feasibility.status.value,
            "gap": self.feasibility.infeasibility_gap,
            "max_residual": self.feasibility.max_residual,
            "matrix_size": self.matrix_size,
        }


def build_membership_test(n: MdiAssemblage, optional_relations: bool = True) -> ConicProblem:
    """Level-1 moment-matrix feasibility problem of an MDI assemblage."""
    return MembershipManager(optional_relations).build(n)


def certify(
    n: MdiAssemblage,
    feasibility: FeasibilityManager | None = None,
    optional_relations: bool = True,
) -> MembershipResult:
    """PostQuantum on robust infeasibility, QuantumCompatibleAtLevel1 on a verified witness.

    QuantumCompatibleAtLevel1 only says that the relaxation is satisfied.
    """
    feasibility = feasibility or FeasibilityManager(eps_feas=EPS_FEAS)
    problem = build_membership_test(n, optional_relations)
    verdict = feasibility.solve(problem)
    mapping = {
        FeasibilityStatus.FEASIBLE: MembershipVerdict.QUANTUM_COMPATIBLE_AT_LEVEL_1,
        FeasibilityStatus.INFEASIBLE: MembershipVerdict.POST_QUANTUM,
        FeasibilityStatus.INDETERMINATE: MembershipVerdict.INDETERMINATE,
    }
    return MembershipResult(mapping[verdict.status], verdict, problem.block(MOMENTS).dim)


def moments_from_realization(
    psi: np.ndarray,
    alice: Sequence[Sequence[np.ndarray]],
    bob: Sequence[np.ndarray],
    d_a: int,
    d_b: int,
    d_in: int,
) -> np.ndarray:
    """Moment matrix <psi|O_k^dagger O_m|psi> of an explicit projective realization.

    `psi` lives on A (x) B, `alice[x][a]` on A and `bob[b]` on B (x) B_in.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    moments = MomentMatrix(len(alice[0]), len(alice), len(bob), d_in)

    def lift(op: MomentOperator) -> np.ndarray:
        if op.kind == "M":
            return np.kron(alice[op.x][op.a], np.eye(d_b))
        if op.kind == "F":
            block = np.asarray(bob[op.b]).reshape(d_b, d_in, d_b, d_in)[:, op.i, :, op.j]
            return np.kron(np.eye(d_a), block)
        return np.eye(d_a * d_b)

    vectors = np.column_stack([lift(op) @ psi for op in moments.operators])
    return vectors.conj().T @ vectors
