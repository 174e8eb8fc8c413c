#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Definition of the assemblage, box and report model classes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

import numpy as np
from scipy.optimize import linprog

from constants import B, B_IN, B_OUT, NO_SIGNALLING_TOL
from core.choi import ChoiOperator
from core.enums import AssemblageKind
from core.exceptions import DimensionMismatchError, InvalidOperatorError
from core.tensor import ComplexMatrix, hermiticity_defect, min_eigenvalue


@dataclass(frozen=True)
class InvariantCheck:
    """One named invariant with its numeric residual."""

    name: str
    passed: bool
    residual: float


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validating an assemblage or box against its family invariants."""

    subject: str
    checks: tuple[InvariantCheck, ...]

    @property
    def valid(self) -> bool:
        """True when every invariant passed."""
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[InvariantCheck]:
        """Violated invariants."""
        return [check for check in self.checks if not check.passed]

    def summary(self) -> str:
        """Human readable, one line per invariant."""
        return "\n".join(
            f"{'PASS' if c.passed else 'FAIL'} {c.name} (residual {c.residual:.3e})"
            for c in self.checks
        )


class _Checks:
    """Accumulates the worst residual per invariant name."""

    def __init__(self, tol: float):
        self.tol = tol
        self.residuals: dict[str, float] = {}

    def add(self, name: str, residual: float) -> None:
        self.residuals[name] = max(self.residuals.get(name, 0.0), float(residual))

    def psd(self, name: str, m: ComplexMatrix) -> None:
        self.add(f"{name} Hermitian", hermiticity_defect(m))
        self.add(f"{name} PSD", max(0.0, -min_eigenvalue(m)))

    def report(self, subject: str) -> ValidationReport:
        return ValidationReport(
            subject,
            tuple(
                InvariantCheck(name, residual <= self.tol, residual)
                for name, residual in self.residuals.items()
            ),
        )


def _max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m), initial=0.0))


@dataclass(frozen=True, eq=False)
class ChannelAssemblage:
    """Instruments I_{a|x} from B_in to B_out, stored as Choi operators keyed by (a, x)."""

    elements: Mapping[tuple[int, int], ChoiOperator]
    n_a: int
    n_x: int
    kind: AssemblageKind = field(default=AssemblageKind.CHANNEL, init=False)

    def __post_init__(self):
        expected = set(itertools.product(range(self.n_a), range(self.n_x)))
        if set(self.elements) != expected:
            raise DimensionMismatchError(f"channel assemblage needs keys {sorted(expected)}")
        first = self.elements[(0, 0)]
        for key, element in self.elements.items():
            if element.labels != first.labels or element.matrix.dims != first.matrix.dims:
                raise DimensionMismatchError(f"element {key} has layout {element.labels}")

    def element(self, a: int, x: int) -> ChoiOperator:
        """J_{a|x}."""
        return self.elements[(a, x)]

    @property
    def d_in(self) -> int:
        """Dimension of Bob's quantum input."""
        return self.elements[(0, 0)].d_in

    @property
    def d_out(self) -> int:
        """Dimension of Bob's quantum output."""
        return self.elements[(0, 0)].d_out

    @property
    def alphabets(self) -> dict[str, int]:
        """Alphabet sizes."""
        return {"A": self.n_a, "X": self.n_x}

    @property
    def dims(self) -> dict[str, int]:
        """Quantum dimensions."""
        return {B_IN: self.d_in, B_OUT: self.d_out}

    def marginal_channel(self, x: int) -> ChoiOperator:
        """sum_a J_{a|x}."""
        total = self.elements[(0, x)]
        for a in range(1, self.n_a):
            total = total + self.elements[(a, x)]
        return total

    def distribution(self) -> np.ndarray:
        """p(a|x) = tr J_{a|x}, indexed [a, x]."""
        return np.array(
            [
                [self.elements[(a, x)].matrix.trace().real for x in range(self.n_x)]
                for a in range(self.n_a)
            ]
        )

    def validate(self, tol: float = NO_SIGNALLING_TOL) -> ValidationReport:
        """Check PSD elements, x-independent CPTP marginal and a well-defined p(a|x)."""
        checks = _Checks(tol)
        eye = np.eye(self.d_in) / self.d_in
        reference = self.marginal_channel(0).entries
        for (a, x), element in self.elements.items():
            checks.psd("element", element.matrix)
            marginal = element.output_marginal().entries
            checks.add(
                "outcome independent of Bob's input",
                _max_abs(marginal - element.matrix.trace() * eye),
            )
        for x in range(self.n_x):
            channel = self.marginal_channel(x)
            checks.add(
                "marginal channel trace preserving",
                _max_abs(channel.output_marginal().entries - eye),
            )
            checks.add("marginal channel independent of x", _max_abs(channel.entries - reference))
        return checks.report("channel assemblage")


@dataclass(frozen=True, eq=False)
class BwiAssemblage:
    """Subnormalised states sigma_{a|xy} on Bob's output, keyed by (a, x, y)."""

    elements: Mapping[tuple[int, int, int], ComplexMatrix]
    n_a: int
    n_x: int
    n_y: int
    kind: AssemblageKind = field(default=AssemblageKind.BWI, init=False)

    def __post_init__(self):
        expected = set(itertools.product(range(self.n_a), range(self.n_x), range(self.n_y)))
        if set(self.elements) != expected:
            raise DimensionMismatchError(
                f"Bob-with-input assemblage needs keys {sorted(expected)}"
            )
        sides = {element.side for element in self.elements.values()}
        if len(sides) != 1:
            raise DimensionMismatchError(f"elements have different dimensions {sorted(sides)}")

    def element(self, a: int, x: int, y: int) -> ComplexMatrix:
        """sigma_{a|xy}."""
        return self.elements[(a, x, y)]

    @property
    def d_b(self) -> int:
        """Dimension of Bob's output."""
        return self.elements[(0, 0, 0)].side

    @property
    def alphabets(self) -> dict[str, int]:
        """Alphabet sizes."""
        return {"A": self.n_a, "X": self.n_x, "Y": self.n_y}

    @property
    def dims(self) -> dict[str, int]:
        """Quantum dimensions."""
        return {B: self.d_b}

    def as_choi(self, a: int, x: int, y: int) -> ChoiOperator:
        """The element as the Choi operator of a preparation on B."""
        return ChoiOperator(self.elements[(a, x, y)], (B,), ())

    def distribution(self) -> np.ndarray:
        """p(a|x) read at y = 0, indexed [a, x]."""
        return np.array(
            [
                [self.elements[(a, x, 0)].trace().real for x in range(self.n_x)]
                for a in range(self.n_a)
            ]
        )

    def validate(self, tol: float = NO_SIGNALLING_TOL) -> ValidationReport:
        """Check PSD elements, y-independent p(a|x), normalisation and x-independent marginals."""
        checks = _Checks(tol)
        for element in self.elements.values():
            checks.psd("element", element)
        for x, y in itertools.product(range(self.n_x), range(self.n_y)):
            for a in range(self.n_a):
                checks.add(
                    "p(a|x) independent of y",
                    abs(self.elements[(a, x, y)].trace() - self.elements[(a, x, 0)].trace()),
                )
            marginal = sum(self.elements[(a, x, y)].entries for a in range(self.n_a))
            reference = sum(self.elements[(a, 0, y)].entries for a in range(self.n_a))
            checks.add("normalisation", abs(np.trace(marginal) - 1))
            checks.add("Bob's marginal independent of x", _max_abs(marginal - reference))
        return checks.report("Bob-with-input assemblage")


@dataclass(frozen=True, eq=False)
class MdiAssemblage:
    """Measurement channels N_{ab|x} with quantum input, keyed by (a, b, x).

    Elements are Choi operators with trivial output: J = E^T / d for the effect E with
    N_{ab|x}(rho) = tr(E rho).
    """

    elements: Mapping[tuple[int, int, int], ChoiOperator]
    n_a: int
    n_b: int
    n_x: int
    kind: AssemblageKind = field(default=AssemblageKind.MDI, init=False)

    def __post_init__(self):
        expected = set(itertools.product(range(self.n_a), range(self.n_b), range(self.n_x)))
        if set(self.elements) != expected:
            raise DimensionMismatchError(f"MDI assemblage needs keys {sorted(expected)}")
        for key, element in self.elements.items():
            if element.out_labels:
                raise DimensionMismatchError(f"element {key} must have a trivial output")
        if len({element.d_in for element in self.elements.values()}) != 1:
            raise DimensionMismatchError("elements have different input dimensions")

    def element(self, a: int, b: int, x: int) -> ChoiOperator:
        """J_{ab|x}."""
        return self.elements[(a, b, x)]

    def effect(self, a: int, b: int, x: int) -> np.ndarray:
        """E_{ab|x} with N_{ab|x}(rho) = tr(E rho)."""
        element = self.elements[(a, b, x)]
        return element.d_in * element.entries.T

    @property
    def d_in(self) -> int:
        """Dimension of Bob's quantum input."""
        return self.elements[(0, 0, 0)].d_in

    @property
    def alphabets(self) -> dict[str, int]:
        """Alphabet sizes."""
        return {"A": self.n_a, "B": self.n_b, "X": self.n_x}

    @property
    def dims(self) -> dict[str, int]:
        """Quantum dimensions."""
        return {B_IN: self.d_in}

    def distribution(self) -> np.ndarray:
        """p(a|x) = sum_b tr J_{ab|x}, indexed [a, x]."""
        return np.array(
            [
                [
                    sum(self.elements[(a, b, x)].matrix.trace().real for b in range(self.n_b))
                    for x in range(self.n_x)
                ]
                for a in range(self.n_a)
            ]
        )

    def validate(self, tol: float = NO_SIGNALLING_TOL) -> ValidationReport:
        """Check PSD elements, sum_b N_{ab|x} = p(a|x) tr, x-independent sum_a N_{ab|x}."""
        checks = _Checks(tol)
        eye = np.eye(self.d_in) / self.d_in
        for element in self.elements.values():
            checks.psd("element", element.matrix)
        for x in range(self.n_x):
            total = np.zeros((self.d_in, self.d_in), dtype=complex)
            for a in range(self.n_a):
                partial = sum(self.elements[(a, b, x)].entries for b in range(self.n_b))
                checks.add(
                    "sum over b proportional to the trace",
                    _max_abs(partial - np.trace(partial) * eye),
                )
                total = total + partial
            checks.add("normalisation", _max_abs(total - eye))
            for b in range(self.n_b):
                marginal = sum(self.elements[(a, b, x)].entries for a in range(self.n_a))
                reference = sum(self.elements[(a, b, 0)].entries for a in range(self.n_a))
                checks.add("Bob's measurement independent of x", _max_abs(marginal - reference))
        return checks.report("MDI assemblage")


Assemblage = Union[ChannelAssemblage, BwiAssemblage, MdiAssemblage]


@dataclass(frozen=True, eq=False)
class BoxDistribution:
    """Bipartite correlations p(a, b | x, y), stored as an array indexed [a, b, x, y]."""

    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        if table.ndim != 4:
            raise DimensionMismatchError(f"box table must have 4 axes, got {table.ndim}")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_binary_marginals(
        cls, p_a1: np.ndarray, p_b1: np.ndarray, p_11: np.ndarray
    ) -> BoxDistribution:
        """Complete a binary-output box from p_A(1|x), p_B(1|y) and p(11|xy).

        The remaining entries follow from normalisation and no-signalling.
        """
        p_a1, p_b1, p_11 = (np.asarray(v, dtype=float) for v in (p_a1, p_b1, p_11))
        n_x, n_y = p_11.shape
        table = np.zeros((2, 2, n_x, n_y))
        for x, y in itertools.product(range(n_x), range(n_y)):
            table[1, 1, x, y] = p_11[x, y]
            table[1, 0, x, y] = p_a1[x] - p_11[x, y]
            table[0, 1, x, y] = p_b1[y] - p_11[x, y]
            table[0, 0, x, y] = 1 - p_a1[x] - p_b1[y] + p_11[x, y]
        return cls(table)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        """(|A|, |B|, |X|, |Y|)."""
        return self.table.shape  # type: ignore[return-value]

    def p(self, a: int, b: int, x: int, y: int) -> float:
        """p(ab|xy)."""
        return float(self.table[a, b, x, y])

    def marginal_a(self) -> np.ndarray:
        """p(a|x, y) indexed [a, x, y]."""
        return self.table.sum(axis=1)

    def marginal_b(self) -> np.ndarray:
        """p(b|x, y) indexed [b, x, y]."""
        return self.table.sum(axis=0)

    def correlator(self, x: int, y: int) -> float:
        """E_xy = sum_ab (-1)^(a+b) p(ab|xy) for binary outcomes."""
        signs = np.array([[1, -1], [-1, 1]])
        return float(np.sum(signs * self.table[:2, :2, x, y]))

    def chsh_value(self) -> float:
        """sum_xy (-1)^(xy) E_xy over x, y in {0, 1}."""
        return sum((-1) ** (x * y) * self.correlator(x, y) for x in range(2) for y in range(2))

    def validate(self, tol: float = NO_SIGNALLING_TOL) -> ValidationReport:
        """Check nonnegativity, normalisation and no-signalling both ways."""
        checks = _Checks(tol)
        checks.add("nonnegative", max(0.0, -float(self.table.min())))
        checks.add("normalisation", _max_abs(self.table.sum(axis=(0, 1)) - 1))
        p_a, p_b = self.marginal_a(), self.marginal_b()
        checks.add("no signalling from Bob", _max_abs(p_a - p_a[:, :, :1]))
        checks.add("no signalling from Alice", _max_abs(p_b - p_b[:, :1, :]))
        return checks.report("box")

    def is_local(self, tol: float = 1e-9) -> bool:
        """True when the box is a mixture of local deterministic boxes."""
        n_a, n_b, n_x, n_y = self.shape
        columns = []
        for alice in itertools.product(range(n_a), repeat=n_x):
            for bob in itertools.product(range(n_b), repeat=n_y):
                vertex = np.zeros(self.shape)
                for x, y in itertools.product(range(n_x), range(n_y)):
                    vertex[alice[x], bob[y], x, y] = 1
                columns.append(vertex.ravel())
        a_eq = np.column_stack(columns)
        result = linprog(
            np.zeros(a_eq.shape[1]),
            A_eq=a_eq,
            b_eq=self.table.ravel(),
            bounds=(0, None),
            method="highs",
        )
        return result.status == 0 and _max_abs(a_eq @ result.x - self.table.ravel()) <= tol


def validate(
    subject: Assemblage | BoxDistribution, tol: float = NO_SIGNALLING_TOL
) -> ValidationReport:
    """Validate any assemblage or box against its family invariants."""
    if not hasattr(subject, "validate"):
        raise InvalidOperatorError(f"cannot validate {type(subject).__name__}")
    return subject.validate(tol)


def iter_keys(a: Assemblage) -> Iterator[tuple[int, ...]]:
    """Element keys in canonical (lexicographic) order."""
    return iter(sorted(a.elements))


def bwi_measure_out(
    s: BwiAssemblage, measurement: list[np.ndarray], tol: float = 1e-8
) -> BoxDistribution:
    """p(ab|xy) = tr(N_b sigma_{a|xy}) for a POVM {N_b} on Bob's output."""
    povm = [np.asarray(n, dtype=complex) for n in measurement]
    if any(n.shape != (s.d_b, s.d_b) for n in povm):
        raise DimensionMismatchError(f"measurement must act on dimension {s.d_b}")
    if _max_abs(sum(povm) - np.eye(s.d_b)) > tol:
        raise InvalidOperatorError("measurement elements do not sum to the identity")
    if any(min_eigenvalue(ComplexMatrix(n)) < -tol for n in povm):
        raise InvalidOperatorError("measurement elements must be PSD")
    table = np.zeros((s.n_a, len(povm), s.n_x, s.n_y))
    for (a, x, y), sigma in s.elements.items():
        for b, effect in enumerate(povm):
            table[a, b, x, y] = np.real(np.trace(effect @ sigma.entries))
    return BoxDistribution(table)
