#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Linear witness functionals on Bob-with-input assemblages."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from core.domain import BwiAssemblage
from core.exceptions import DimensionMismatchError, InvalidOperatorError
from core.tensor import I2, PAULIS, ComplexMatrix, hermiticity_defect
from utils.logging import WithLogging

SUPPORT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class BwiFunctional:
    """S[sigma] = sum_{a,x,y} tr(F_{axy} sigma_{a|xy}) for Hermitian F_{axy}."""

    coefficients: Mapping[tuple[int, int, int], ComplexMatrix]
    name: str = ""

    def __post_init__(self):
        for key, coefficient in self.coefficients.items():
            if hermiticity_defect(coefficient) > 1e-9:
                raise InvalidOperatorError(f"coefficient {key} is not Hermitian")

    def coefficient(self, a: int, x: int, y: int) -> np.ndarray:
        """F_{axy}."""
        return self.coefficients[(a, x, y)].entries


class FunctionalManager(WithLogging):
    """Evaluates functionals and records the value."""

    def evaluate(self, f: BwiFunctional, s: BwiAssemblage) -> float:
        """sum_{a,x,y} tr(F_{axy} sigma_{a|xy}), real up to 1e-9."""
        if set(f.coefficients) != set(s.elements):
            raise DimensionMismatchError(
                f"functional {f.name or 'S'} and assemblage have different labels"
            )
        total = 0j
        for key, coefficient in f.coefficients.items():
            sigma = s.elements[key]
            if coefficient.side != sigma.side:
                raise DimensionMismatchError(
                    f"coefficient {key} acts on dimension {coefficient.side}, "
                    f"element on {sigma.side}"
                )
            total += np.trace(coefficient.entries @ sigma.entries)
        if abs(total.imag) > 1e-9:
            raise InvalidOperatorError(f"functional value has imaginary part {total.imag:.3g}")
        self.logger.debug(f"{f.name or 'S'} = {total.real:.12g}")
        return float(total.real)


def _pauli_projector(a: int, x: int, y: int, sign: int) -> np.ndarray:
    """1/2 (I + sign (-1)^a sigma_x), transposed when y = 1."""
    p = (I2 + sign * (-1) ** a * PAULIS[x]) / 2
    return p.T if y else p


def make_sptp(n_a: int = 2, n_x: int = 3, n_y: int = 2) -> BwiFunctional:
    """S_PTP with F_{axy} = 1/2 (I - (-1)^a sigma_x)^{T^y}; x = 0, 1, 2 are X, Y, Z."""
    if n_a != 2 or n_x > 3 or n_y > 2:
        raise DimensionMismatchError("S_PTP is defined for |A| = 2, |X| <= 3, |Y| <= 2")
    return BwiFunctional(
        {
            (a, x, y): ComplexMatrix(_pauli_projector(a, x, y, -1))
            for a in range(n_a)
            for x in range(n_x)
            for y in range(n_y)
        },
        name="S_PTP",
    )


def evaluate(f: BwiFunctional, s: BwiAssemblage) -> float:
    """Value of `f` on `s`."""
    return FunctionalManager().evaluate(f, s)


def sptp_support_check(s: BwiAssemblage, tol: float = SUPPORT_TOL) -> bool:
    """True iff every sigma_{a|xy} = alpha 1/2 (I + (-1)^a sigma_x)^{T^y} with alpha in [0, 1].

    These are exactly the assemblages on which S_PTP reaches its minimum 0.
    """
    if s.d_b != 2 or s.n_a != 2 or s.n_x > 3 or s.n_y > 2:
        raise DimensionMismatchError(
            "support check needs a qubit with |A| = 2, |X| <= 3, |Y| <= 2"
        )
    for (a, x, y), sigma in s.elements.items():
        support = _pauli_projector(a, x, y, +1)
        alpha = float(np.real(np.trace(sigma.entries)))
        if alpha < -tol or alpha > 1 + tol:
            return False
        if np.max(np.abs(sigma.entries - alpha * support)) > tol:
            return False
    return True
