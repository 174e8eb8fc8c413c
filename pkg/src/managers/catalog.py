#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Named example assemblages and boxes.

Entries are addressed as `name` or `name:key=value,key=value`, e.g.
`r-family:theta=pi/8,axis=z`. Sets of entries use brace products:
`r-family:{pi/2,pi/8}x{x,y,z}` expands to one entry per (theta, axis) pair.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from constants import (
    I_PR,
    I_PTP,
    N_PR,
    N_PTP,
    P_AQ,
    PR_BOX,
    R_FAMILY,
    SIGMA_AQ,
    SIGMA_CHSH,
    SIGMA_PR,
    SIGMA_PR_RESTRICTED,
    SIGMA_PTP,
)
from core.choi import choi_of_map
from core.domain import (
    Assemblage,
    BoxDistribution,
    BwiAssemblage,
    ChannelAssemblage,
    MdiAssemblage,
)
from core.enums import RotationAxis
from core.exceptions import ParameterRangeError, UnknownCatalogEntryError
from core.realization import bwi_from_quantum, channel_from_quantum, mdi_from_quantum
from core.tensor import (
    I2,
    PAULIS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    ComplexMatrix,
    bell_state,
    controlled,
    ket,
    projector,
    rotation,
)
from utils.logging import WithLogging

Entry = Union[Assemblage, BoxDistribution]

AXIS_INDEX = {RotationAxis.X: 0, RotationAxis.Y: 1, RotationAxis.Z: 2}

# Bob's measurement in the controlled-transpose MDI example
N_PTP_POVM = (I2 / 3 + SIGMA_Y / 3, 2 * I2 / 3 - SIGMA_Y / 3)

_ANGLE = re.compile(r"^(?P<coef>[+-]?\d*\.?\d*)\s*\*?\s*pi(?:\s*/\s*(?P<den>\d+(?:\.\d*)?))?$")


def parse_angle(text: str) -> float:
    """Angle given as a float or as `[c]pi[/d]`, e.g. `pi/8`, `3pi/4`, `0.25`."""
    text = text.strip().lower()
    match = _ANGLE.match(text)
    if match:
        coef = match.group("coef")
        value = math.pi * (float(coef) if coef not in ("", "+", "-") else float(f"{coef}1"))
        return value / float(match.group("den")) if match.group("den") else value
    try:
        return float(text)
    except ValueError:
        raise ParameterRangeError(f"cannot parse angle {text!r}") from None


def format_angle(theta: float) -> str:
    """Inverse of `parse_angle` for pi/n angles, decimal otherwise."""
    ratio = math.pi / theta
    if abs(ratio - round(ratio)) < 1e-12:
        return "pi" if round(ratio) == 1 else f"pi/{round(ratio)}"
    return f"{theta:.12g}"


def pauli_projectors(transposed: bool = False, n_x: int = 3) -> list[list[np.ndarray]]:
    """M_{a|x} = 1/2 (I + (-1)^a sigma_x) with x = 0, 1, 2 the X, Y, Z axes."""
    povm = [[(I2 + (-1) ** a * PAULIS[x]) / 2 for a in range(2)] for x in range(n_x)]
    return [[m.T for m in family] for family in povm] if transposed else povm


def computational_and_x() -> list[list[np.ndarray]]:
    """sigma_z projectors for x = 0, sigma_x projectors for x = 1."""
    return [[(I2 + (-1) ** a * pauli) / 2 for a in range(2)] for pauli in (SIGMA_Z, SIGMA_X)]


def _blocks(x: np.ndarray) -> np.ndarray:
    """Operator on B (x) B_in as an array indexed [b, in, b', in']."""
    return np.asarray(x).reshape(2, 2, 2, 2)


def controlled_transpose(x: np.ndarray) -> np.ndarray:
    """CT on B (x) B_in -> B_out: transpose B when the B_in control is |1>, discard B_in."""
    blocks = _blocks(x)
    return blocks[:, 0, :, 0] + blocks[:, 1, :, 1].T


def r_family(theta: float, axis: RotationAxis | str = RotationAxis.Y) -> ChannelAssemblage:
    """Bob rotates B_in about `axis` by theta controlled on B, then discards B."""
    axis = RotationAxis(axis)
    if not 0 < theta <= math.pi / 2 + 1e-12:
        raise ParameterRangeError(f"theta must lie in (0, pi/2], got {theta}")
    gate = controlled(rotation(AXIS_INDEX[axis], theta))

    def gamma(x: np.ndarray) -> np.ndarray:
        return np.einsum("ijik->jk", _blocks(gate @ x @ gate.conj().T))

    return channel_from_quantum(bell_state(), computational_and_x(), gamma, 2, 2)


def i_ptp() -> ChannelAssemblage:
    """Bell state, transposed Pauli measurements, controlled transpose for Bob."""
    return channel_from_quantum(
        bell_state(),
        pauli_projectors(transposed=True),
        controlled_transpose,
        2,
        2,
        require_cp=False,
    )


def _flip_on_product(a: int, x: int) -> Callable[[np.ndarray], np.ndarray]:
    def apply(rho: np.ndarray) -> np.ndarray:
        return sum(rho[y, y] * projector(ket(a ^ (x * y), 2)) / 2 for y in range(2))

    return apply


def _prepare(a: int) -> Callable[[np.ndarray], np.ndarray]:
    def apply(rho: np.ndarray) -> np.ndarray:
        return np.trace(rho) * a * I2 / 2

    return apply


def i_pr() -> ChannelAssemblage:
    """Measure B_in in the computational basis, flip B when x y = 1; prepare a I/2 at x = 2."""
    elements = {}
    for a in range(2):
        for x in range(3):
            action = _flip_on_product(a, x) if x < 2 else _prepare(a)
            elements[(a, x)] = choi_of_map(action, 2, 2)
    return ChannelAssemblage(elements, n_a=2, n_x=3)


def sigma_ptp() -> BwiAssemblage:
    """Steered Pauli eigenstates, transposed for y = 1."""
    return bwi_from_quantum(
        bell_state(),
        pauli_projectors(transposed=True),
        (lambda rho: rho, lambda rho: rho.T),
        require_cp=False,
    )


def sigma_pr(restricted: bool = False) -> BwiAssemblage:
    """sigma_{a|xy} = |a + xy><a + xy| / 2 for x in {0, 1} and a I/2 for x = 2.

    `restricted` drops x = 2.
    """
    n_x = 2 if restricted else 3
    elements = {}
    for a, x, y in itertools.product(range(2), range(n_x), range(2)):
        state = projector(ket(a ^ (x * y), 2)) / 2 if x < 2 else a * I2 / 2
        elements[(a, x, y)] = ComplexMatrix(state)
    return BwiAssemblage(elements, n_a=2, n_x=n_x, n_y=2)


def p_aq() -> BoxDistribution:
    """Almost-quantum box from p_A(1|x), p_B(1|y), p(11|xy); CHSH about 2.37 with E01 negated."""
    return BoxDistribution.from_binary_marginals(
        p_a1=[9 / 20, 2 / 11],
        p_b1=[2 / 11, 9 / 20],
        p_11=[[22 / 125, 37 / 700], [math.sqrt(2) / 9, 22 / 125]],
    )


def pr_box() -> BoxDistribution:
    """p(ab|xy) = 1/2 when a + b = xy mod 2."""
    table = np.zeros((2, 2, 2, 2))
    for a, b, x, y in itertools.product(range(2), repeat=4):
        table[a, b, x, y] = 0.5 * ((a ^ b) == x * y)
    return BoxDistribution(table)


def bwi_from_box(p: BoxDistribution) -> BwiAssemblage:
    """sigma_{a|xy} = sum_b p(ab|xy) |b><b|."""
    n_a, n_b, n_x, n_y = p.shape
    elements = {
        (a, x, y): ComplexMatrix(np.diag(p.table[a, :, x, y]).astype(complex))
        for a, x, y in itertools.product(range(n_a), range(n_x), range(n_y))
    }
    return BwiAssemblage(elements, n_a=n_a, n_x=n_x, n_y=n_y)


def sigma_aq() -> BwiAssemblage:
    """The almost-quantum box with Bob's output encoded in the computational basis."""
    return bwi_from_box(p_aq())


def sigma_chsh() -> BwiAssemblage:
    """Bell state, sigma_z and sigma_x measurements, identity for both values of y."""
    return bwi_from_quantum(bell_state(), computational_and_x(), (lambda rho: rho,) * 2)


def n_ptp() -> MdiAssemblage:
    """Controlled transpose on B (x) B_in, then Bob measures B with N_PTP_POVM.

    Alice measures transposed Pauli projectors, which swaps her outcomes at the Y input.
    """

    def theta(n_b: np.ndarray) -> Callable[[np.ndarray], complex]:
        return lambda x: np.trace(n_b @ controlled_transpose(x))

    return mdi_from_quantum(
        bell_state(), pauli_projectors(transposed=True), [theta(n) for n in N_PTP_POVM], 2
    )


def n_pr() -> MdiAssemblage:
    """Outcome b = a + x y for the B_in basis state y; N = tr / 4 at x = 2."""
    elements = {}
    for a, b, x in itertools.product(range(2), range(2), range(3)):
        if x < 2:
            effect = sum(
                (projector(ket(y, 2)) / 2 for y in range(2) if b == a ^ (x * y)),
                np.zeros((2, 2), dtype=complex),
            )
        else:
            effect = I2 / 4
        elements[(a, b, x)] = choi_of_map(lambda rho, e=effect: np.trace(e @ rho), 2, 1)
    return MdiAssemblage(elements, n_a=2, n_b=2, n_x=3)


@dataclass(frozen=True)
class CatalogEntry:
    """A parsed entry name with its parameters."""

    name: str
    params: dict = field(default_factory=dict, hash=False)

    @property
    def label(self) -> str:
        """Node identifier used in graphs and logs."""
        if not self.params:
            return self.name
        rendered = ",".join(
            f"{key}={format_angle(value) if key == 'theta' else getattr(value, 'value', value)}"
            for key, value in sorted(self.params.items())
        )
        return f"{self.name}:{rendered}"


class CatalogManager(WithLogging):
    """Lookup, parsing and set expansion of catalog entries."""

    builders: dict[str, Callable[..., Entry]] = {
        R_FAMILY: r_family,
        I_PTP: i_ptp,
        I_PR: i_pr,
        SIGMA_PTP: sigma_ptp,
        SIGMA_PR: sigma_pr,
        SIGMA_PR_RESTRICTED: lambda: sigma_pr(restricted=True),
        SIGMA_AQ: sigma_aq,
        SIGMA_CHSH: sigma_chsh,
        N_PTP: n_ptp,
        N_PR: n_pr,
        P_AQ: p_aq,
        PR_BOX: pr_box,
    }

    @property
    def names(self) -> list[str]:
        """Known entry names."""
        return sorted(self.builders)

    def parse(self, text: str) -> CatalogEntry:
        """`name[:key=value,...]` into a CatalogEntry with typed parameters."""
        name, _, rest = text.strip().partition(":")
        if name not in self.builders:
            raise UnknownCatalogEntryError(f"unknown catalog entry {name!r}")
        params: dict = {}
        for item in filter(None, (part.strip() for part in rest.split(","))):
            key, sep, value = item.partition("=")
            if not sep:
                raise ParameterRangeError(f"parameter {item!r} of {name} is not key=value")
            params[key.strip()] = self._typed(name, key.strip(), value.strip())
        if name == R_FAMILY:
            params.setdefault("theta", math.pi / 2)
            params.setdefault("axis", RotationAxis.Y)
        elif params:
            raise ParameterRangeError(f"{name} takes no parameters")
        return CatalogEntry(name, params)

    @staticmethod
    def _typed(name: str, key: str, value: str):
        if name == R_FAMILY and key == "theta":
            return parse_angle(value)
        if name == R_FAMILY and key == "axis":
            try:
                return RotationAxis(value)
            except ValueError:
                raise ParameterRangeError(f"unknown rotation axis {value!r}") from None
        raise ParameterRangeError(f"{name} has no parameter {key!r}")

    def expand(self, text: str) -> list[CatalogEntry]:
        """Expand `name:{a,b}x{c,d}` products into entries; plain entries pass through.

        For the R family the factors are (theta, axis).
        """
        name, _, rest = text.strip().partition(":")
        if not rest.startswith("{"):
            return [self.parse(text)]
        factors = re.findall(r"\{([^}]*)\}", rest)
        if name != R_FAMILY or len(factors) not in (1, 2):
            raise ParameterRangeError(f"cannot expand {text!r}")
        thetas = [v.strip() for v in factors[0].split(",")]
        axes = [v.strip() for v in factors[1].split(",")] if len(factors) == 2 else ["y"]
        return [
            self.parse(f"{R_FAMILY}:theta={theta},axis={axis}")
            for theta, axis in itertools.product(thetas, axes)
        ]

    def build(self, entry: CatalogEntry | str) -> Entry:
        """Construct the assemblage or box of an entry."""
        if isinstance(entry, str):
            entry = self.parse(entry)
        self.logger.debug(f"building catalog entry {entry.label}")
        return self.builders[entry.name](**entry.params)


def catalog(name: str, **params) -> Entry:
    """Catalog entry by name, e.g. `catalog("r-family", theta=math.pi / 8, axis="z")`."""
    manager = CatalogManager()
    if name not in manager.builders:
        raise UnknownCatalogEntryError(f"unknown catalog entry {name!r}")
    if name == R_FAMILY:
        theta = params.pop("theta", math.pi / 2)
        theta = parse_angle(theta) if isinstance(theta, str) else float(theta)
        axis = params.pop("axis", RotationAxis.Y)
        if params:
            raise ParameterRangeError(f"{name} has no parameters {sorted(params)}")
        return r_family(theta, axis)
    if params:
        raise ParameterRangeError(f"{name} takes no parameters")
    return manager.builders[name]()
