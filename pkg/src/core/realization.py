#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Assemblages generated by quantum (or formally described) common-cause realizations."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from constants import B_IN, B_OUT, HERMITIAN_TOL, PSD_TOL
from core.choi import ChoiOperator, choi_of_map
from core.domain import BwiAssemblage, ChannelAssemblage, MdiAssemblage
from core.exceptions import DimensionMismatchError, InvalidOperatorError
from core.tensor import ComplexMatrix, as_matrix, hermiticity_defect, min_eigenvalue, trace_out

Povm = Sequence[Sequence[np.ndarray]]
MatrixMap = Callable[[np.ndarray], np.ndarray]
FunctionalMap = Callable[[np.ndarray], complex]


def check_state(rho: ComplexMatrix, tol: float = PSD_TOL) -> None:
    """Raise unless rho is a density matrix."""
    if hermiticity_defect(rho) > HERMITIAN_TOL or min_eigenvalue(rho) < -tol:
        raise InvalidOperatorError("state must be Hermitian and PSD")
    if abs(rho.trace() - 1) > tol:
        raise InvalidOperatorError(f"state must have unit trace, got {rho.trace():.6g}")


def check_povm(povm: Povm, dim: int, tol: float = PSD_TOL) -> None:
    """Raise unless every family povm[x] is a POVM on `dim` with the same outcome count."""
    if not povm or len({len(family) for family in povm}) != 1:
        raise InvalidOperatorError("every measurement needs the same, nonzero number of outcomes")
    for x, family in enumerate(povm):
        total = np.zeros((dim, dim), dtype=complex)
        for a, element in enumerate(family):
            element = np.asarray(element, dtype=complex)
            if element.shape != (dim, dim):
                raise DimensionMismatchError(f"M_{{{a}|{x}}} has shape {element.shape}")
            if min_eigenvalue(ComplexMatrix(element)) < -tol:
                raise InvalidOperatorError(f"M_{{{a}|{x}}} is not PSD")
            total = total + element
        if np.max(np.abs(total - np.eye(dim))) > tol:
            raise InvalidOperatorError(f"measurement {x} does not sum to the identity")


def check_channel(choi: ChoiOperator, require_cp: bool, tol: float = PSD_TOL) -> None:
    """Raise unless the map is trace preserving, and CP when required."""
    marginal = choi.output_marginal().entries
    if np.max(np.abs(marginal - np.eye(choi.d_in) / choi.d_in)) > tol:
        raise InvalidOperatorError("channel is not trace preserving")
    if require_cp and min_eigenvalue(choi.matrix) < -tol:
        raise InvalidOperatorError("channel is not completely positive")


def steered_states(rho_ab: ComplexMatrix, povm: Povm) -> dict[tuple[int, int], np.ndarray]:
    """sigma_{a|x} = tr_A((M_{a|x} (x) I) rho_AB), keyed by (a, x)."""
    rho_ab = as_matrix(rho_ab)
    if len(rho_ab.dims) != 2:
        raise DimensionMismatchError(f"expected a bipartite state, got dims {rho_ab.dims}")
    check_state(rho_ab)
    d_a, d_b = rho_ab.dims
    check_povm(povm, d_a)
    states = {}
    for x, family in enumerate(povm):
        for a, element in enumerate(family):
            lifted = np.kron(np.asarray(element, dtype=complex), np.eye(d_b)) @ rho_ab.entries
            states[(a, x)] = trace_out(ComplexMatrix(lifted, (d_a, d_b)), [0]).entries
    return states


def channel_from_quantum(
    rho_ab: ComplexMatrix,
    povm: Povm,
    gamma: MatrixMap,
    d_in: int,
    d_out: int,
    require_cp: bool = True,
) -> ChannelAssemblage:
    """I_{a|x}(rho) = Gamma(sigma_{a|x} (x) rho) for a map Gamma on B (x) B_in -> B_out.

    `require_cp=False` admits formal, positive but not completely positive extensions.
    """
    states = steered_states(rho_ab, povm)
    d_b = as_matrix(rho_ab).dims[1]
    check_channel(choi_of_map(gamma, d_b * d_in, d_out), require_cp)
    elements = {
        key: choi_of_map(lambda r, s=sigma: gamma(np.kron(s, r)), d_in, d_out, B_IN, B_OUT)
        for key, sigma in states.items()
    }
    return ChannelAssemblage(elements, n_a=len(povm[0]), n_x=len(povm))


def bwi_from_quantum(
    rho_ab: ComplexMatrix,
    povm: Povm,
    xi: Sequence[MatrixMap],
    require_cp: bool = True,
) -> BwiAssemblage:
    """sigma_{a|xy} = xi_y(tr_A((M_{a|x} (x) I) rho_AB))."""
    states = steered_states(rho_ab, povm)
    d_b = as_matrix(rho_ab).dims[1]
    for xi_y in xi:
        d_out = np.atleast_2d(xi_y(np.eye(d_b, dtype=complex))).shape[0]
        check_channel(choi_of_map(xi_y, d_b, d_out), require_cp)
    elements = {
        (a, x, y): ComplexMatrix(np.atleast_2d(xi_y(sigma)))
        for (a, x), sigma in states.items()
        for y, xi_y in enumerate(xi)
    }
    return BwiAssemblage(elements, n_a=len(povm[0]), n_x=len(povm), n_y=len(xi))


def mdi_from_quantum(
    rho_ab: ComplexMatrix,
    povm: Povm,
    theta: Sequence[FunctionalMap],
    d_in: int,
    tol: float = PSD_TOL,
) -> MdiAssemblage:
    """N_{ab|x}(rho) = Theta_b(sigma_{a|x} (x) rho) for a measurement {Theta_b} on B (x) B_in."""
    states = steered_states(rho_ab, povm)
    d_b = as_matrix(rho_ab).dims[1]
    effects = [choi_of_map(theta_b, d_b * d_in, 1) for theta_b in theta]
    total = sum(effect.entries for effect in effects)
    if np.max(np.abs(total - np.eye(d_b * d_in) / (d_b * d_in))) > tol:
        raise InvalidOperatorError("measurement does not sum to the trace")
    if any(min_eigenvalue(effect.matrix) < -tol for effect in effects):
        raise InvalidOperatorError("measurement elements must be PSD")
    elements = {
        (a, b, x): choi_of_map(lambda r, s=sigma, t=theta_b: t(np.kron(s, r)), d_in, 1, B_IN)
        for (a, x), sigma in states.items()
        for b, theta_b in enumerate(theta)
    }
    return MdiAssemblage(elements, n_a=len(povm[0]), n_b=len(theta), n_x=len(povm))


def channel_from_bwi(s: BwiAssemblage, y: int = 0) -> ChannelAssemblage:
    """Channel assemblage with trivial input whose elements are sigma_{a|xy} at fixed y."""
    elements = {
        (a, x): ChoiOperator(s.element(a, x, y), (B_OUT,), ())
        for a in range(s.n_a)
        for x in range(s.n_x)
    }
    return ChannelAssemblage(elements, n_a=s.n_a, n_x=s.n_x)
