#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""LOSR-free tests and sampling of free assemblages."""

from __future__ import annotations

from typing import Mapping

import numpy as np
from scipy.stats import unitary_group

from constants import B, B_IN, B_OUT, STRATEGY_LIMIT
from core.choi import ChoiOperator, choi_of_map
from core.domain import Assemblage, BwiAssemblage, ChannelAssemblage, MdiAssemblage
from core.enums import AssemblageKind
from core.exceptions import DimensionMismatchError, InvalidOperatorError
from core.problem import (
    ConicProblem,
    ProblemBuilder,
    identity_map,
    partial_trace_map,
    scalar_identity_map,
    trace_map,
)
from core.strategies import deterministic_responses
from core.tensor import ComplexMatrix


def _label(*parts: object) -> str:
    return "[" + ",".join(str(p) for p in parts) + "]"


def build_free_test(a: ChannelAssemblage, limit: int = STRATEGY_LIMIT) -> ConicProblem:
    """Is the channel assemblage a classical mixture of deterministic outcomes and channels.

    One block J_lambda per deterministic point D(a|x, lambda) with
    tr_out(J_lambda) = t_lambda I/d_in, sum_lambda tr_out(J_lambda) = I/d_in and
    J_{a|x} = sum_lambda D(a|x, lambda) J_lambda.
    """
    first = a.element(0, 0)
    dims = first.matrix.dims
    n = first.matrix.side
    inputs = tuple(range(len(first.out_labels), len(first.labels)))
    marginal = partial_trace_map(dims, inputs)
    builder = ProblemBuilder("free test (channel)", kind=a.kind.value, n_a=a.n_a, n_x=a.n_x)

    responses = deterministic_responses(a.n_a, a.n_x, limit)
    for lam in responses:
        builder.add_block(f"J{_label(*lam)}", n)
        builder.add_block(f"t{_label(*lam)}", 1)
        builder.add_equality(
            f"tr_out J{_label(*lam)} proportional to identity",
            [
                (f"J{_label(*lam)}", marginal),
                (f"t{_label(*lam)}", -scalar_identity_map(a.d_in, 1 / a.d_in)),
            ],
            np.zeros((a.d_in, a.d_in)),
            side=a.d_in,
        )
    builder.add_equality(
        "marginal channel trace preserving",
        [(f"J{_label(*lam)}", marginal) for lam in responses],
        np.eye(a.d_in) / a.d_in,
        side=a.d_in,
    )
    for (outcome, x), element in sorted(a.elements.items()):
        builder.add_equality(
            f"J[a={outcome},x={x}]",
            [(f"J{_label(*lam)}", identity_map(n)) for lam in responses if lam[x] == outcome],
            element.entries,
            side=n,
        )
    return builder.build()


def build_bwi_free_test(s: BwiAssemblage, limit: int = STRATEGY_LIMIT) -> ConicProblem:
    """sigma_{a|xy} = sum_lambda D(a|x, lambda) rho_{lambda y} with y-independent traces."""
    d = s.d_b
    builder = ProblemBuilder(
        "free test (bwi)", kind=s.kind.value, n_a=s.n_a, n_x=s.n_x, n_y=s.n_y
    )
    responses = deterministic_responses(s.n_a, s.n_x, limit)
    for lam in responses:
        for y in range(s.n_y):
            builder.add_block(f"rho{_label(*lam, y)}", d)
        for y in range(1, s.n_y):
            builder.add_equality(
                f"tr rho{_label(*lam)} independent of y",
                [
                    (f"rho{_label(*lam, y)}", trace_map(d)),
                    (f"rho{_label(*lam, 0)}", -trace_map(d)),
                ],
                0.0,
            )
    builder.add_equality(
        "normalisation", [(f"rho{_label(*lam, 0)}", trace_map(d)) for lam in responses], 1.0
    )
    for (outcome, x, y), element in sorted(s.elements.items()):
        builder.add_equality(
            f"sigma[a={outcome},x={x},y={y}]",
            [(f"rho{_label(*lam, y)}", identity_map(d)) for lam in responses if lam[x] == outcome],
            element.entries,
            side=d,
        )
    return builder.build()


def build_mdi_free_test(n: MdiAssemblage, limit: int = STRATEGY_LIMIT) -> ConicProblem:
    """J_{ab|x} = sum_lambda D(a|x, lambda) J_{b lambda} with sum_b J_{b lambda} = t_lambda I/d."""
    d = n.d_in
    builder = ProblemBuilder(
        "free test (mdi)", kind=n.kind.value, n_a=n.n_a, n_b=n.n_b, n_x=n.n_x
    )
    responses = deterministic_responses(n.n_a, n.n_x, limit)
    for lam in responses:
        for b in range(n.n_b):
            builder.add_block(f"J{_label(b, *lam)}", d)
        builder.add_block(f"t{_label(*lam)}", 1)
        builder.add_equality(
            f"measurement{_label(*lam)} proportional to the trace",
            [(f"J{_label(b, *lam)}", identity_map(d)) for b in range(n.n_b)]
            + [(f"t{_label(*lam)}", -scalar_identity_map(d, 1 / d))],
            np.zeros((d, d)),
            side=d,
        )
    builder.add_equality(
        "normalisation", [(f"t{_label(*lam)}", np.ones((1, 1))) for lam in responses], 1.0
    )
    for (outcome, b, x), element in sorted(n.elements.items()):
        builder.add_equality(
            f"J[a={outcome},b={b},x={x}]",
            [(f"J{_label(b, *lam)}", identity_map(d)) for lam in responses if lam[x] == outcome],
            element.entries,
            side=d,
        )
    return builder.build()


def free_test_for(assemblage: Assemblage, limit: int = STRATEGY_LIMIT) -> ConicProblem:
    """The LOSR-free test matching the assemblage kind."""
    if isinstance(assemblage, ChannelAssemblage):
        return build_free_test(assemblage, limit)
    if isinstance(assemblage, BwiAssemblage):
        return build_bwi_free_test(assemblage, limit)
    if isinstance(assemblage, MdiAssemblage):
        return build_mdi_free_test(assemblage, limit)
    raise InvalidOperatorError(f"no free test for {type(assemblage).__name__}")


def random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """Density matrix from a Ginibre matrix."""
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_channel(d_in: int, d_out: int, rng: np.random.Generator, env: int = 2) -> ChoiOperator:
    """CPTP map tr_env(V rho V^dagger) with a Haar isometry V."""
    unitary = unitary_group.rvs(d_out * env, random_state=rng)
    isometry = unitary[:, :d_in]

    def apply(rho: np.ndarray) -> np.ndarray:
        out = (isometry @ rho @ isometry.conj().T).reshape(d_out, env, d_out, env)
        return np.einsum("iaja->ij", out)

    return choi_of_map(apply, d_in, d_out, B_IN, B_OUT)


def random_povm(d: int, n_outcomes: int, rng: np.random.Generator) -> list[np.ndarray]:
    """POVM S^{-1/2} G_b S^{-1/2} from random PSD G_b."""
    raw = []
    for _ in range(n_outcomes):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        raw.append(g @ g.conj().T)
    values, vectors = np.linalg.eigh(sum(raw))
    inv_sqrt = (vectors / np.sqrt(values)) @ vectors.conj().T
    return [inv_sqrt @ g @ inv_sqrt for g in raw]


def sample_free(
    kind: AssemblageKind | str,
    alphabets: Mapping[str, int],
    dims: Mapping[str, int],
    seed: int,
    n_lambda: int = 3,
) -> Assemblage:
    """Random LOSR-free assemblage.

    A shared lambda drives a local response p(a|x, lambda) and a lambda-dependent
    channel, state family or measurement on Bob's side.

    `alphabets` uses the keys A, X (plus Y or B), `dims` the subsystem labels.
    """
    kind = AssemblageKind(kind)
    rng = np.random.default_rng(seed)
    n_a, n_x = alphabets["A"], alphabets["X"]
    p_lambda = rng.dirichlet(np.ones(n_lambda))
    response = rng.dirichlet(np.ones(n_a), size=(n_lambda, n_x))  # [lambda, x, a]

    def weight(a: int, x: int, lam: int) -> float:
        return float(p_lambda[lam] * response[lam, x, a])

    if kind == AssemblageKind.CHANNEL:
        channels = [random_channel(dims[B_IN], dims[B_OUT], rng) for _ in range(n_lambda)]
        elements = {}
        for a in range(n_a):
            for x in range(n_x):
                total = channels[0].scaled(weight(a, x, 0))
                for lam in range(1, n_lambda):
                    total = total + channels[lam].scaled(weight(a, x, lam))
                elements[(a, x)] = total
        return ChannelAssemblage(elements, n_a, n_x)

    if kind == AssemblageKind.BWI:
        n_y = alphabets["Y"]
        states = [[random_state(dims[B], rng) for _ in range(n_y)] for _ in range(n_lambda)]
        return BwiAssemblage(
            {
                (a, x, y): ComplexMatrix(
                    sum(weight(a, x, lam) * states[lam][y] for lam in range(n_lambda))
                )
                for a in range(n_a)
                for x in range(n_x)
                for y in range(n_y)
            },
            n_a,
            n_x,
            n_y,
        )

    if kind == AssemblageKind.MDI:
        n_b, d = alphabets["B"], dims[B_IN]
        povms = [random_povm(d, n_b, rng) for _ in range(n_lambda)]
        return MdiAssemblage(
            {
                (a, b, x): ChoiOperator(
                    ComplexMatrix(
                        sum(weight(a, x, lam) * povms[lam][b].T / d for lam in range(n_lambda))
                    ),
                    (),
                    (B_IN,),
                )
                for a in range(n_a)
                for b in range(n_b)
                for x in range(n_x)
            },
            n_a,
            n_b,
            n_x,
        )

    raise DimensionMismatchError(f"unsupported assemblage kind {kind}")
