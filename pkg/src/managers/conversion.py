#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""LOSR conversion programs between assemblages of the same scenario.

Every program has one family of comb blocks per deterministic strategy lambda of
Alice (and of Bob's classical input where there is one). Target elements are
reconstructed through link products of the source elements with these blocks.
"""

from __future__ import annotations

from typing import Hashable, Sequence

import numpy as np

from constants import B, B_IN, B_IN_PRIME, B_OUT, B_OUT_PRIME, B_PRIME, STRATEGY_LIMIT
from core.choi import ChoiOperator, link_product_matrix
from core.domain import Assemblage, BwiAssemblage, ChannelAssemblage, MdiAssemblage
from core.exceptions import DimensionMismatchError
from core.problem import (
    ConicProblem,
    ProblemBuilder,
    identity_map,
    partial_trace_map,
    scalar_identity_map,
    tensor_identity_map,
)
from core.strategies import enumerate_alice, enumerate_with_bob_input
from utils.logging import WithLogging

PRIMED = {B_IN: B_IN_PRIME, B_OUT: B_OUT_PRIME, B: B_PRIME}


def _indices(labels: Sequence[str], subset: Sequence[str]) -> tuple[int, ...]:
    return tuple(labels.index(label) for label in subset)


class _LinkCache:
    """Link-product matrices of summed source elements, keyed by which elements were summed."""

    def __init__(
        self,
        comb_out: Sequence[str],
        comb_in: Sequence[str],
        comb_dims: Sequence[int],
        contracted: set[str],
    ):
        self.comb_out = tuple(comb_out)
        self.comb_in = tuple(comb_in)
        self.comb_dims = tuple(comb_dims)
        self.contracted = contracted
        self._matrices: dict[Hashable, np.ndarray] = {}

    def get(self, key: Hashable, elements: Sequence[ChoiOperator]) -> np.ndarray:
        if key not in self._matrices:
            total = elements[0]
            for element in elements[1:]:
                total = total + element
            self._matrices[key], _ = link_product_matrix(
                total, self.comb_out, self.comb_in, self.comb_dims, self.contracted
            )
        return self._matrices[key]


class ConversionBuilder(WithLogging):
    """Builds the conversion programs; `limit` caps the number of strategies."""

    def __init__(self, limit: int = STRATEGY_LIMIT):
        self.limit = limit

    def channel(self, src: ChannelAssemblage, dst: ChannelAssemblage) -> ConicProblem:
        """Channel assemblage src -> dst.

        Blocks J_xi[lambda] on B_in (x) B_out' (x) B_in' (x) B_out (outputs first) and
        J_F[lambda] on B_in (x) B_in'. The comb is normalised and cannot signal from
        B_out to B_in: tr_{B_out'}(J_xi) = J_F (x) I/d_{B_out}.
        """
        first, target = src.element(0, 0), dst.element(0, 0).relabel(PRIMED)
        if first.labels != (B_OUT, B_IN) or target.labels != (B_OUT_PRIME, B_IN_PRIME):
            raise DimensionMismatchError(
                "channel conversion needs nontrivial quantum input and output on both sides"
            )
        d_in, d_out = first.dim_of(B_IN), first.dim_of(B_OUT)
        t_in, t_out = target.dim_of(B_IN_PRIME), target.dim_of(B_OUT_PRIME)

        comb_out, comb_in = (B_IN, B_OUT_PRIME), (B_IN_PRIME, B_OUT)
        labels = comb_out + comb_in
        dims = (d_in, t_out, t_in, d_out)
        n = int(np.prod(dims))
        combs = enumerate_alice(src.n_a, src.n_x, dst.n_a, dst.n_x, self.limit)
        self.logger.info(f"channel conversion: {len(combs)} strategies, comb side {n}")

        inputs = partial_trace_map(dims, _indices(labels, comb_in))
        f_marginal = partial_trace_map((d_in, t_in), (1,))
        no_signalling = partial_trace_map(dims, _indices(labels, (B_IN, B_IN_PRIME, B_OUT)))
        f_lift = tensor_identity_map((d_in, t_in), d_out, (0, 1, 2), 1 / d_out)
        d_comb_in = t_in * d_out

        builder = ProblemBuilder(
            "channel conversion", strategies=len(combs), src=src.alphabets, dst=dst.alphabets
        )
        for i, _ in enumerate(combs):
            xi, f, t, u = f"J_xi[{i}]", f"J_F[{i}]", f"t[{i}]", f"u[{i}]"
            builder.add_block(xi, n)
            builder.add_block(f, d_in * t_in)
            builder.add_block(t, 1)
            builder.add_block(u, 1)
            builder.add_equality(
                f"comb[{i}] inputs proportional to identity",
                [(xi, inputs), (t, -scalar_identity_map(d_comb_in, 1 / d_comb_in))],
                np.zeros((d_comb_in, d_comb_in)),
                side=d_comb_in,
            )
            builder.add_equality(
                f"F[{i}] input proportional to identity",
                [(f, f_marginal), (u, -scalar_identity_map(t_in, 1 / t_in))],
                np.zeros((t_in, t_in)),
                side=t_in,
            )
            builder.add_equality(
                f"comb[{i}] no signalling from B_out to B_in",
                [(xi, no_signalling), (f, -f_lift)],
                np.zeros((d_comb_in * d_in, d_comb_in * d_in)),
                side=d_comb_in * d_in,
            )
        builder.add_equality(
            "comb normalisation",
            [(f"J_xi[{i}]", inputs) for i in range(len(combs))],
            np.eye(d_comb_in) / d_comb_in,
            side=d_comb_in,
        )
        builder.add_equality(
            "pre-processing normalisation",
            [(f"J_F[{i}]", f_marginal) for i in range(len(combs))],
            np.eye(t_in) / t_in,
            side=t_in,
        )

        cache = _LinkCache(comb_out, comb_in, dims, {B_IN, B_OUT})
        for (a_prime, x_prime), element in sorted(dst.elements.items()):
            terms = []
            for i, comb in enumerate(combs):
                sources = comb.sources(a_prime, x_prime)
                if sources:
                    matrix = cache.get(
                        tuple(sources), [src.element(a, x) for a, x in sources]
                    )
                    terms.append((f"J_xi[{i}]", matrix))
            builder.add_equality(
                f"J'[a={a_prime},x={x_prime}]", terms, element.entries, side=t_in * t_out
            )
        return builder.build()

    def bwi(self, src: BwiAssemblage, dst: BwiAssemblage) -> ConicProblem:
        """Bob-with-input assemblage src -> dst.

        Blocks J_xi[lambda, y'] with output B' and input B, each a normalised channel up
        to the weight t[lambda, y'], with the weight independent of y'.
        """
        d, d_prime = src.d_b, dst.d_b
        combs = enumerate_with_bob_input(
            src.n_a, src.n_x, src.n_y, dst.n_a, dst.n_x, dst.n_y, self.limit
        )
        self.logger.info(f"bwi conversion: {len(combs)} strategies")
        comb_dims = (d_prime, d)
        n = d * d_prime
        marginal = partial_trace_map(comb_dims, (1,))
        builder = ProblemBuilder(
            "bwi conversion", strategies=len(combs), src=src.alphabets, dst=dst.alphabets
        )

        def name(i: int, y_prime: int) -> str:
            return f"J_xi[{i},{y_prime}]"

        for i, _ in enumerate(combs):
            for y_prime in range(dst.n_y):
                builder.add_block(name(i, y_prime), n)
                builder.add_block(f"t[{i},{y_prime}]", 1)
                builder.add_equality(
                    f"comb[{i},{y_prime}] input proportional to identity",
                    [
                        (name(i, y_prime), marginal),
                        (f"t[{i},{y_prime}]", -scalar_identity_map(d, 1 / d)),
                    ],
                    np.zeros((d, d)),
                    side=d,
                )
            for y_prime in range(1, dst.n_y):
                builder.add_equality(
                    f"comb[{i}] input independent of y'",
                    [(name(i, y_prime), marginal), (name(i, 0), -marginal)],
                    np.zeros((d, d)),
                    side=d,
                )
        for y_prime in range(dst.n_y):
            builder.add_equality(
                f"comb normalisation y'={y_prime}",
                [(name(i, y_prime), marginal) for i in range(len(combs))],
                np.eye(d) / d,
                side=d,
            )

        cache = _LinkCache((B_PRIME,), (B,), comb_dims, {B})
        for (a_prime, x_prime, y_prime), element in sorted(dst.elements.items()):
            terms = []
            for i, comb in enumerate(combs):
                y = comb.y_of[y_prime]
                sources = comb.sources(a_prime, x_prime)
                if sources:
                    matrix = cache.get(
                        (tuple(sources), y), [src.as_choi(a, x, y) for a, x in sources]
                    )
                    terms.append((name(i, y_prime), matrix))
            builder.add_equality(
                f"sigma'[a={a_prime},x={x_prime},y={y_prime}]",
                terms,
                element.entries,
                side=d_prime,
            )
        return builder.build()

    def mdi(self, src: MdiAssemblage, dst: MdiAssemblage) -> ConicProblem:
        """MDI assemblage src -> dst.

        Blocks J_zeta[b, b', lambda] with output B_in and input B_in'. Bob's outcome b
        cannot influence B_in: sum_{lambda, b'} tr_{B_in} J_zeta = I/d_{B_in'} for every b.
        """
        d, d_prime = src.d_in, dst.d_in
        combs = enumerate_alice(src.n_a, src.n_x, dst.n_a, dst.n_x, self.limit)
        self.logger.info(f"mdi conversion: {len(combs)} strategies")
        comb_dims = (d, d_prime)
        n = d * d_prime
        marginal = partial_trace_map(comb_dims, (1,))
        builder = ProblemBuilder(
            "mdi conversion", strategies=len(combs), src=src.alphabets, dst=dst.alphabets
        )

        def name(b: int, b_prime: int, i: int) -> str:
            return f"J_zeta[{b},{b_prime},{i}]"

        for i, _ in enumerate(combs):
            for b in range(src.n_b):
                for b_prime in range(dst.n_b):
                    builder.add_block(name(b, b_prime, i), n)
                summed, t = f"S[{b},{i}]", f"t[{b},{i}]"
                builder.add_block(summed, n)
                builder.add_block(t, 1)
                builder.add_equality(
                    f"S[{b},{i}] is the sum over b'",
                    [(summed, identity_map(n))]
                    + [(name(b, b_prime, i), -identity_map(n)) for b_prime in range(dst.n_b)],
                    np.zeros((n, n)),
                    side=n,
                )
                builder.add_equality(
                    f"comb[{b},{i}] input proportional to identity",
                    [(summed, marginal), (t, -scalar_identity_map(d_prime, 1 / d_prime))],
                    np.zeros((d_prime, d_prime)),
                    side=d_prime,
                )
        for b in range(src.n_b):
            builder.add_equality(
                f"comb normalisation b={b}",
                [(f"S[{b},{i}]", marginal) for i in range(len(combs))],
                np.eye(d_prime) / d_prime,
                side=d_prime,
            )

        cache = _LinkCache((B_IN,), (B_IN_PRIME,), comb_dims, {B_IN})
        for (a_prime, b_prime, x_prime), element in sorted(dst.elements.items()):
            terms = []
            for i, comb in enumerate(combs):
                sources = comb.sources(a_prime, x_prime)
                if not sources:
                    continue
                for b in range(src.n_b):
                    matrix = cache.get(
                        (tuple(sources), b), [src.element(a, b, x) for a, x in sources]
                    )
                    terms.append((name(b, b_prime, i), matrix))
            builder.add_equality(
                f"J'[a={a_prime},b={b_prime},x={x_prime}]",
                terms,
                element.relabel(PRIMED).entries,
                side=d_prime,
            )
        return builder.build()


def build_channel_conversion(
    src: ChannelAssemblage, dst: ChannelAssemblage, limit: int = STRATEGY_LIMIT
) -> ConicProblem:
    """Feasible iff src converts to dst under LOSR."""
    return ConversionBuilder(limit).channel(src, dst)


def build_bwi_conversion(
    src: BwiAssemblage, dst: BwiAssemblage, limit: int = STRATEGY_LIMIT
) -> ConicProblem:
    """Feasible iff src converts to dst under LOSR."""
    return ConversionBuilder(limit).bwi(src, dst)


def build_mdi_conversion(
    src: MdiAssemblage, dst: MdiAssemblage, limit: int = STRATEGY_LIMIT
) -> ConicProblem:
    """Feasible iff src converts to dst under LOSR."""
    return ConversionBuilder(limit).mdi(src, dst)


def build_conversion(
    src: Assemblage, dst: Assemblage, limit: int = STRATEGY_LIMIT
) -> ConicProblem:
    """Dispatch on the scenario shared by src and dst."""
    if type(src) is not type(dst):
        raise DimensionMismatchError(
            f"cannot convert a {src.kind.value} assemblage into a {dst.kind.value} one"
        )
    builder = ConversionBuilder(limit)
    if isinstance(src, ChannelAssemblage):
        return builder.channel(src, dst)
    if isinstance(src, BwiAssemblage):
        return builder.bwi(src, dst)
    return builder.mdi(src, dst)

