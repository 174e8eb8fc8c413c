#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Deterministic local-processing strategies.

Any local classical processing with shared randomness is a mixture of deterministic
strategies whose randomness is absorbed into the shared variable lambda. Strategies
are enumerated in lexicographic order of (a_of table, x_of table[, y_of table]) with
tables flattened row-major; problem builders index their variable blocks by this order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from constants import STRATEGY_LIMIT
from core.domain import BoxDistribution
from core.exceptions import DimensionMismatchError, StrategyLimitError


@dataclass(frozen=True)
class DeterministicComb:
    """One deterministic strategy lambda.

    `x_of[x']` is the input fed to the source, `a_of[a][x']` the output reported for
    source outcome a, `y_of[y']` Bob's classical input relabeling when present.
    """

    x_of: tuple[int, ...]
    a_of: tuple[tuple[int, ...], ...]
    n_a_prime: int
    y_of: tuple[int, ...] | None = None

    @property
    def n_x_prime(self) -> int:
        """Size of the target input alphabet X'."""
        return len(self.x_of)

    @property
    def n_a(self) -> int:
        """Size of the source output alphabet A."""
        return len(self.a_of)

    def weight(self, a_prime: int, x_prime: int, a: int, x: int) -> int:
        """D(a'|a, x', lambda) D(x|x', lambda)."""
        return int(self.x_of[x_prime] == x and self.a_of[a][x_prime] == a_prime)

    def y_weight(self, y: int, y_prime: int) -> int:
        """D(y|y', lambda)."""
        if self.y_of is None:
            raise DimensionMismatchError("strategy has no classical input wiring for Bob")
        return int(self.y_of[y_prime] == y)

    def sources(self, a_prime: int, x_prime: int) -> list[tuple[int, int]]:
        """Source labels (a, x) mapped onto (a', x')."""
        x = self.x_of[x_prime]
        return [(a, x) for a in range(self.n_a) if self.a_of[a][x_prime] == a_prime]


def count_alice(n_a: int, n_x: int, n_a_prime: int, n_x_prime: int) -> int:
    """|A'|^(|A| |X'|) |X|^|X'|."""
    return n_a_prime ** (n_a * n_x_prime) * n_x**n_x_prime


def _guard(count: int, limit: int) -> None:
    if count > limit:
        raise StrategyLimitError(f"{count} deterministic strategies exceed the limit of {limit}")


def _alice_tables(
    n_a: int, n_x: int, n_a_prime: int, n_x_prime: int
) -> Iterator[tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]]:
    for flat in itertools.product(range(n_a_prime), repeat=n_a * n_x_prime):
        a_of = tuple(tuple(flat[a * n_x_prime : (a + 1) * n_x_prime]) for a in range(n_a))
        for x_of in itertools.product(range(n_x), repeat=n_x_prime):
            yield a_of, x_of


def enumerate_alice(
    n_a: int, n_x: int, n_a_prime: int, n_x_prime: int, limit: int = STRATEGY_LIMIT
) -> list[DeterministicComb]:
    """All deterministic strategies of Alice mapping (A, X) to (A', X')."""
    if min(n_a, n_x, n_a_prime, n_x_prime) < 1:
        raise DimensionMismatchError("alphabets must be nonempty")
    _guard(count_alice(n_a, n_x, n_a_prime, n_x_prime), limit)
    return [
        DeterministicComb(x_of, a_of, n_a_prime)
        for a_of, x_of in _alice_tables(n_a, n_x, n_a_prime, n_x_prime)
    ]


def enumerate_bob_input_wirings(n_y: int, n_y_prime: int) -> list[tuple[int, ...]]:
    """All function tables Y' -> Y, lexicographic."""
    if min(n_y, n_y_prime) < 1:
        raise DimensionMismatchError("alphabets must be nonempty")
    return list(itertools.product(range(n_y), repeat=n_y_prime))


def enumerate_with_bob_input(
    n_a: int,
    n_x: int,
    n_y: int,
    n_a_prime: int,
    n_x_prime: int,
    n_y_prime: int,
    limit: int = STRATEGY_LIMIT,
) -> list[DeterministicComb]:
    """Alice's strategies combined with Bob's classical input wirings."""
    count = count_alice(n_a, n_x, n_a_prime, n_x_prime) * n_y**n_y_prime
    _guard(count, limit)
    wirings = enumerate_bob_input_wirings(n_y, n_y_prime)
    return [
        DeterministicComb(x_of, a_of, n_a_prime, y_of)
        for a_of, x_of in _alice_tables(n_a, n_x, n_a_prime, n_x_prime)
        for y_of in wirings
    ]


def deterministic_responses(
    n_a: int, n_x: int, limit: int = STRATEGY_LIMIT
) -> list[tuple[int, ...]]:
    """All deterministic response functions x -> a, i.e. the points D(a|x, lambda)."""
    _guard(n_a**n_x, limit)
    return list(itertools.product(range(n_a), repeat=n_x))


def apply_comb_to_box(d: DeterministicComb, p: BoxDistribution) -> BoxDistribution:
    """Wire Alice's side of a box through `d`; Bob's input is relabeled by `y_of` if set."""
    n_a, n_b, n_x, n_y = p.shape
    if d.n_a != n_a or max(d.x_of) >= n_x:
        raise DimensionMismatchError("strategy does not match the box alphabets")
    y_of = d.y_of if d.y_of is not None else tuple(range(n_y))
    table = np.zeros((d.n_a_prime, n_b, d.n_x_prime, len(y_of)))
    for x_prime, y_prime in itertools.product(range(d.n_x_prime), range(len(y_of))):
        for a in range(n_a):
            a_prime = d.a_of[a][x_prime]
            table[a_prime, :, x_prime, y_prime] += p.table[a, :, d.x_of[x_prime], y_of[y_prime]]
    return BoxDistribution(table)
