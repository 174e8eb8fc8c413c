#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import itertools

import numpy as np
import pytest

from core.exceptions import DimensionMismatchError, StrategyLimitError
from core.strategies import (
    DeterministicComb,
    apply_comb_to_box,
    count_alice,
    deterministic_responses,
    enumerate_alice,
    enumerate_bob_input_wirings,
    enumerate_with_bob_input,
)
from managers.catalog import catalog


@pytest.mark.parametrize(
    "n_a,n_x,n_a_prime,n_x_prime",
    list(itertools.product([1, 2, 3], [1, 2], [1, 2], [1, 2, 3])),
)
def test_enumeration_size_matches_closed_form(n_a, n_x, n_a_prime, n_x_prime):
    combs = enumerate_alice(n_a, n_x, n_a_prime, n_x_prime)
    expected = n_a_prime ** (n_a * n_x_prime) * n_x**n_x_prime

    assert len(combs) == expected == count_alice(n_a, n_x, n_a_prime, n_x_prime)
    assert len({(c.x_of, c.a_of) for c in combs}) == expected


def test_bob_input_wirings_multiply_the_count():
    combs = enumerate_with_bob_input(2, 3, 2, 2, 2, 2)

    assert len(combs) == count_alice(2, 3, 2, 2) * 2**2
    assert enumerate_bob_input_wirings(2, 2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert combs[0].y_weight(0, 1) == 1


def test_enumeration_order_is_lexicographic():
    combs = enumerate_alice(2, 2, 2, 1)

    assert [(c.a_of, c.x_of) for c in combs[:3]] == [
        (((0,), (0,)), (0,)),
        (((0,), (0,)), (1,)),
        (((0,), (1,)), (0,)),
    ]


def test_strategy_limit():
    with pytest.raises(StrategyLimitError):
        enumerate_alice(3, 3, 3, 3, limit=1000)
    with pytest.raises(StrategyLimitError):
        deterministic_responses(2, 10, limit=1000)


def test_empty_alphabets_are_rejected():
    with pytest.raises(DimensionMismatchError):
        enumerate_alice(0, 2, 2, 2)


def test_weights_and_sources():
    comb = DeterministicComb(x_of=(1, 0), a_of=((1, 0), (0, 0)), n_a_prime=2)

    assert comb.weight(a_prime=1, x_prime=0, a=0, x=1) == 1
    assert comb.weight(a_prime=1, x_prime=0, a=0, x=0) == 0
    assert comb.sources(0, 1) == [(0, 0), (1, 0)]
    assert comb.sources(1, 1) == []
    with pytest.raises(DimensionMismatchError):
        comb.y_weight(0, 0)


def test_deterministic_responses():
    assert deterministic_responses(2, 2) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_identity_comb_leaves_the_box_unchanged():
    box = catalog("p-aq")
    identity = DeterministicComb(x_of=(0, 1), a_of=((0, 0), (1, 1)), n_a_prime=2)

    assert np.allclose(apply_comb_to_box(identity, box).table, box.table)


def test_flipping_alice_maps_pr_box_to_its_complement():
    box = catalog("pr-box")
    flip = DeterministicComb(x_of=(0, 1), a_of=((1, 1), (0, 0)), n_a_prime=2)
    flipped = apply_comb_to_box(flip, box)

    assert flipped.validate().valid
    assert flipped.chsh_value() == pytest.approx(-4)
