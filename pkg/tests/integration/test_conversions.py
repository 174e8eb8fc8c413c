#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import logging
from math import pi

import pytest

from core.enums import FeasibilityStatus
from managers.catalog import catalog
from managers.conversion import build_conversion
from managers.free import sample_free

logger = logging.getLogger(__name__)

FEASIBLE = FeasibilityStatus.FEASIBLE
INFEASIBLE = FeasibilityStatus.INFEASIBLE


def convert(feasibility, source, target) -> FeasibilityStatus:
    verdict = feasibility.solve(build_conversion(source, target), "conversion")
    logger.info(f"{verdict.describe()}")
    return verdict.status


def r_family(theta: float, axis: str):
    return catalog("r-family", theta=theta, axis=axis)


@pytest.mark.slow
@pytest.mark.parametrize(
    "source,target",
    [
        ((pi / 8, "x"), (pi / 8, "y")),
        ((pi / 8, "y"), (pi / 8, "x")),
        ((pi / 8, "y"), (pi / 8, "z")),
        ((pi / 8, "z"), (pi / 8, "y")),
        ((pi / 2, "x"), (pi / 2, "z")),
        ((pi / 16, "z"), (pi / 16, "x")),
    ],
)
def test_rotation_axes_are_interconvertible(feasibility, source, target):
    assert convert(feasibility, r_family(*source), r_family(*target)) == FEASIBLE


@pytest.mark.slow
@pytest.mark.parametrize(
    "source,target,expected",
    [
        ((pi / 2, "y"), (pi / 8, "y"), FEASIBLE),
        ((pi / 8, "y"), (pi / 16, "y"), FEASIBLE),
        ((pi / 2, "x"), (pi / 16, "z"), FEASIBLE),
        ((pi / 8, "y"), (pi / 2, "y"), INFEASIBLE),
        ((pi / 16, "y"), (pi / 8, "y"), INFEASIBLE),
        ((pi / 16, "z"), (pi / 2, "x"), INFEASIBLE),
    ],
)
def test_rotation_angle_only_decreases(feasibility, source, target, expected):
    assert convert(feasibility, r_family(*source), r_family(*target)) == expected


@pytest.mark.slow
@pytest.mark.parametrize(
    "source,target",
    [
        ("i-pr", "i-ptp"),
        ("i-ptp", "i-pr"),
        ("sigma-ptp", "sigma-pr"),
        ("sigma-pr", "sigma-ptp"),
        ("sigma-chsh", "sigma-aq"),
        ("sigma-aq", "sigma-chsh"),
        ("n-ptp", "n-pr"),
    ],
)
def test_incomparable_pairs(feasibility, source, target):
    assert convert(feasibility, catalog(source), catalog(target)) == INFEASIBLE


@pytest.mark.slow
def test_restricted_pr_assemblage_reaches_aq_but_not_back(feasibility):
    restricted, aq = catalog("sigma-pr-restricted"), catalog("sigma-aq")

    assert convert(feasibility, restricted, aq) == FEASIBLE
    assert convert(feasibility, aq, restricted) == INFEASIBLE


@pytest.mark.slow
@pytest.mark.parametrize("name", ["sigma-aq", "sigma-chsh", "n-pr"])
def test_every_assemblage_converts_to_itself(feasibility, name):
    entry = catalog(name)

    assert convert(feasibility, entry, entry) == FEASIBLE


@pytest.mark.slow
def test_feasible_conversions_carry_a_checked_witness(feasibility, context):
    source, target = r_family(pi / 2, "y"), r_family(pi / 8, "y")
    problem = build_conversion(source, target)
    verdict = feasibility.solve(problem)

    assert verdict.status == FEASIBLE
    assert problem.max_residual(verdict.witness) <= context.config.eps_feas
    assert problem.min_eigenvalue(verdict.witness) >= -context.config.eps_feas


@pytest.mark.slow
def test_pr_measurement_assemblage_reaches_the_transposed_pauli_one(feasibility):
    # discarding B_in after the controlled transpose leaves a local box
    assert convert(feasibility, catalog("n-pr"), catalog("n-ptp")) == FEASIBLE


@pytest.mark.slow
@pytest.mark.parametrize("source,target", [("i-pr", "i-ptp"), ("i-ptp", "i-pr")])
def test_pr_and_ptp_instruments_are_robustly_incomparable(feasibility, source, target):
    verdict = feasibility.solve(build_conversion(catalog(source), catalog(target)))

    assert verdict.status == INFEASIBLE
    assert verdict.infeasibility_gap > 1e-4


@pytest.mark.slow
@pytest.mark.parametrize(
    "name",
    [
        "r-family",
        "i-ptp",
        "i-pr",
        "sigma-ptp",
        "sigma-pr",
        "sigma-pr-restricted",
        "sigma-aq",
        "sigma-chsh",
        "n-ptp",
        "n-pr",
    ],
)
def test_every_source_reaches_free_targets(feasibility, name):
    source = catalog(name)
    target = sample_free(source.kind, source.alphabets, source.dims, seed=17)

    assert convert(feasibility, source, target) == FEASIBLE
