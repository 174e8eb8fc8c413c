#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import logging

import pytest

from events.conversion import node_rank
from managers.feasibility import FeasibilityManager
from managers.preorder import ConversionGraph, Node, PreorderManager

logger = logging.getLogger(__name__)

R_FAMILY_SET = "r-family:{pi/2,pi/8,pi/16}x{x,y,z}"


@pytest.fixture(scope="module")
def entries(catalog_manager):
    return catalog_manager.expand(R_FAMILY_SET)


@pytest.fixture(scope="module")
def graphs(context, catalog_manager, entries) -> dict[float, ConversionGraph]:
    """Explore the nine rotations at both ends of the tolerance range."""
    nodes = [
        Node(entry.label, catalog_manager.build(entry), node_rank(entry, position))
        for position, entry in enumerate(entries)
    ]
    graphs = {}
    for eps in (1e-7, 1e-5):
        manager = PreorderManager(FeasibilityManager(context.adapter, eps), context.config.jobs)
        graphs[eps] = manager.explore(nodes)
        logger.info(f"eps {eps}: {len(graphs[eps].feasible_edges)} edges")
    return graphs


def expected_edges(entries) -> set[tuple[str, str]]:
    return {
        (source.label, target.label)
        for source in entries
        for target in entries
        if source.label != target.label
        and source.params["theta"] >= target.params["theta"] - 1e-12
    }


@pytest.mark.slow
@pytest.mark.parametrize("eps", [1e-7, 1e-5])
def test_rotation_preorder(graphs, entries, eps):
    graph = graphs[eps]

    assert graph.unresolved == []
    assert graph.feasible_edges == expected_edges(entries)
    assert graph.transitivity_violations() == []
    assert len(graph.equivalence_classes()) == 3


@pytest.mark.slow
def test_verdicts_do_not_depend_on_the_tolerance(graphs):
    loose, tight = graphs[1e-5], graphs[1e-7]

    assert {
        pair: verdict.status for pair, verdict in loose.verdicts.items() if verdict
    } == {pair: verdict.status for pair, verdict in tight.verdicts.items() if verdict}
