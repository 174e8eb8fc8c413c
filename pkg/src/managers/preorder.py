#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Pairwise exploration of LOSR conversions within a set of assemblages."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import networkx as nx

from constants import STRATEGY_LIMIT
from core.domain import Assemblage
from core.enums import FeasibilityStatus
from core.problem import FeasibilityVerdict
from managers.conversion import build_conversion
from managers.feasibility import FeasibilityManager
from utils.logging import WithLogging


@dataclass(frozen=True)
class Node:
    """An assemblage under a stable identifier; `rank` orders nodes in outputs."""

    label: str
    assemblage: Assemblage
    rank: tuple = ()


class ConversionGraph:
    """Directed graph of Feasible conversions with the verdicts behind every pair.

    Edges carry the verdict of the conversion problem; pairs decided Indeterminate are
    kept apart in `unresolved`. Every node has a reflexive edge.
    """

    def __init__(self, nodes: Sequence[Node]):
        self.nodes = sorted(nodes, key=lambda n: n.rank)
        self.graph = nx.DiGraph()
        self.verdicts: dict[tuple[str, str], FeasibilityVerdict | None] = {}
        for node in self.nodes:
            self.graph.add_node(node.label, rank=node.rank)
            self.graph.add_edge(node.label, node.label, reflexive=True)
            self.verdicts[(node.label, node.label)] = None

    @property
    def labels(self) -> list[str]:
        """Node labels in output order."""
        return [node.label for node in self.nodes]

    def record(self, source: str, target: str, verdict: FeasibilityVerdict) -> None:
        """Store the verdict of source -> target and add an edge when Feasible."""
        self.verdicts[(source, target)] = verdict
        if verdict.status == FeasibilityStatus.FEASIBLE:
            self.graph.add_edge(
                source, target, reflexive=False, max_residual=verdict.max_residual
            )

    def status(self, source: str, target: str) -> FeasibilityStatus:
        """Verdict status of a pair, Feasible for reflexive pairs."""
        verdict = self.verdicts[(source, target)]
        return FeasibilityStatus.FEASIBLE if verdict is None else verdict.status

    @property
    def feasible_edges(self) -> set[tuple[str, str]]:
        """Non-reflexive Feasible conversions."""
        return {(u, v) for u, v in self.graph.edges if u != v}

    @property
    def unresolved(self) -> list[tuple[str, str]]:
        """Pairs decided Indeterminate, in node order."""
        return [
            pair
            for pair, verdict in self.verdicts.items()
            if verdict is not None and verdict.status == FeasibilityStatus.INDETERMINATE
        ]

    def transitivity_violations(self) -> list[tuple[str, str, str]]:
        """Triples u -> v -> w with u -> w decided Infeasible.

        Such a triple contradicts composition of free operations and points at a
        numerical or modelling defect; it is reported, never repaired.
        """
        violations = []
        for u, v, w in itertools.permutations(self.labels, 3):
            if (
                self.graph.has_edge(u, v)
                and self.graph.has_edge(v, w)
                and self.status(u, w) == FeasibilityStatus.INFEASIBLE
            ):
                violations.append((u, v, w))
        return violations

    def equivalence_classes(self) -> list[list[str]]:
        """Sets of mutually convertible assemblages, in node order."""
        order = {label: i for i, label in enumerate(self.labels)}
        classes = [
            sorted(component, key=order.get)
            for component in nx.strongly_connected_components(self.graph)
        ]
        return sorted(classes, key=lambda c: order[c[0]])


class PreorderManager(WithLogging):
    """Runs every ordered pair of conversions on a bounded thread pool."""

    def __init__(
        self,
        feasibility: FeasibilityManager,
        jobs: int = 1,
        limit: int = STRATEGY_LIMIT,
    ):
        self.feasibility = feasibility
        self.jobs = max(1, jobs)
        self.limit = limit

    def convert(self, source: Node, target: Node) -> FeasibilityVerdict:
        """Decide source -> target."""
        problem = build_conversion(source.assemblage, target.assemblage, self.limit)
        return self.feasibility.solve(problem, name=f"{source.label} to {target.label}")

    def explore(self, nodes: Sequence[Node]) -> ConversionGraph:
        """Decide all ordered pairs of distinct nodes and collect them in a graph."""
        graph = ConversionGraph(nodes)
        pairs = [(s, t) for s in graph.nodes for t in graph.nodes if s.label != t.label]
        self.logger.info(f"exploring {len(pairs)} conversions with {self.jobs} workers")
        with ThreadPoolExecutor(max_workers=self.jobs) as executor:
            futures = [executor.submit(self.convert, s, t) for s, t in pairs]
            for (source, target), future in zip(pairs, futures):
                trace = self.log_result(
                    lambda v: f"{source.label} -> {target.label}: {v.status.value}", "DEBUG"
                )
                graph.record(source.label, target.label, trace(future.result()))

        if graph.unresolved:
            self.logger.warning(f"{len(graph.unresolved)} conversions are Indeterminate")
        for u, v, w in graph.transitivity_violations():
            self.logger.error(f"transitivity violated: {u} -> {v} -> {w} but {u} -/-> {w}")
        return graph
