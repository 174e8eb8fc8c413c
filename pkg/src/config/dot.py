#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""DOT rendering of conversion graphs."""

from managers.preorder import ConversionGraph
from utils.logging import WithLogging


class DotGraph(WithLogging):
    """Digraph with one node per assemblage and one arrow per Feasible conversion.

    Reflexive edges are implied and not drawn unless `reflexive` is set; pairs left
    Indeterminate are drawn dashed.
    """

    def __init__(self, graph: ConversionGraph, name: str = "preorder", reflexive: bool = False):
        self.graph = graph
        self.name = name
        self.reflexive = reflexive

    def to_dict(self) -> dict[str, list]:
        """Return nodes, edges and unresolved pairs in node order."""
        order = {label: i for i, label in enumerate(self.graph.labels)}
        edges = sorted(self.graph.feasible_edges, key=lambda e: (order[e[0]], order[e[1]]))
        if self.reflexive:
            edges = sorted(
                edges + [(label, label) for label in self.graph.labels],
                key=lambda e: (order[e[0]], order[e[1]]),
            )
        return {
            "nodes": self.graph.labels,
            "edges": edges,
            "unresolved": self.graph.unresolved,
        }

    @property
    def contents(self) -> str:
        """Return the graph in DOT syntax."""
        data = self.to_dict()
        lines = [f'digraph "{self.name}" {{', "  rankdir=TB;"]
        lines += [f'  "{label}";' for label in data["nodes"]]
        lines += [f'  "{u}" -> "{v}";' for u, v in data["edges"]]
        lines += [f'  "{u}" -> "{v}" [style=dashed];' for u, v in data["unresolved"]]
        lines.append("}")
        return "\n".join(lines) + "\n"
