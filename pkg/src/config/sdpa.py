#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""SDPA sparse dumps of lowered feasibility problems.

The problem G vec(Y) = h, Y >= 0 is written as the SDPA dual problem
max <F_0, Y> s.t. <F_i, Y> = c_i with c = h, F_0 = 0 and one matrix F_i per real
equation row. Every lowered Hermitian block is one symmetric SDPA block of twice
its size. Indices are 1-based; only upper-triangle entries are listed.
"""

from __future__ import annotations

import re
from collections import defaultdict
from pathlib import Path

import numpy as np

from core.problem import RealLowering
from utils.logging import WithLogging


class SdpaDump(WithLogging):
    """SDPA `.dat-s` contents of a lowering."""

    def __init__(self, lowering: RealLowering, title: str = ""):
        self.lowering = lowering
        self.title = title

    def entries(self) -> dict[tuple[int, int, int, int], float]:
        """{(matrix, block, i, j): value} with 1-based indices and i <= j."""
        lowering = self.lowering
        offsets = np.asarray(lowering.offsets)
        sizes = np.asarray(lowering.block_sizes)
        coo = lowering.matrix.tocoo()
        entries: dict[tuple[int, int, int, int], float] = defaultdict(float)
        for row, col, value in zip(coo.row, coo.col, coo.data):
            block = int(np.searchsorted(offsets, col, side="right") - 1)
            local = int(col - offsets[block])
            i, j = local % sizes[block], local // sizes[block]
            key = (int(row) + 1, block + 1, int(min(i, j)) + 1, int(max(i, j)) + 1)
            entries[key] += float(value) if i == j else float(value) / 2
        return {key: value for key, value in entries.items() if value != 0}

    def to_dict(self) -> dict:
        """Return the dict representation of the dump."""
        return {
            "m": int(self.lowering.matrix.shape[0]),
            "blocks": [int(size) for size in self.lowering.block_sizes],
            "c": [float(v) for v in self.lowering.rhs],
            "entries": self.entries(),
        }

    @property
    def contents(self) -> str:
        """Return the dump in SDPA sparse format."""
        data = self.to_dict()
        lines = [f'"{self.title}"' if self.title else '"feasibility problem"']
        lines.append(str(data["m"]))
        lines.append(str(len(data["blocks"])))
        lines.append(" ".join(str(size) for size in data["blocks"]) or "0")
        lines.append(" ".join(f"{v:.17g}" for v in data["c"]))
        for (m, b, i, j), value in sorted(data["entries"].items()):
            lines.append(f"{m} {b} {i} {j} {value:.17g}")
        return "\n".join(lines) + "\n"

    def write(self, directory: Path | str, name: str) -> Path:
        """Write the dump as `<directory>/<slug of name>.dat-s`."""
        slug = re.sub(r"[^A-Za-z0-9]+", "-", name).strip("-").lower() or "problem"
        path = Path(directory) / f"{slug}.dat-s"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.contents)
        self.logger.debug(f"wrote {path}")
        return path
