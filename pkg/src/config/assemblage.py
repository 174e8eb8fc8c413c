#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""JSON documents describing assemblages.

Layout:

    {"kind": "channel" | "bwi" | "mdi",
     "alphabets": {"A": 2, "X": 3, ...},
     "dims": {"B_in": 2, ...},
     "elements": {"<a>,<x>[,<y>|,<b>]": {"re": [[...]], "im": [[...]]}}}

Elements are the stored operators: Choi operators for channel and MDI assemblages
(outputs first), subnormalised states for Bob-with-input ones. Floats are written with
their shortest round-trip representation so a document reads back bit for bit.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from constants import B, B_IN, B_OUT, HERMITIAN_TOL
from core.choi import ChoiOperator
from core.domain import (
    Assemblage,
    BoxDistribution,
    BwiAssemblage,
    ChannelAssemblage,
    MdiAssemblage,
)
from core.enums import AssemblageKind
from core.exceptions import DimensionMismatchError, SchemaError
from core.tensor import ComplexMatrix
from utils.logging import WithLogging

ALPHABETS = {
    AssemblageKind.CHANNEL: ("A", "X"),
    AssemblageKind.BWI: ("A", "X", "Y"),
    AssemblageKind.MDI: ("A", "B", "X"),
}
DIMS = {
    AssemblageKind.CHANNEL: (B_IN, B_OUT),
    AssemblageKind.BWI: (B,),
    AssemblageKind.MDI: (B_IN,),
}


def _number(value: float) -> float:
    return 0.0 if value == 0 else float(value)


def _serialize_key(kind: AssemblageKind, key: tuple[int, ...]) -> str:
    if kind == AssemblageKind.MDI:
        a, b, x = key
        key = (a, x, b)
    return ",".join(str(k) for k in key)


def _parse_key(kind: AssemblageKind, text: str, pointer: str) -> tuple[int, ...]:
    try:
        key = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise SchemaError(pointer, f"element key {text!r} is not a list of integers") from None
    if len(key) != len(ALPHABETS[kind]):
        raise SchemaError(pointer, f"element key {text!r} needs {len(ALPHABETS[kind])} labels")
    if kind == AssemblageKind.MDI:
        a, x, b = key
        key = (a, b, x)
    return key


class AssemblageDocument(WithLogging):
    """Canonical JSON form of an assemblage."""

    def __init__(self, assemblage: Assemblage):
        self.assemblage = assemblage

    def _matrix(self, key: tuple[int, ...]) -> np.ndarray:
        element = self.assemblage.elements[key]
        return element.entries

    def to_dict(self) -> dict[str, Any]:
        """Return the dict representation of the document."""
        kind = self.assemblage.kind
        elements = {}
        for key in sorted(self.assemblage.elements):
            matrix = self._matrix(key)
            elements[_serialize_key(kind, key)] = {
                "re": [[_number(v) for v in row] for row in matrix.real],
                "im": [[_number(v) for v in row] for row in matrix.imag],
            }
        return {
            "kind": kind.value,
            "alphabets": self.assemblage.alphabets,
            "dims": self.assemblage.dims,
            "elements": elements,
        }

    @property
    def contents(self) -> str:
        """Return the document as indented JSON."""
        return json.dumps(self.to_dict(), indent=2) + "\n"


class BoxDocument(WithLogging):
    """JSON form of a box: its shape and the table indexed [a][b][x][y]."""

    def __init__(self, box: BoxDistribution):
        self.box = box

    def to_dict(self) -> dict[str, Any]:
        """Return the dict representation of the document."""
        return {
            "kind": "box",
            "alphabets": dict(zip(("A", "B", "X", "Y"), self.box.shape)),
            "table": self.box.table.tolist(),
        }

    @property
    def contents(self) -> str:
        """Return the document as indented JSON."""
        return json.dumps(self.to_dict(), indent=2) + "\n"


class AssemblageReader(WithLogging):
    """Validate a JSON document and build the assemblage it describes."""

    def __init__(self, hermitian_tol: float = HERMITIAN_TOL):
        self.hermitian_tol = hermitian_tol

    def read(self, document: Any) -> Assemblage:
        """Build the assemblage, raising SchemaError with a JSON pointer on violations."""
        if not isinstance(document, dict):
            raise SchemaError("", "document must be an object")
        for field in ("kind", "alphabets", "dims", "elements"):
            if field not in document:
                raise SchemaError(f"/{field}", "missing field")
        try:
            kind = AssemblageKind(document["kind"])
        except ValueError:
            raise SchemaError("/kind", f"unknown kind {document['kind']!r}") from None

        alphabets = self._sizes(document["alphabets"], ALPHABETS[kind], "/alphabets")
        dims = self._sizes(document["dims"], DIMS[kind], "/dims")
        if not isinstance(document["elements"], dict):
            raise SchemaError("/elements", "elements must be an object")

        matrices = {}
        for text, value in document["elements"].items():
            pointer = f"/elements/{text}"
            key = _parse_key(kind, text, pointer)
            matrices[key] = self._element(value, pointer, self._side(kind, dims))

        try:
            return self._build(kind, alphabets, dims, matrices)
        except DimensionMismatchError as e:
            raise SchemaError("/elements", str(e)) from e

    @staticmethod
    def _sizes(value: Any, names: tuple[str, ...], pointer: str) -> dict[str, int]:
        if not isinstance(value, dict):
            raise SchemaError(pointer, "must be an object")
        sizes = {}
        for name in names:
            size = value.get(name)
            if not isinstance(size, int) or isinstance(size, bool) or size < 1:
                raise SchemaError(f"{pointer}/{name}", "must be a positive integer")
            sizes[name] = size
        return sizes

    @staticmethod
    def _side(kind: AssemblageKind, dims: dict[str, int]) -> int:
        if kind == AssemblageKind.CHANNEL:
            return dims[B_IN] * dims[B_OUT]
        return dims[DIMS[kind][0]]

    def _element(self, value: Any, pointer: str, side: int) -> np.ndarray:
        if not isinstance(value, dict) or set(value) != {"re", "im"}:
            raise SchemaError(pointer, "element must have exactly the fields 're' and 'im'")
        parts = []
        for part in ("re", "im"):
            try:
                array = np.array(value[part], dtype=float)
            except (TypeError, ValueError):
                raise SchemaError(f"{pointer}/{part}", "must be a matrix of numbers") from None
            if array.shape != (side, side):
                raise SchemaError(f"{pointer}/{part}", f"must have shape {side}x{side}")
            parts.append(array)
        matrix = parts[0] + 1j * parts[1]
        if np.max(np.abs(matrix - matrix.conj().T)) > self.hermitian_tol:
            raise SchemaError(pointer, "element is not Hermitian")
        return matrix

    @staticmethod
    def _build(
        kind: AssemblageKind,
        alphabets: dict[str, int],
        dims: dict[str, int],
        matrices: dict[tuple[int, ...], np.ndarray],
    ) -> Assemblage:
        if kind == AssemblageKind.CHANNEL:
            d_in, d_out = dims[B_IN], dims[B_OUT]
            out_dims, out_labels = ((d_out,), (B_OUT,)) if d_out > 1 else ((), ())
            in_dims, in_labels = ((d_in,), (B_IN,)) if d_in > 1 else ((), ())
            elements = {
                key: ChoiOperator.from_array(m, out_dims, in_dims, out_labels, in_labels)
                for key, m in matrices.items()
            }
            return ChannelAssemblage(elements, alphabets["A"], alphabets["X"])
        if kind == AssemblageKind.BWI:
            states = {key: ComplexMatrix(m) for key, m in matrices.items()}
            return BwiAssemblage(states, alphabets["A"], alphabets["X"], alphabets["Y"])
        effects = {
            key: ChoiOperator.from_array(m, (), (dims[B_IN],), (), (B_IN,))
            for key, m in matrices.items()
        }
        return MdiAssemblage(effects, alphabets["A"], alphabets["B"], alphabets["X"])


def write_assemblage(a: Assemblage, path: Path | str) -> None:
    """Write the canonical JSON form of `a`."""
    Path(path).write_text(AssemblageDocument(a).contents)


def read_assemblage(path: Path | str) -> Assemblage:
    """Read an assemblage document, raising SchemaError on malformed input."""
    try:
        document = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise SchemaError("", f"malformed JSON at line {e.lineno}: {e.msg}") from e
    return AssemblageReader().read(document)
