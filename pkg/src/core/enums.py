"""Module that contains enums used across the engine."""

from enum import Enum


class AssemblageKind(str, Enum):
    """Enum for the `kind` field of serialized assemblages."""

    CHANNEL = "channel"
    BWI = "bwi"
    MDI = "mdi"


class FeasibilityStatus(str, Enum):
    """Outcome of a feasibility solve."""

    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    INDETERMINATE = "Indeterminate"


class MembershipVerdict(str, Enum):
    """Outcome of the level-1 quantum membership test."""

    QUANTUM_COMPATIBLE_AT_LEVEL_1 = "QuantumCompatibleAtLevel1"
    POST_QUANTUM = "PostQuantum"
    INDETERMINATE = "Indeterminate"


class RotationAxis(str, Enum):
    """Rotation axis of the controlled rotations in the R family."""

    X = "x"
    Y = "y"
    Z = "z"


class SolverBackend(str, Enum):
    """Solver adapters bundled with the engine."""

    CVXPY = "cvxpy"
    PROJECTION = "projection"


class PhaseOneStatus(str, Enum):
    """Termination of a solver adapter on the phase-1 program."""

    SOLVED = "solved"
    INACCURATE = "inaccurate"
    FAILED = "failed"
