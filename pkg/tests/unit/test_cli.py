#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import json
import logging

import pytest

from cli import main
from constants import EXIT_ERROR, EXIT_INDETERMINATE, EXIT_OK
from core.enums import FeasibilityStatus
from core.problem import FeasibilityVerdict
from managers.feasibility import FeasibilityManager


@pytest.fixture(autouse=True)
def reset_logging():
    """Drop the stream handler installed by main, it is bound to the captured stderr."""
    yield
    root = logging.getLogger()
    for handler in [h for h in root.handlers if getattr(h, "_losr_handler", False)]:
        root.removeHandler(handler)


@pytest.fixture
def decide(monkeypatch):
    """Make every feasibility solve return the given status without a solver."""

    def factory(status: FeasibilityStatus) -> list[str]:
        names: list[str] = []

        def solve(self, problem, name=None):
            names.append(name or problem.provenance)
            return FeasibilityVerdict(status, provenance=problem.provenance)

        monkeypatch.setattr(FeasibilityManager, "solve", solve)
        return names

    return factory


def test_catalog_lists_the_entries(capsys):
    assert main(["catalog"]) == EXIT_OK

    names = capsys.readouterr().out.split()
    assert "r-family" in names
    assert len(names) == 12


def test_catalog_emits_a_document(capsys):
    assert main(["catalog", "pr-box"]) == EXIT_OK

    assert json.loads(capsys.readouterr().out)["kind"] == "box"


def test_catalog_to_file_then_validate(tmp_path, capsys):
    path = tmp_path / "sigma.json"

    assert main(["catalog", "sigma-ptp", "--out", str(path)]) == EXIT_OK
    assert main(["validate", str(path)]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[-1].endswith(": valid")


def test_validate_reports_an_invalid_document(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps(
            {
                "kind": "bwi",
                "alphabets": {"A": 1, "X": 1, "Y": 1},
                "dims": {"B": 2},
                "elements": {"0,0,0": {"re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]}},
            }
        )
    )

    assert main(["validate", str(path)]) == EXIT_ERROR
    assert "INVALID" in capsys.readouterr().out


def test_engine_errors_exit_with_one(capsys):
    assert main(["validate", "not-an-entry"]) == EXIT_ERROR

    assert "error: UnknownCatalogEntryError" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv,code",
    [
        (["--help"], EXIT_OK),
        ([], EXIT_ERROR),
        (["convert", "--from", "sigma-ptp"], EXIT_ERROR),
        (["check-free", "sigma-ptp", "--sample", "bwi"], EXIT_ERROR),
    ],
)
def test_argument_errors(argv, code):
    assert main(argv) == code


def test_bad_configuration_exits_with_one(capsys):
    assert main(["validate", "pr-box", "--eps-feas", "-1"]) == EXIT_ERROR

    assert "ConfigurationError" in capsys.readouterr().err


def test_check_free_indeterminate_exits_with_two(decide, capsys):
    names = decide(FeasibilityStatus.INDETERMINATE)

    assert main(["check-free", "--sample", "mdi"]) == EXIT_INDETERMINATE
    assert capsys.readouterr().out.strip() == "Indeterminate"
    assert len(names) == 1


def test_check_free_feasible(decide, capsys):
    decide(FeasibilityStatus.FEASIBLE)

    assert main(["check-free", "sigma-chsh"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "Feasible (LOSR-free)"


def test_convert_prints_the_verdict(decide, capsys):
    names = decide(FeasibilityStatus.INFEASIBLE)

    assert main(["convert", "--from", "sigma-chsh", "--to", "sigma-aq"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "Infeasible"
    assert names == ["sigma-chsh to sigma-aq"]


def test_convert_rejects_boxes(capsys):
    assert main(["convert", "--from", "pr-box", "--to", "p-aq"]) == EXIT_ERROR
    assert "InvalidOperatorError" in capsys.readouterr().err


def test_preorder_writes_the_graph(decide, tmp_path, capsys):
    decide(FeasibilityStatus.FEASIBLE)
    out = tmp_path / "graph.dot"

    code = main(["preorder", "--set", "r-family:{pi/2,pi/8}", "--jobs", "1", "--out", str(out)])
    assert code == EXIT_OK
    assert '"r-family:axis=y,theta=pi/2" -> "r-family:axis=y,theta=pi/8";' in out.read_text()
    assert capsys.readouterr().out.strip() == (
        "class: r-family:axis=y,theta=pi/2 ~ r-family:axis=y,theta=pi/8"
    )


def test_preorder_with_unresolved_pairs_exits_with_two(decide, capsys):
    decide(FeasibilityStatus.INDETERMINATE)

    assert main(["preorder", "--set", "sigma-chsh", "sigma-aq", "--jobs", "2"]) == (
        EXIT_INDETERMINATE
    )
    assert "[style=dashed]" in capsys.readouterr().out


def test_membership_needs_an_mdi_assemblage(capsys):
    assert main(["membership", "sigma-ptp"]) == EXIT_ERROR
    assert "not an MDI assemblage" in capsys.readouterr().err


def test_membership_json_summary(decide, capsys):
    decide(FeasibilityStatus.INDETERMINATE)

    assert main(["membership", "n-pr", "--json"]) == EXIT_INDETERMINATE
    summary = json.loads(capsys.readouterr().out)
    assert summary["verdict"] == "Indeterminate"
    assert summary["matrix_size"] == 8


def test_functional(capsys):
    assert main(["functional", "sigma-pr"]) == EXIT_OK

    assert capsys.readouterr().out.splitlines() == ["S_PTP = 3", "support check: fail"]


def test_functional_needs_a_bob_with_input_assemblage(capsys):
    assert main(["functional", "n-pr"]) == EXIT_ERROR
