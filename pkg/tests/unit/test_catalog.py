#!/usr/bin/env python3

# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import math

import pytest

from core.domain import BoxDistribution, ChannelAssemblage
from core.enums import RotationAxis
from core.exceptions import ParameterRangeError, UnknownCatalogEntryError
from managers.catalog import CatalogManager, catalog, format_angle, parse_angle


@pytest.mark.parametrize(
    "text,expected",
    [
        ("pi", math.pi),
        ("pi/8", math.pi / 8),
        ("3pi/4", 3 * math.pi / 4),
        ("-pi/2", -math.pi / 2),
        ("0.25", 0.25),
    ],
)
def test_parse_angle(text, expected):
    assert parse_angle(text) == pytest.approx(expected)


def test_unparsable_angle():
    with pytest.raises(ParameterRangeError):
        parse_angle("a quarter turn")


def test_format_angle():
    assert format_angle(math.pi) == "pi"
    assert format_angle(math.pi / 16) == "pi/16"
    assert format_angle(0.3) == "0.3"


def test_names_are_sorted():
    names = CatalogManager().names

    assert names == sorted(names)
    assert "sigma-pr-restricted" in names
    assert len(names) == 12


def test_r_family_defaults():
    entry = CatalogManager().parse("r-family")

    assert entry.params == {"theta": math.pi / 2, "axis": RotationAxis.Y}
    assert entry.label == "r-family:axis=y,theta=pi/2"


def test_parse_with_parameters():
    entry = CatalogManager().parse("r-family:theta=pi/8,axis=z")

    assert entry.params["theta"] == pytest.approx(math.pi / 8)
    assert entry.params["axis"] == RotationAxis.Z


@pytest.mark.parametrize(
    "text,error",
    [
        ("not-an-entry", UnknownCatalogEntryError),
        ("r-family:theta", ParameterRangeError),
        ("r-family:axis=w", ParameterRangeError),
        ("r-family:phi=pi", ParameterRangeError),
        ("sigma-ptp:theta=pi", ParameterRangeError),
    ],
)
def test_parse_errors(text, error):
    with pytest.raises(error):
        CatalogManager().parse(text)


def test_expand_products():
    entries = CatalogManager().expand("r-family:{pi/2,pi/8,pi/16}x{x,y,z}")

    assert len(entries) == 9
    assert entries[0].label == "r-family:axis=x,theta=pi/2"
    assert entries[-1].label == "r-family:axis=z,theta=pi/16"


def test_expand_passes_plain_entries_through():
    assert [e.label for e in CatalogManager().expand("n-pr")] == ["n-pr"]


def test_expand_rejects_products_of_other_entries():
    with pytest.raises(ParameterRangeError):
        CatalogManager().expand("sigma-pr:{a,b}")


def test_build_from_text():
    built = CatalogManager().build("r-family:theta=pi/4,axis=x")

    assert isinstance(built, ChannelAssemblage)
    assert built.validate().valid


def test_catalog_function():
    assert isinstance(catalog("pr-box"), BoxDistribution)
    assert catalog("r-family", theta="pi/8", axis="z").validate().valid
    with pytest.raises(ParameterRangeError):
        catalog("r-family", theta=2.0)
    with pytest.raises(ParameterRangeError):
        catalog("n-pr", theta=1.0)
    with pytest.raises(UnknownCatalogEntryError):
        catalog("sigma-unknown")
