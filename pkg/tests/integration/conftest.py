#!/usr/bin/env python3
# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

import logging

import pytest

from core.config import load_config
from core.context import Context
from managers.catalog import CatalogManager
from managers.feasibility import FeasibilityManager

logger = logging.getLogger(__name__)


@pytest.fixture(scope="module")
def context() -> Context:
    """Provide an engine context on the default configuration."""
    config = load_config()
    logger.info(f"solving with {config.backend.value} via {', '.join(config.solvers)}")
    return Context(config)


@pytest.fixture(scope="module")
def feasibility(context) -> FeasibilityManager:
    """Provide the configured feasibility manager."""
    return context.feasibility


@pytest.fixture(scope="module")
def catalog_manager() -> CatalogManager:
    """Provide the catalog lookup."""
    return CatalogManager()
