# Copyright 2024 Canonical Limited
# See LICENSE file for licensing details.

"""Literals and constants."""

from pathlib import Path

# Numerical tolerances
HERMITIAN_TOL = 1e-9
PSD_TOL = 1e-8
EPS_FEAS = 1e-6
INFEASIBLE_FACTOR = 10.0
NO_SIGNALLING_TOL = 1e-8
FACTORIZATION_TOL = 1e-7

# Problem size guards
STRATEGY_LIMIT = 1_000_000
MEMBERSHIP_MAX_DIM = 4
REFERENCE_ADAPTER_MAX_VARIABLES = 5_000

# Subsystem labels of the channel, Bob-with-input and MDI scenarios
B = "B"
B_IN = "B_in"
B_OUT = "B_out"
B_PRIME = "B'"
B_IN_PRIME = "B_in'"
B_OUT_PRIME = "B_out'"

# Catalog names
R_FAMILY = "r-family"
I_PTP = "i-ptp"
I_PR = "i-pr"
SIGMA_PTP = "sigma-ptp"
SIGMA_PR = "sigma-pr"
SIGMA_PR_RESTRICTED = "sigma-pr-restricted"
SIGMA_AQ = "sigma-aq"
SIGMA_CHSH = "sigma-chsh"
N_PTP = "n-ptp"
N_PR = "n-pr"
P_AQ = "p-aq"
PR_BOX = "pr-box"

# CLI exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INDETERMINATE = 2

DEFAULT_CONFIG_FILE = Path(__file__).parent.parent / "config.yaml"
