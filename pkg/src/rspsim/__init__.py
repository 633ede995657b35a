"""Simulator and resource calculator for remote state preparation over
non-maximally entangled channels."""
from .errors import CentralGapError, DegenerateBranchError, DomainError, InfeasiblePlanError
from .qcore import TargetQubit, make_target_state
from .protocols import (
    run_appendixB_central, run_explicit, run_ghz, run_improved1_central, run_improved2,
    run_monte_carlo, run_protocol,
)
from .resources import (
    appendixA_depth, appendixB_depth, greedy_compress, improved1_depth, sweep_curve,
)

__version__ = "0.1.0"
