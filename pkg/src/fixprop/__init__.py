"""Constraint propagation by chaotic iteration over finite domains.

The package splits into layers:

* orders: partial-order plumbing for product states of finite sets.
* engine: generic fixpoint iteration (whole-state, scheme-aware, and
  one-pass variants) with runtime monitoring and traces.
* model: CSP data types, normalization, reordering.
* propagators: projection and composition functions plus their
  commuting sets.
* algorithms: the assembled local-consistency algorithms.
* oracle: brute-force reference implementations for cross-checking.
* cli: the fixprop command.
"""

from .algorithms import (
    AlgorithmResult,
    ac3,
    dac,
    darc,
    dpath,
    dpc,
    hyper_arc,
    path,
    pc2,
)
from .engine import (
    DEFAULT_STEP_LIMIT,
    IterationTrace,
    PropagatorFn,
    TraceStep,
    UpdatePolicy,
    Worklist,
    cd_run,
    gi_run,
    ground,
    ground_all,
    semi_commutes,
    si_run,
    update_set,
    verify_measure,
)
from .errors import (
    FixpropError,
    InvariantViolation,
    ParseError,
    ResourceLimitError,
    StepLimitExceeded,
    StructuralError,
    UnsupportedInputError,
)
from .model import Constraint, Csp, NormalizedCsp, compose, normalize, reorder, transpose
from .orders import Scheme, changed_coords, lift, slice_state, state_leq

__version__ = "0.1.0"

__all__ = [
    "AlgorithmResult",
    "Constraint",
    "Csp",
    "DEFAULT_STEP_LIMIT",
    "FixpropError",
    "InvariantViolation",
    "IterationTrace",
    "NormalizedCsp",
    "ParseError",
    "PropagatorFn",
    "ResourceLimitError",
    "Scheme",
    "StepLimitExceeded",
    "StructuralError",
    "TraceStep",
    "UnsupportedInputError",
    "UpdatePolicy",
    "Worklist",
    "ac3",
    "cd_run",
    "changed_coords",
    "compose",
    "dac",
    "darc",
    "dpath",
    "dpc",
    "gi_run",
    "ground",
    "ground_all",
    "hyper_arc",
    "lift",
    "normalize",
    "path",
    "pc2",
    "reorder",
    "semi_commutes",
    "si_run",
    "slice_state",
    "state_leq",
    "transpose",
    "update_set",
    "verify_measure",
]
