"""Symbolic two-branch states plus a dense small-n oracle."""

from .dense import (
    DENSE_LIMIT,
    DensityMatrix,
    DenseState,
    PMResult,
    apply_cnot,
    apply_global_phase,
    apply_hadamard_mask,
    apply_pauli_mask,
    check_capacity,
    density_of,
    expand,
    measure_pm,
    mix,
    trace_distance,
)
from .eigen import jacobi_eigh, jacobi_eigvalsh
from .exact import ExactMixture, ExactVector, exact_from_two_branch
from .symbolic import (
    TwoBranchState,
    phase_value,
    sym_apply_cnot,
    sym_apply_x,
    sym_apply_y_all,
    sym_apply_z_all,
    sym_undo_dressing,
)

__all__ = [
    "DENSE_LIMIT",
    "DensityMatrix",
    "DenseState",
    "PMResult",
    "apply_cnot",
    "apply_global_phase",
    "apply_hadamard_mask",
    "apply_pauli_mask",
    "check_capacity",
    "density_of",
    "expand",
    "measure_pm",
    "mix",
    "trace_distance",
    "jacobi_eigh",
    "jacobi_eigvalsh",
    "ExactMixture",
    "ExactVector",
    "exact_from_two_branch",
    "TwoBranchState",
    "phase_value",
    "sym_apply_cnot",
    "sym_apply_x",
    "sym_apply_y_all",
    "sym_apply_z_all",
    "sym_undo_dressing",
]
