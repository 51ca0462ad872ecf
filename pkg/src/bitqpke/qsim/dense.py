"""Dense statevector and density-matrix oracle for small qubit counts.

Amplitude index ``x`` is the integer value of the basis string, so qubit 1 is
the most significant bit of ``x`` (matching ``BitVec``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import CapacityError, DimensionError, ParameterError
from ..gf2 import BitVec
from .eigen import jacobi_eigvalsh
from .symbolic import TwoBranchState, phase_value

DENSE_LIMIT = 12

SQRT1_2 = 1.0 / np.sqrt(2.0)


def check_capacity(n: int, limit: int | None = None) -> None:
    limit = DENSE_LIMIT if limit is None else limit
    if n > limit:
        raise CapacityError(f"{n} qubits exceeds the dense limit of {limit}")


def _parity(x: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(x) & 1).astype(np.int64)


@dataclass(frozen=True, eq=False)
class DenseState:
    n: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if self.amps.shape != (1 << self.n,):
            raise DimensionError(f"expected {1 << self.n} amplitudes, got {self.amps.shape}")

    @classmethod
    def basis(cls, bits: BitVec | str) -> DenseState:
        if isinstance(bits, str):
            bits = BitVec.from_str(bits)
        check_capacity(bits.n)
        amps = np.zeros(1 << bits.n, dtype=complex)
        amps[bits.value] = 1.0
        return cls(bits.n, amps)

    @classmethod
    def from_amplitudes(cls, amps: Sequence[complex]) -> DenseState:
        amps = np.asarray(amps, dtype=complex)
        n = int(amps.size).bit_length() - 1
        if amps.ndim != 1 or amps.size != 1 << n:
            raise DimensionError("amplitude count must be a power of two")
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def allclose(self, other: DenseState, atol: float = 1e-12) -> bool:
        return self.n == other.n and bool(np.max(np.abs(self.amps - other.amps)) < atol)


def _mask_int(psi: DenseState, mask: BitVec) -> int:
    if mask.n != psi.n:
        raise DimensionError(f"mask length {mask.n} != {psi.n} qubits")
    return mask.value


def apply_hadamard_mask(psi: DenseState, mask: BitVec) -> DenseState:
    m = _mask_int(psi, mask)
    if m == 0:
        return psi
    t = psi.amps.reshape((2,) * psi.n).copy()
    for q in mask.support():
        axis = q - 1
        a0 = np.take(t, 0, axis=axis)
        a1 = np.take(t, 1, axis=axis)
        t = np.stack(((a0 + a1) * SQRT1_2, (a0 - a1) * SQRT1_2), axis=axis)
    return DenseState(psi.n, t.reshape(-1))


def apply_pauli_mask(psi: DenseState, which: str, mask: BitVec) -> DenseState:
    """X, Y or Z on every qubit set in ``mask``.

    Per qubit: X|b> = |~b>, Z|b> = (-1)^b |b>, Y|b> = i (-1)^b |~b>.
    """
    m = _mask_int(psi, mask)
    idx = np.arange(1 << psi.n)
    if which == "X":
        return DenseState(psi.n, psi.amps[idx ^ m])
    if which == "Z":
        return DenseState(psi.n, psi.amps * (1 - 2 * _parity(idx & m)))
    if which == "Y":
        src = idx ^ m
        sign = 1 - 2 * _parity(src & m)
        return DenseState(psi.n, phase_value(mask.weight()) * sign * psi.amps[src])
    raise ParameterError(f"unknown Pauli {which!r}")


def apply_cnot(psi: DenseState, control: int, target: int) -> DenseState:
    n = psi.n
    if not (1 <= control <= n and 1 <= target <= n):
        raise IndexError(f"qubit indices must lie in 1..{n}")
    if control == target:
        raise ParameterError("control and target must differ")
    idx = np.arange(1 << n)
    cbit = (idx >> (n - control)) & 1
    src = idx ^ (cbit << (n - target))
    return DenseState(n, psi.amps[src])


def apply_global_phase(psi: DenseState, t: int) -> DenseState:
    return DenseState(psi.n, phase_value(t) * psi.amps)


def expand(s: TwoBranchState, limit: int | None = None) -> DenseState:
    """Dense amplitudes of a symbolic state, built gate by gate."""
    check_capacity(s.n, limit)
    amps = np.zeros(1 << s.n, dtype=complex)
    amps[s.u.value] = SQRT1_2
    amps[s.v.value] = phase_value(s.rel) * SQRT1_2
    psi = DenseState(s.n, amps)
    psi = apply_hadamard_mask(psi, s.h_mask)
    psi = apply_pauli_mask(psi, "Y", s.y_mask)
    return apply_global_phase(psi, s.global_phase)


@dataclass(frozen=True)
class PMResult:
    prob_plus: float
    prob_minus: float
    post_plus: DenseState | None
    post_minus: DenseState | None


def measure_pm(psi: DenseState, qubit: int) -> PMResult:
    """Project ``qubit`` onto |+> and |->; post-states are renormalized (None if p=0)."""
    n = psi.n
    if not 1 <= qubit <= n:
        raise IndexError(f"qubit {qubit} outside 1..{n}")
    t = psi.amps.reshape((2,) * n)
    a0 = np.take(t, 0, axis=qubit - 1)
    a1 = np.take(t, 1, axis=qubit - 1)
    plus = (a0 + a1) * SQRT1_2
    minus = (a0 - a1) * SQRT1_2
    p_plus = float(np.sum(np.abs(plus) ** 2))
    p_minus = float(np.sum(np.abs(minus) ** 2))

    def post(rest: np.ndarray, sign: int, p: float) -> DenseState | None:
        if p <= 1e-15:
            return None
        full = np.stack((rest * SQRT1_2, sign * rest * SQRT1_2), axis=qubit - 1)
        return DenseState(n, full.reshape(-1) / np.sqrt(p))

    return PMResult(p_plus, p_minus, post(plus, 1, p_plus), post(minus, -1, p_minus))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    n: int
    data: np.ndarray

    def __post_init__(self) -> None:
        dim = 1 << self.n
        if self.data.shape != (dim, dim):
            raise DimensionError(f"expected a {dim}x{dim} matrix, got {self.data.shape}")

    @classmethod
    def maximally_mixed(cls, n: int) -> DensityMatrix:
        return cls(n, np.eye(1 << n, dtype=complex) / (1 << n))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def min_eigenvalue(self) -> float:
        return float(jacobi_eigvalsh(self.data)[0])

    def is_valid(self, tol: float = 1e-12, psd_tol: float = 1e-10) -> bool:
        return (self.hermiticity_error() < tol
                and abs(self.trace() - 1) < tol
                and self.min_eigenvalue() >= -psd_tol)


def density_of(psi: DenseState) -> DensityMatrix:
    return DensityMatrix(psi.n, np.outer(psi.amps, psi.amps.conj()))


def mix(weighted: Iterable[tuple[float, DensityMatrix]]) -> DensityMatrix:
    weighted = list(weighted)
    if not weighted:
        raise ParameterError("mix needs at least one component")
    weights = np.array([w for w, _ in weighted], dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ParameterError(f"weights must be nonnegative and sum to 1 (sum={weights.sum()!r})")
    n = weighted[0][1].n
    acc = np.zeros((1 << n, 1 << n), dtype=complex)
    for w, rho in weighted:
        if rho.n != n:
            raise DimensionError("all mixture components need the same qubit count")
        acc += w * rho.data
    return DensityMatrix(n, acc)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Half the sum of absolute eigenvalues of ``rho - sigma`` (Jacobi eigensolver)."""
    if rho.data.shape != sigma.data.shape:
        raise DimensionError(f"shape mismatch {rho.data.shape} vs {sigma.data.shape}")
    eig = jacobi_eigvalsh(rho.data - sigma.data)
    return float(min(1.0, 0.5 * np.sum(np.abs(eig))))
