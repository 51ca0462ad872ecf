"""The earlier two-branch scheme with states ``|i> +/- |i xor k>``.

Kept as the attack target and baseline.  Encrypting 1 applies ``Z`` to every
qubit, which flips the relative sign because ``k`` has odd weight.  Decryption
translates by ``X^i``, fans out CNOTs from the pivot of ``k`` and reads the
pivot qubit in the +/- basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boolfunc import BooleanFunction, sample_boolean_function
from .errors import IssuanceError, KeyMismatchError, ParameterError
from .gf2 import BitVec, is_odd_weight
from .qsim import (
    DenseState,
    TwoBranchState,
    apply_cnot,
    apply_pauli_mask,
    measure_pm,
    sym_apply_cnot,
    sym_apply_x,
    sym_apply_z_all,
)
from .scheme import pivot


@dataclass(frozen=True)
class Py12Key:
    F: BooleanFunction | None
    s: BitVec | None
    k: BitVec
    i: BitVec

    def __post_init__(self) -> None:
        if not is_odd_weight(self.k):
            raise ParameterError(f"k must have odd weight, got {self.k}")
        if self.i.n != self.k.n:
            raise ParameterError("i and k must have the same length")


def sample_py12_key(n: int, m: int, p: int, rng, max_draws: int = 1 << 12) -> Py12Key:
    """Random F, then s resampled until ``F(s)`` has odd weight; i uniform.

    A degenerate F is replaced by a fresh one after ``max_draws`` failures.
    """
    for _ in range(64):
        F = sample_boolean_function(m, n, p, rng)
        for _ in range(max_draws):
            s = BitVec.random(m, rng)
            k = F(s)
            if is_odd_weight(k):
                return Py12Key(F, s, k, BitVec.random(n, rng))
    raise IssuanceError("could not find an odd-weight F(s)")


def py12_issue(key: Py12Key) -> TwoBranchState:
    return TwoBranchState(key.k.n, key.i, key.i ^ key.k)


def py12_encrypt(state: TwoBranchState, bit: int) -> TwoBranchState:
    if bit not in (0, 1):
        raise ParameterError(f"plaintext must be a bit, got {bit!r}")
    if not state.undressed:
        raise ParameterError("PY12 encryption expects an undressed state")
    return sym_apply_z_all(state) if bit else state


def py12_decrypt(key: Py12Key, ct: TwoBranchState) -> int:
    """Symbolic run of the X^i / pivot-CNOT / +- measurement procedure."""
    if ct.n != key.k.n or not ct.undressed:
        raise KeyMismatchError("state shape does not fit the key")
    if {ct.u, ct.v} != {key.i, key.i ^ key.k}:
        raise KeyMismatchError("branches are not {i, i xor k}")
    st = sym_apply_x(ct, key.i)
    j = pivot(key.k)
    for q in key.k.support():
        if q != j:
            st = sym_apply_cnot(st, j, q)
    # Now the state is |0> + i^rel |e_j> (or swapped): qubit j carries it.
    e_j = BitVec.unit(ct.n, j)
    rel = st.rel if st.v == e_j else (-st.rel) % 4
    if rel == 0:
        return 0
    if rel == 2:
        return 1
    raise KeyMismatchError(f"relative phase i^{rel} is not +/-1")


def py12_decrypt_dense(k: BitVec, i: BitVec, psi: DenseState) -> tuple[float, float]:
    """Decryption procedure for a (possibly wrong) key on amplitudes.

    Returns:
        ``(p_plus, p_minus)`` at the pivot of ``k``; + decodes to 0.
    """
    psi = apply_pauli_mask(psi, "X", i)
    j = pivot(k)
    for q in k.support():
        if q != j:
            psi = apply_cnot(psi, j, q)
    res = measure_pm(psi, j)
    return res.prob_plus, res.prob_minus


def py12_dense_ciphertext(key: Py12Key, bit: int) -> DenseState:
    n = key.k.n
    amps = np.zeros(1 << n, dtype=complex)
    amps[key.i.value] = 1 / np.sqrt(2)
    amps[(key.i ^ key.k).value] = 1 / np.sqrt(2)
    psi = DenseState(n, amps)
    return apply_pauli_mask(psi, "Z", BitVec.ones(n)) if bit else psi
