"""Bit-oriented QPKE: key generation, issuance, encryption and decryption.

The private key is three Boolean functions ``F1, F2, F3``.  A public key is a
classical tag ``s = (s1, s2, s3)`` with the state
``Y^{k3} H^{k2} (|0> + |k1>) / sqrt(2)`` where ``k_i = F_i(s_i)`` and ``k1`` has
odd weight.  Encrypting 1 applies ``Y`` to every qubit; encrypting 0 sends the
public key as is.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from .boolfunc import BooleanFunction, sample_boolean_function
from .errors import IssuanceError, KeyMismatchError, ParameterError
from .gf2 import BitVec, is_odd_weight
from .qsim import (
    DenseState,
    TwoBranchState,
    apply_cnot,
    apply_hadamard_mask,
    apply_pauli_mask,
    check_capacity,
    expand,
    measure_pm,
    sym_apply_y_all,
    sym_undo_dressing,
)
from .registry import KeyRegistry

MAX_S1_DRAWS = 1 << 20

Tag = tuple[BitVec, BitVec, BitVec]


@dataclass(frozen=True)
class PrivateKey:
    n: int
    m: int
    p: int
    F1: BooleanFunction
    F2: BooleanFunction
    F3: BooleanFunction

    def __post_init__(self) -> None:
        if self.n < 2 or self.n % 2:
            raise ParameterError(f"n must be even and >= 2, got {self.n}")
        for F in (self.F1, self.F2, self.F3):
            if (F.m, F.n, F.p) != (self.m, self.n, self.p):
                raise ParameterError("all three functions must share (m, n, p)")

    def derive(self, tag: Tag) -> tuple[BitVec, BitVec, BitVec]:
        """``(k1, k2, k3) = (F1(s1), F2(s2), F3(s3))``."""
        s1, s2, s3 = tag
        return self.F1(s1), self.F2(s2), self.F3(s3)

    def dumps(self) -> str:
        return f"{self.n} {self.m} {self.p}\n" + "".join(F.dumps() for F in (self.F1, self.F2, self.F3))

    @classmethod
    def loads(cls, text: str) -> PrivateKey:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        n, m, p = (int(x) for x in lines[0].split())
        block = n + 1
        funcs = [BooleanFunction._parse(lines[1 + i * block: 1 + (i + 1) * block]) for i in range(3)]
        return cls(n, m, p, *funcs)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path: str | Path) -> PrivateKey:
        return cls.loads(Path(path).read_text())


def _dump_tag(tag: Tag) -> str:
    return "tag " + " ".join(str(s) for s in tag)


def _parse_fields(text: str) -> dict[str, str]:
    fields = {}
    for line in text.splitlines():
        if line.strip():
            key, _, rest = line.strip().partition(" ")
            fields[key] = rest
    return fields


def _parse_tag(rest: str) -> Tag:
    parts = rest.split()
    if len(parts) != 3:
        raise ParameterError(f"tag needs three bit strings, got {rest!r}")
    return tuple(BitVec.from_str(x) for x in parts)  # type: ignore[return-value]


@dataclass(frozen=True)
class PublicKey:
    tag: Tag
    state: TwoBranchState
    key_id: str

    def dumps(self) -> str:
        return f"key_id {self.key_id}\n{_dump_tag(self.tag)}\nstate {self.state.dumps()}\n"

    @classmethod
    def loads(cls, text: str) -> PublicKey:
        f = _parse_fields(text)
        try:
            return cls(_parse_tag(f["tag"]), TwoBranchState.loads(f["state"]), f["key_id"])
        except KeyError as exc:
            raise ParameterError(f"public key file lacks field {exc}") from None


@dataclass(frozen=True)
class Ciphertext:
    tag: Tag
    state: TwoBranchState
    key_id: str = ""

    def dumps(self) -> str:
        head = f"key_id {self.key_id}\n" if self.key_id else ""
        return f"{head}{_dump_tag(self.tag)}\nstate {self.state.dumps()}\n"

    @classmethod
    def loads(cls, text: str) -> Ciphertext:
        f = _parse_fields(text)
        try:
            return cls(_parse_tag(f["tag"]), TwoBranchState.loads(f["state"]), f.get("key_id", ""))
        except KeyError as exc:
            raise ParameterError(f"ciphertext file lacks field {exc}") from None


def keygen(n: int, m: int, p: int, rng) -> PrivateKey:
    if n < 2 or n % 2:
        raise ParameterError(f"n must be even and >= 2 (Y^n phase argument), got {n}")
    if m < 1 or p < 1:
        raise ParameterError("m and p must be >= 1")
    F1 = sample_boolean_function(m, n, p, rng)
    F2 = sample_boolean_function(m, n, p, rng)
    F3 = sample_boolean_function(m, n, p, rng)
    return PrivateKey(n, m, p, F1, F2, F3)


def public_key_state(k1: BitVec, k2: BitVec, k3: BitVec) -> TwoBranchState:
    return TwoBranchState(k1.n, BitVec.zeros(k1.n), k1, 0, 0, k2, k3)


def issue_public_key(sk: PrivateKey, rng, registry: KeyRegistry | None = None,
                     max_draws: int = MAX_S1_DRAWS) -> PublicKey:
    """Draw a fresh tag, resampling ``s1`` until ``F1(s1)`` has odd weight.

    Gives up with :class:`IssuanceError` once every ``s1`` in ``{0,1}^m`` has
    been seen or after ``max_draws`` draws.
    """
    domain = 1 << sk.m
    seen: set[int] = set()
    draws = 0
    while True:
        s1 = BitVec.random(sk.m, rng)
        draws += 1
        k1 = sk.F1(s1)
        if is_odd_weight(k1):
            break
        seen.add(s1.value)
        if len(seen) == domain or draws >= max_draws:
            raise IssuanceError("private key admits no valid k1")
    s2 = BitVec.random(sk.m, rng)
    s3 = BitVec.random(sk.m, rng)
    key_id = rng.bytes(8).hex()
    pk = PublicKey((s1, s2, s3), public_key_state(k1, sk.F2(s2), sk.F3(s3)), key_id)
    if registry is not None:
        registry.register(pk)
    return pk


Gate = tuple  # ("H", q) or ("CNOT", control, target); qubits are 1-based


def pivot(k1: BitVec) -> int:
    """Lowest 1-based position where ``k1`` is set."""
    support = k1.support()
    if not support:
        raise ParameterError("zero vector has no pivot")
    return support[0]


def preparation_circuit(k1: BitVec, method: Literal["A", "B"]) -> tuple[int, list[Gate]]:
    """Gate list preparing ``(|0> + |k1>)/sqrt(2)``.

    Method A uses an ancilla (qubit 1, data on qubits 2..n+1): Hadamard on
    the ancilla, a CNOT fan-out realising controlled-k, then one CNOT from a
    set data qubit back onto the ancilla to return it to |0>.  Method B puts
    the Hadamard straight on the pivot qubit and fans out from there, saving
    two CNOTs.

    Returns:
        ``(qubit_count, gates)``.
    """
    if not is_odd_weight(k1):
        raise ParameterError(f"k1 must have odd weight, got {k1}")
    j = pivot(k1)
    if method == "A":
        gates: list[Gate] = [("H", 1)]
        gates += [("CNOT", 1, 1 + i) for i in k1.support()]
        gates.append(("CNOT", 1 + j, 1))
        return k1.n + 1, gates
    if method == "B":
        gates = [("H", j)]
        gates += [("CNOT", j, i) for i in k1.support() if i != j]
        return k1.n, gates
    raise ParameterError(f"unknown preparation method {method!r}")


def run_circuit(n: int, gates: list[Gate]) -> DenseState:
    check_capacity(n)
    psi = DenseState.basis(BitVec.zeros(n))
    for gate in gates:
        if gate[0] == "H":
            psi = apply_hadamard_mask(psi, BitVec.unit(n, gate[1]))
        elif gate[0] == "CNOT":
            psi = apply_cnot(psi, gate[1], gate[2])
        else:
            raise ParameterError(f"unknown gate {gate!r}")
    return psi


def prepare_base_state(k1: BitVec, method: Literal["A", "B"] = "B") -> DenseState:
    qubits, gates = preparation_circuit(k1, method)
    psi = run_circuit(qubits, gates)
    if method == "B":
        return psi
    half = 1 << k1.n
    leaked = float(np.sum(np.abs(psi.amps[half:]) ** 2))
    if leaked > 1e-12:
        raise RuntimeError(f"ancilla not returned to |0> (weight {leaked:.3e})")
    return DenseState(k1.n, psi.amps[:half].copy())


def encrypt(pk: PublicKey, bit: int, registry: KeyRegistry) -> Ciphertext:
    if bit not in (0, 1):
        raise ParameterError(f"plaintext must be a bit, got {bit!r}")
    registry.consume(pk.key_id)
    state = sym_apply_y_all(pk.state) if bit else pk.state
    return Ciphertext(pk.tag, state, pk.key_id)


def classify_bare(bare: TwoBranchState, k1: BitVec) -> int:
    """Read the bit off an undressed state.

    ``|0> + |k1>`` means 0, ``|1^n> - |~k1>`` means 1 (global phase ignored;
    branch order may be either way round).
    """
    n = bare.n
    pairs = {(bare.u, bare.v): bare.rel, (bare.v, bare.u): (-bare.rel) % 4}
    zero, ones = BitVec.zeros(n), BitVec.ones(n)
    if pairs.get((zero, k1)) == 0:
        return 0
    if pairs.get((ones, k1.complement())) == 2:
        return 1
    raise KeyMismatchError("undressed state has neither expected form")


def decrypt(sk: PrivateKey, ct: Ciphertext) -> int:
    if ct.state.n != sk.n or any(s.n != sk.m for s in ct.tag):
        raise KeyMismatchError("dimensions differ from the private key")
    k1, k2, k3 = sk.derive(ct.tag)
    bare = sym_undo_dressing(ct.state, k2, k3)
    return classify_bare(bare, k1)


def disentangle_and_measure(psi: DenseState, k1: BitVec) -> tuple[float, float]:
    """Pivot-CNOT fan-out on the support of ``k1`` then a +/- measurement at the pivot."""
    j = pivot(k1)
    for i in k1.support():
        if i != j:
            psi = apply_cnot(psi, j, i)
    res = measure_pm(psi, j)
    return res.prob_plus, res.prob_minus


def decrypt_dense(sk: PrivateKey, ct_dense: DenseState, tag: Tag) -> tuple[int, float]:
    """Honest quantum decryption on amplitudes.

    Undo the dressing with ``H^{k2} Y^{k3}`` (Y first), disentangle onto the
    pivot qubit, and measure it in the +/- basis: + decodes to 0, - to 1.

    Returns:
        The more likely bit and its probability.
    """
    check_capacity(ct_dense.n)
    k1, k2, k3 = sk.derive(tag)
    psi = apply_pauli_mask(ct_dense, "Y", k3)
    psi = apply_hadamard_mask(psi, k2)
    p_plus, p_minus = disentangle_and_measure(psi, k1)
    return (0, p_plus) if p_plus >= p_minus else (1, p_minus)


def ciphertext_dense(ct: Ciphertext) -> DenseState:
    return expand(ct.state)
