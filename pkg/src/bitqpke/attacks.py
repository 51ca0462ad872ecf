"""Adversarial procedures against both schemes.

* Hadamard-measurement key recovery: measure ``H^{(x)n}`` applied to copies of
  a public-key state; for ``|i> + |i xor k>`` every outcome ``y`` satisfies
  ``y . k = 0``, so ``n - 1`` independent outcomes pin ``k`` down.
* Boolean-function coefficient recovery from ``(s, F(s))`` pairs.
* The partial-key guessing attack on the earlier scheme.
* Multi-copy mixtures where several ciphertexts share one private key.

Monte Carlo drivers split their trials into fixed chunks, each with its own
stream spawned from the caller's generator, so a seed reproduces the same
numbers however the chunks are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .boolfunc import BooleanFunction
from .errors import CapacityError, DimensionError, InconsistentObservations, ParameterError
from .gf2 import BitVec, Gf2System, gf2_dot, gf2_nullspace, gf2_rank, gf2_solve, odd_weight_vectors
from .py12 import Py12Key, py12_decrypt_dense, py12_dense_ciphertext, py12_issue, sample_py12_key
from .qsim import (
    DENSE_LIMIT,
    DensityMatrix,
    ExactMixture,
    TwoBranchState,
    apply_hadamard_mask,
    check_capacity,
    exact_from_two_branch,
    expand,
    sym_apply_y_all,
    trace_distance,
)
from .scheme import public_key_state

CHUNK = 1000


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _chunk_streams(rng, trials: int) -> list[tuple[np.random.Generator, int]]:
    rng = _as_rng(rng)
    sizes = [min(CHUNK, trials - start) for start in range(0, trials, CHUNK)]
    return list(zip(rng.spawn(len(sizes)), sizes))


# -- Hadamard measurement attack -------------------------------------------

def hadamard_attack_sample(state: TwoBranchState, rng) -> BitVec:
    """Apply H to every qubit of the state and sample one basis outcome."""
    check_capacity(state.n)
    psi = apply_hadamard_mask(expand(state), BitVec.ones(state.n))
    probs = psi.probabilities()
    probs[probs < 1e-20] = 0.0  # exact zeros of the Born rule, up to round-off
    probs /= probs.sum()
    return BitVec(state.n, int(_as_rng(rng).choice(probs.size, p=probs)))


@dataclass(frozen=True)
class KeyRecovery:
    """``k`` is None when the samples do not yet isolate a unique nonzero key."""

    k: BitVec | None
    rank: int

    @property
    def sufficient(self) -> bool:
        return self.k is not None


def recover_k_from_samples(samples: Sequence[BitVec], n: int) -> KeyRecovery:
    for y in samples:
        if y.n != n:
            raise DimensionError(f"sample length {y.n} != {n}")
    system = Gf2System(samples, n)
    basis = gf2_nullspace(system)
    rank = n - len(basis)
    if len(basis) == 1:
        return KeyRecovery(basis[0], rank)
    return KeyRecovery(None, rank)


@dataclass
class AttackTranscript:
    true_k: BitVec
    samples: list[BitVec] = field(default_factory=list)
    ranks: list[int] = field(default_factory=list)
    recovered: BitVec | None = None

    @property
    def success(self) -> bool:
        return self.recovered is not None and self.recovered == self.true_k

    @property
    def orthogonal(self) -> bool:
        """Whether every sample satisfied ``y . k = 0``."""
        return all(gf2_dot(y, self.true_k) == 0 for y in self.samples)


def run_hadamard_attack(next_state: Callable[[], TwoBranchState], true_k: BitVec,
                        rng, max_samples: int = 50) -> AttackTranscript:
    """Sample until the solution space is one-dimensional or full rank is hit."""
    n = true_k.n
    tr = AttackTranscript(true_k)
    for _ in range(max_samples):
        tr.samples.append(hadamard_attack_sample(next_state(), rng))
        rank = gf2_rank(tr.samples, n)
        tr.ranks.append(rank)
        if rank == n - 1:
            tr.recovered = recover_k_from_samples(tr.samples, n).k
            break
        if rank == n:
            break
    return tr


def py12_attack_trial(n: int, rng, max_samples: int = 50, m: int | None = None,
                      p: int | None = None) -> AttackTranscript:
    """One attack on the earlier scheme: fixed ``k = F(s)``, fresh ``i`` per copy."""
    rng = _as_rng(rng)
    key = sample_py12_key(n, m or n, p or n, rng)

    def next_state() -> TwoBranchState:
        return py12_issue(Py12Key(key.F, key.s, key.k, BitVec.random(n, rng)))

    return run_hadamard_attack(next_state, key.k, rng, max_samples)


def newscheme_attack_trial(n: int, rng, max_samples: int = 50) -> AttackTranscript:
    """Same pipeline against copies of one dressed public-key state.

    ``k1`` is uniform over odd-weight strings, ``k2`` and ``k3`` uniform; the
    attacker gets as many identical copies as it asks for.
    """
    rng = _as_rng(rng)
    omega = odd_weight_vectors(n) if n <= 16 else None
    if omega is not None:
        k1 = omega[int(rng.integers(len(omega)))]
    else:
        k1 = BitVec.random(n, rng)
        while not k1.weight() & 1:
            k1 = BitVec.random(n, rng)
    state = public_key_state(k1, BitVec.random(n, rng), BitVec.random(n, rng))
    return run_hadamard_attack(lambda: state, k1, rng, max_samples)


@dataclass(frozen=True)
class AttackSummary:
    trials: int
    successes: int
    all_orthogonal: bool
    transcripts: list[AttackTranscript]

    @property
    def rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


def attack_success_rate(kind: str, n: int, trials: int, rng, max_samples: int = 50) -> AttackSummary:
    """Run ``trials`` independent attacks, each on its own spawned stream."""
    trial_fn = {"py12": py12_attack_trial, "newscheme": newscheme_attack_trial}.get(kind)
    if trial_fn is None:
        raise ParameterError(f"unknown attack target {kind!r}")
    streams = _as_rng(rng).spawn(trials)
    transcripts = [trial_fn(n, s, max_samples) for s in streams]
    return AttackSummary(trials, sum(t.success for t in transcripts),
                         all(t.orthogonal for t in transcripts), transcripts)


# -- Boolean-function recovery ----------------------------------------------

def _submasks(value: int):
    sub = value
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & value


@dataclass(frozen=True)
class RecoveredFunction:
    """ANF coefficients per output: ``anf[j]`` lists the monomial masks present."""

    m: int
    n: int
    anf: tuple[tuple[int, ...], ...]
    underdetermined: bool

    def __call__(self, s: BitVec) -> BitVec:
        if s.n != self.m:
            raise DimensionError(f"expected {self.m} input bits, got {s.n}")
        sv = s.value
        value = 0
        for masks in self.anf:
            bit = 0
            for mv in masks:
                bit ^= (sv & mv) == mv
            value = (value << 1) | bit
        return BitVec(self.n, value)


def monomial_row(s: BitVec) -> BitVec:
    """Coefficient row over all ``2**m`` monomials; column ``c`` is the mask ``c - 1``."""
    ncols = 1 << s.n
    value = 0
    for sub in _submasks(s.value):
        value |= 1 << (ncols - 1 - sub)
    return BitVec(ncols, value)


def recover_boolean_function(pairs: Sequence[tuple[BitVec, BitVec]], m: int, n: int) -> RecoveredFunction:
    """Solve for the ANF of every output bit from observed ``(s, F(s))`` pairs.

    Uses the full monomial basis, so no knowledge of the sparsity ``p`` is
    assumed.  Free coefficients are set to 0.

    Raises:
        InconsistentObservations: some output's equations have no solution.
    """
    if m > 14:
        raise CapacityError(f"m={m} exceeds the 2**14-column solver limit")
    for s, k in pairs:
        if s.n != m or k.n != n:
            raise DimensionError("pair dimensions do not match (m, n)")
    ncols = 1 << m
    rows = [monomial_row(s) for s, _ in pairs]
    anf = []
    under = False
    for j in range(1, n + 1):
        sol = gf2_solve(Gf2System(rows, ncols, [k.bit(j) for _, k in pairs]))
        if sol is None:
            raise InconsistentObservations(f"observations for output {j} contradict each other")
        under = under or bool(sol.basis)
        x = sol.particular
        anf.append(tuple(sorted(c - 1 for c in x.support())))
    return RecoveredFunction(m, n, tuple(anf), under)


def truth_table_pairs(F: BooleanFunction) -> list[tuple[BitVec, BitVec]]:
    return [(BitVec(F.m, v), F(BitVec(F.m, v))) for v in range(1 << F.m)]


# -- Guessing attack ---------------------------------------------------------

def guessing_closed_form(l: int) -> float:
    """Right guess with probability 2^-l, otherwise a fair coin."""
    return 2.0 ** -l + 0.5 * (1 - 2.0 ** -l)


# competing last-bit figure; reports say whether it is reproduced
GUESS_ALT_VALUE = 0.25


@dataclass(frozen=True)
class GuessingEstimate:
    n: int
    l: int
    trials: int
    successes: int
    closed_form: float
    alt_value: float

    @property
    def rate(self) -> float:
        return self.successes / self.trials

    @property
    def half_width(self) -> float:
        """95% normal-approximation binomial half-width."""
        p = self.rate
        return 1.96 * math.sqrt(max(p * (1 - p), 0.0) / self.trials)

    def reproduces(self, tol: float = 0.02) -> str:
        hits = []
        if abs(self.rate - self.closed_form) <= tol:
            hits.append("closed-form")
        if abs(self.rate - self.alt_value) <= tol:
            hits.append("alternative")
        return "+".join(hits) or "neither"


def _guess_chunk(n: int, l: int, rng: np.random.Generator, size: int) -> int:
    omega = odd_weight_vectors(n)
    hidden = (1 << l) - 1  # the last l positions
    wins = 0
    for _ in range(size):
        k = omega[int(rng.integers(len(omega)))]
        key = Py12Key(None, None, k, BitVec.random(n, rng))
        guess = BitVec(n, (k.value & ~hidden) | int(rng.integers(0, 1 << l)))
        bit = int(rng.integers(2))
        psi = py12_dense_ciphertext(key, bit)
        if guess.is_zero():
            decoded = int(rng.integers(2))
        else:
            p_plus, _ = py12_decrypt_dense(guess, key.i, psi)
            decoded = 0 if rng.random() < p_plus else 1
        wins += decoded == bit
    return wins


def guessing_attack_estimate(n: int, l: int, trials: int, rng, workers: int = 1) -> GuessingEstimate:
    """Monte Carlo success rate of decrypting with ``l`` guessed key bits.

    Per trial: ``k`` uniform over odd-weight strings and ``i`` uniform, the
    attacker knows ``i`` and the first ``n - l`` bits of ``k`` and guesses the
    last ``l`` uniformly, then runs the decryption procedure on a fresh
    ciphertext of a random bit with the measurement sampled from the Born rule.
    A guessed all-zero key has no pivot and yields a coin flip.
    """
    if not 1 <= l < n:
        raise ParameterError(f"need 1 <= l < n, got l={l}, n={n}")
    if trials < 1:
        raise ParameterError("trials must be positive")
    check_capacity(n)
    streams = _chunk_streams(rng, trials)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            wins = sum(pool.map(lambda a: _guess_chunk(n, l, *a), streams))
    else:
        wins = sum(_guess_chunk(n, l, s, size) for s, size in streams)
    return GuessingEstimate(n, l, trials, wins, guessing_closed_form(l),
                            GUESS_ALT_VALUE if l == 1 else float("nan"))


# -- Multi-copy mixtures ------------------------------------------------------

def _multi_copy_terms(n: int, pattern: Sequence[int], keys):
    batch = []
    for k1, k2, k3 in keys:
        base = public_key_state(k1, k2, k3)
        flipped = sym_apply_y_all(base)
        copies = [exact_from_two_branch(flipped if b else base) for b in pattern]
        vec = copies[0]
        for c in copies[1:]:
            vec = vec.kron(c)
        batch.append(vec)
    return batch


def key_ensemble(n: int) -> list[tuple[BitVec, BitVec, BitVec]]:
    """All ``(k1, k2, k3)`` with ``k1`` odd weight, in lexicographic order."""
    full = [BitVec(n, v) for v in range(1 << n)]
    return list(product(odd_weight_vectors(n), full, full))


def multi_copy_mixture(n: int, t: int, pattern: Sequence[int], order=None,
                       limit: int | None = None) -> DensityMatrix:
    """Uniform key average of ``(x)_c rho^{pattern[c]}_F`` with one key shared by all copies.

    The sum is accumulated exactly in Gaussian integers, so ``order`` (an
    optional permutation of the key ensemble) cannot change a single bit of
    the result.
    """
    if len(pattern) != t or any(b not in (0, 1) for b in pattern):
        raise ParameterError(f"pattern must be {t} bits")
    if t * n > (DENSE_LIMIT if limit is None else limit):
        raise CapacityError(f"t*n = {t * n} exceeds the dense limit")
    keys = key_ensemble(n)
    if order is not None:
        keys = [keys[i] for i in order]
    acc = ExactMixture(n * t)
    for start in range(0, len(keys), 512):
        acc.add_batch(_multi_copy_terms(n, pattern, keys[start:start + 512]))
    return DensityMatrix(n * t, acc.to_matrix())


def multi_copy_distance(n: int, t: int, pattern_a: Sequence[int], pattern_b: Sequence[int]) -> float:
    return trace_distance(multi_copy_mixture(n, t, pattern_a), multi_copy_mixture(n, t, pattern_b))
