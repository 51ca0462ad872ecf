"""Numerical checks of the scheme's security identities.

The key-ensemble mixtures are summed exactly (see :mod:`bitqpke.qsim.exact`),
so full enumerations land on ``I / 2**n`` with zero deviation and the
distances between them are limited only by the eigensolver.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Literal, Sequence

import numpy as np

from .errors import CapacityError, ParameterError
from .gf2 import BitVec, odd_weight_vectors
from .qsim import (
    DENSE_LIMIT,
    DensityMatrix,
    ExactMixture,
    ExactVector,
    exact_from_two_branch,
    sym_apply_y_all,
    trace_distance,
)
from .qsim.sampling import random_density_matrix
from .scheme import public_key_state

Domain = Literal["omega", "nonzero", "all"]

ENSEMBLE_LIMIT = DENSE_LIMIT - 6

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_I = np.eye(2, dtype=complex)


def k1_domain(n: int, domain: Domain) -> list[BitVec]:
    if domain == "omega":
        return odd_weight_vectors(n)
    if domain == "nonzero":
        return [BitVec(n, v) for v in range(1, 1 << n)]
    if domain == "all":
        return [BitVec(n, v) for v in range(1 << n)]
    raise ParameterError(f"unknown k1 domain {domain!r}")


def ensemble_keys(n: int, domain: Domain = "omega") -> list[tuple[BitVec, BitVec, BitVec]]:
    full = [BitVec(n, v) for v in range(1 << n)]
    return list(product(k1_domain(n, domain), full, full))


def ciphertext_vector(k1: BitVec, k2: BitVec, k3: BitVec, bit: int) -> ExactVector:
    """Exact amplitudes of the ciphertext for one key.

    ``k1 = 0`` (only in the ``"all"`` domain) has no two-branch form; its
    inner state is taken as the normalized ``|0...0>``.
    """
    if k1.is_zero():
        vec = ExactVector.basis(k1).apply_h(k2).apply_y(k3)
        return vec.apply_y(BitVec.ones(k1.n)) if bit else vec
    state = public_key_state(k1, k2, k3)
    return exact_from_two_branch(sym_apply_y_all(state) if bit else state)


def _partial_mixture(n: int, bit: int, keys) -> ExactMixture:
    acc = ExactMixture(n)
    for start in range(0, len(keys), 1024):
        acc.add_batch([ciphertext_vector(*key, bit) for key in keys[start:start + 1024]])
    return acc


def mixture_over_keys(n: int, bit: int, keys: Sequence[tuple[BitVec, BitVec, BitVec]],
                      workers: int = 1) -> DensityMatrix:
    """Uniform mixture of ciphertext states over an explicit key list.

    With ``workers > 1`` the list is cut into contiguous partitions that are
    summed in a thread pool and then merged; the integer accumulation makes
    the result identical to the sequential sum.
    """
    if bit not in (0, 1):
        raise ParameterError("bit must be 0 or 1")
    if not keys:
        raise ParameterError("empty key list")
    keys = list(keys)
    if workers <= 1:
        acc = _partial_mixture(n, bit, keys)
    else:
        step = -(-len(keys) // workers)
        parts = [keys[i:i + step] for i in range(0, len(keys), step)]
        with ThreadPoolExecutor(workers) as pool:
            partials = list(pool.map(lambda ks: _partial_mixture(n, bit, ks), parts))
        acc = partials[0]
        for p in partials[1:]:
            acc = acc.merge(p)
    return DensityMatrix(n, acc.to_matrix())


def ensemble_mixture(n: int, bit: int, domain: Domain = "omega", order=None,
                     workers: int = 1) -> DensityMatrix:
    """Average ciphertext state over every ``k1`` in ``domain`` and all ``k2, k3``."""
    if n > ENSEMBLE_LIMIT:
        raise CapacityError(f"full enumeration at n={n} exceeds the limit of {ENSEMBLE_LIMIT}")
    keys = ensemble_keys(n, domain)
    if order is not None:
        keys = [keys[i] for i in order]
    return mixture_over_keys(n, bit, keys, workers)


@lru_cache(maxsize=8)
def dressing_unitaries(n: int) -> np.ndarray:
    """All ``Y^alpha H^beta``, shape ``(2**n, 2**n, N, N)`` indexed ``[alpha, beta]``."""
    dim = 1 << n
    out = np.empty((dim, dim, dim, dim), dtype=complex)
    for a in range(dim):
        for b in range(dim):
            u = np.ones((1, 1), dtype=complex)
            for q in range(n):
                shift = n - 1 - q
                y = _Y if (a >> shift) & 1 else _I
                h = _H if (b >> shift) & 1 else _I
                u = np.kron(u, y @ h)
            out[a, b] = u
    return out


def perfect_encryption_transform(rho: DensityMatrix) -> DensityMatrix:
    """``2**(-2n) sum_{alpha, beta} Y^alpha H^beta rho H^beta Y^alpha``."""
    n = rho.n
    if n > DENSE_LIMIT // 2:
        raise CapacityError(f"2^(2n) enumeration at n={n} exceeds the limit")
    units = dressing_unitaries(n)
    dim = 1 << n
    acc = np.zeros((dim, dim), dtype=complex)
    for a in range(dim):
        u = units[a]
        acc += np.sum(u @ rho.data @ np.conj(np.swapaxes(u, -1, -2)), axis=0)
    return DensityMatrix(n, acc / dim**2)


def check_maximally_mixed(rho: DensityMatrix, tol: float = 1e-10) -> tuple[bool, float]:
    dev = float(np.max(np.abs(rho.data - DensityMatrix.maximally_mixed(rho.n).data)))
    return dev < tol, dev


def proposition1_distance(n: int, domain: Domain = "omega") -> float:
    """Distance between the key-averaged ciphertexts of 0 and of 1."""
    return trace_distance(ensemble_mixture(n, 0, domain), ensemble_mixture(n, 1, domain))


def proposition2_distance(n: int, bit: int, domain: Domain = "omega") -> float:
    """Distance between two independently enumerated full ensembles for one bit.

    The second ensemble walks the keys in reverse order.
    """
    keys = ensemble_keys(n, domain)
    first = ensemble_mixture(n, bit, domain)
    second = ensemble_mixture(n, bit, domain, order=range(len(keys) - 1, -1, -1))
    return trace_distance(first, second)


def _random_keys(n: int, count: int, rng) -> list[tuple[BitVec, BitVec, BitVec]]:
    omega = odd_weight_vectors(n)
    return [(omega[int(rng.integers(len(omega)))], BitVec.random(n, rng), BitVec.random(n, rng))
            for _ in range(count)]


def sampled_proposition1_distance(n: int, samples: int, rng) -> float:
    """Both bits encrypted under the same ``samples`` random keys."""
    keys = _random_keys(n, samples, rng)
    return trace_distance(mixture_over_keys(n, 0, keys), mixture_over_keys(n, 1, keys))


def sampled_proposition2_distance(n: int, bit: int, samples: int, rng) -> float:
    """Two disjoint ``samples``-key subsets of the full ensemble, same bit."""
    keys = ensemble_keys(n)
    if 2 * samples > len(keys):
        raise ParameterError(f"cannot draw two disjoint {samples}-key samples from {len(keys)} keys")
    pick = rng.choice(len(keys), size=2 * samples, replace=False)
    first = [keys[i] for i in pick[:samples]]
    second = [keys[i] for i in pick[samples:]]
    return trace_distance(mixture_over_keys(n, bit, first), mixture_over_keys(n, bit, second))


def convergence_study(distance_fn, sizes: Sequence[int], repeats: int, rng) -> list[float]:
    """Mean of ``distance_fn(size, rng)`` over ``repeats`` draws per size."""
    return [float(np.mean([distance_fn(size, rng) for _ in range(repeats)])) for size in sizes]


@dataclass(frozen=True)
class Claim:
    claim_id: str
    value: float
    tol: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"CLAIM id={self.claim_id} value={self.value:.6e} tol={self.tol:.1e} status={status}"


def format_report(claims: Sequence[Claim]) -> str:
    lines = [c.line() for c in claims]
    width = max(len(c.claim_id) for c in claims)
    lines.append("")
    lines.append(f"{'claim':<{width}}  {'value':>14}  {'tol':>8}  result  detail")
    for c in claims:
        lines.append(f"{c.claim_id:<{width}}  {c.value:>14.6e}  {c.tol:>8.1e}  "
                     f"{'pass' if c.passed else 'FAIL':<6}  {c.detail}")
    return "\n".join(lines)


def verify_perfect_encryption(n: int, samples: int, rng, tol: float = 1e-10) -> list[Claim]:
    claims = []
    for idx in range(samples):
        rank = 1 if idx % 2 == 0 else 4
        rho = random_density_matrix(n, rank, rng)
        ok, dev = check_maximally_mixed(perfect_encryption_transform(rho), tol)
        kind = "pure" if rank == 1 else "mixed"
        claims.append(Claim(f"perfect-encryption/n={n}/{idx}", dev, tol, ok, kind))
    return claims


def verify_mixture(n: int, tol: float = 1e-10) -> list[Claim]:
    claims = []
    for domain in ("omega", "all"):
        for bit in (0, 1):
            ok, dev = check_maximally_mixed(ensemble_mixture(n, bit, domain), tol)
            claims.append(Claim(f"mixture/n={n}/bit={bit}/{domain}", dev, tol, ok))
    return claims


def verify_prop1(n: int, tol: float = 1e-10) -> list[Claim]:
    d = proposition1_distance(n)
    return [Claim(f"prop1/n={n}", d, tol, d < tol, "D(rho0, rho1)")]


def verify_prop2(n: int, tol: float = 1e-10) -> list[Claim]:
    claims = []
    for bit in (0, 1):
        d = proposition2_distance(n, bit)
        claims.append(Claim(f"prop2/n={n}/bit={bit}", d, tol, d < tol, "D(sigma_b, sigma_b')"))
    return claims
