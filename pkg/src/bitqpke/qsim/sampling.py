"""Random states for property checks."""

from __future__ import annotations

import numpy as np

from .dense import DenseState, DensityMatrix


def random_pure_state(n: int, rng) -> DenseState:
    z = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return DenseState(n, z / np.linalg.norm(z))


def random_density_matrix(n: int, rank: int, rng) -> DensityMatrix:
    """Random convex combination of ``rank`` Haar-like pure states."""
    weights = rng.dirichlet(np.ones(rank)) if rank > 1 else np.ones(1)
    data = np.zeros((1 << n, 1 << n), dtype=complex)
    for w in weights:
        psi = random_pure_state(n, rng).amps
        data += w * np.outer(psi, psi.conj())
    return DensityMatrix(n, data)
