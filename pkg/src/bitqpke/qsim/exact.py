"""Gaussian-integer amplitudes for exact ensemble sums.

Every protocol state is ``g / sqrt(2)**half`` with ``g`` a vector of Gaussian
integers, so ``|psi><psi| = g g^H / 2**half`` and a uniform mixture of such
terms can be accumulated in int64 with no round-off.  The float conversion
happens once, at the end, which makes the result independent of the order in
which terms are added.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError
from ..gf2 import BitVec
from .symbolic import TwoBranchState


@dataclass(frozen=True, eq=False)
class ExactVector:
    n: int
    re: np.ndarray
    im: np.ndarray
    half: int

    @classmethod
    def basis(cls, bits: BitVec) -> ExactVector:
        re = np.zeros(1 << bits.n, dtype=np.int64)
        re[bits.value] = 1
        return cls(bits.n, re, np.zeros_like(re), 0)

    def times_i(self, t: int) -> ExactVector:
        re, im = self.re, self.im
        for _ in range(t % 4):
            re, im = -im, re
        return ExactVector(self.n, re, im, self.half)

    def apply_h(self, mask: BitVec) -> ExactVector:
        """Unnormalized Hadamard butterflies; each adds 1 to ``half``."""
        if mask.n != self.n:
            raise DimensionError("mask length mismatch")
        shape = (2,) * self.n
        re, im = self.re.reshape(shape), self.im.reshape(shape)
        for q in mask.support():
            ax = q - 1
            r0, r1 = np.take(re, 0, axis=ax), np.take(re, 1, axis=ax)
            i0, i1 = np.take(im, 0, axis=ax), np.take(im, 1, axis=ax)
            re = np.stack((r0 + r1, r0 - r1), axis=ax)
            im = np.stack((i0 + i1, i0 - i1), axis=ax)
        return ExactVector(self.n, re.reshape(-1), im.reshape(-1), self.half + mask.weight())

    def apply_y(self, mask: BitVec) -> ExactVector:
        if mask.n != self.n:
            raise DimensionError("mask length mismatch")
        m = mask.value
        idx = np.arange(1 << self.n)
        src = idx ^ m
        sign = 1 - 2 * (np.bitwise_count(src & m) & 1).astype(np.int64)
        out = ExactVector(self.n, sign * self.re[src], sign * self.im[src], self.half)
        return out.times_i(mask.weight())

    def kron(self, other: ExactVector) -> ExactVector:
        re = np.kron(self.re, other.re) - np.kron(self.im, other.im)
        im = np.kron(self.re, other.im) + np.kron(self.im, other.re)
        return ExactVector(self.n + other.n, re, im, self.half + other.half)

    def to_complex(self) -> np.ndarray:
        return (self.re + 1j * self.im) / np.sqrt(2.0) ** self.half


def exact_from_two_branch(s: TwoBranchState) -> ExactVector:
    re = np.zeros(1 << s.n, dtype=np.int64)
    im = np.zeros_like(re)
    re[s.u.value] = 1
    target = (re, im, re, im)[s.rel]
    target[s.v.value] += -1 if s.rel >= 2 else 1
    vec = ExactVector(s.n, re, im, 1)
    return vec.apply_h(s.h_mask).apply_y(s.y_mask).times_i(s.global_phase)


class ExactMixture:
    """Running integer sum of ``g g^H`` terms, grouped by ``half``."""

    def __init__(self, n: int):
        self.n = n
        self.count = 0
        self._groups: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def add_batch(self, vectors: list[ExactVector]) -> None:
        by_half: dict[int, list[ExactVector]] = {}
        for vec in vectors:
            if vec.n != self.n:
                raise DimensionError("vector size mismatch")
            by_half.setdefault(vec.half, []).append(vec)
        for half, group in by_half.items():
            gr = np.stack([g.re for g in group])
            gi = np.stack([g.im for g in group])
            # (g g^H)_{ab} = g_a conj(g_b), summed over the batch axis
            s_re = gr.T @ gr + gi.T @ gi
            s_im = gi.T @ gr - gr.T @ gi
            if half in self._groups:
                a_re, a_im = self._groups[half]
                s_re, s_im = a_re + s_re, a_im + s_im
            self._groups[half] = (s_re, s_im)
        self.count += len(vectors)

    def merge(self, other: ExactMixture) -> ExactMixture:
        if other.n != self.n:
            raise DimensionError("cannot merge mixtures of different sizes")
        out = ExactMixture(self.n)
        out.count = self.count + other.count
        for half in set(self._groups) | set(other._groups):
            parts = [g[half] for g in (self._groups, other._groups) if half in g]
            out._groups[half] = (sum(p[0] for p in parts), sum(p[1] for p in parts))
        return out

    def integer_total(self) -> tuple[np.ndarray, np.ndarray, int]:
        """``(re, im, top)`` with the mixture equal to ``(re + i im) / (count * 2**top)``."""
        dim = 1 << self.n
        top = max(self._groups, default=0)
        re = np.zeros((dim, dim), dtype=np.int64)
        im = np.zeros((dim, dim), dtype=np.int64)
        for half, (s_re, s_im) in self._groups.items():
            scale = 1 << (top - half)
            re += scale * s_re
            im += scale * s_im
        return re, im, top

    def to_matrix(self) -> np.ndarray:
        re, im, top = self.integer_total()
        denom = float(self.count) * float(1 << top)
        return re / denom + 1j * (im / denom)
