"""Bit vectors and dense GF(2) linear algebra.

Bit position 1 is the leftmost, most significant bit: ``BitVec.from_str("0111")``
has positions 2, 3 and 4 set and integer value 7.  Rows of a GF(2) system are
stored as Python ints so XOR row operations stay cheap for a few thousand
columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DimensionError, ParameterError


@dataclass(frozen=True, slots=True)
class BitVec:
    """Fixed-length bit string over GF(2).

    Attributes:
        n: number of bits (>= 1).
        value: integer whose big-endian binary expansion, padded to ``n``
            digits, gives the bits left to right.
    """

    n: int
    value: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError(f"BitVec length must be >= 1, got {self.n}")
        if not 0 <= self.value < (1 << self.n):
            raise ParameterError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def zeros(cls, n: int) -> BitVec:
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> BitVec:
        return cls(n, (1 << n) - 1)

    @classmethod
    def from_str(cls, text: str) -> BitVec:
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ParameterError(f"not a bit string: {text!r}")
        return cls(len(text), int(text, 2))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVec:
        bits = list(bits)
        value = 0
        for b in bits:
            if b not in (0, 1):
                raise ParameterError(f"bit must be 0 or 1, got {b!r}")
            value = (value << 1) | b
        return cls(len(bits), value)

    @classmethod
    def unit(cls, n: int, position: int) -> BitVec:
        """Vector with a single 1 at ``position`` (1-based)."""
        return cls(n, 1 << (n - position))

    @classmethod
    def random(cls, n: int, rng) -> BitVec:
        """Uniform draw from a numpy Generator."""
        if n <= 62:
            return cls(n, int(rng.integers(0, 1 << n)))
        return cls.from_bits(int(b) for b in rng.integers(0, 2, size=n))

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b")

    def __repr__(self) -> str:
        return f"BitVec('{self}')"

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[int]:
        for pos in range(1, self.n + 1):
            yield self.bit(pos)

    def bit(self, position: int) -> int:
        """Bit at 1-based ``position`` (1 = leftmost)."""
        if not 1 <= position <= self.n:
            raise IndexError(f"bit position {position} outside 1..{self.n}")
        return (self.value >> (self.n - position)) & 1

    def support(self) -> list[int]:
        """1-based positions holding a 1, ascending."""
        return [pos for pos in range(1, self.n + 1) if self.bit(pos)]

    def _check(self, other: BitVec) -> None:
        if self.n != other.n:
            raise DimensionError(f"length mismatch: {self.n} vs {other.n}")

    def __xor__(self, other: BitVec) -> BitVec:
        self._check(other)
        return BitVec(self.n, self.value ^ other.value)

    def __and__(self, other: BitVec) -> BitVec:
        self._check(other)
        return BitVec(self.n, self.value & other.value)

    def complement(self) -> BitVec:
        return BitVec(self.n, self.value ^ ((1 << self.n) - 1))

    def __invert__(self) -> BitVec:
        return self.complement()

    def weight(self) -> int:
        return self.value.bit_count()

    def is_zero(self) -> bool:
        return self.value == 0


def hamming_weight(v: BitVec) -> int:
    """Number of 1 bits.  Odd result means ``v`` is in Omega_n, even means Pi_n."""
    return v.weight()


def is_odd_weight(v: BitVec) -> bool:
    return v.weight() & 1 == 1


def gf2_dot(u: BitVec, v: BitVec) -> int:
    if u.n != v.n:
        raise DimensionError(f"length mismatch: {u.n} vs {v.n}")
    return (u.value & v.value).bit_count() & 1


def all_vectors(n: int) -> Iterator[BitVec]:
    for value in range(1 << n):
        yield BitVec(n, value)


def odd_weight_vectors(n: int) -> list[BitVec]:
    """Omega_n in ascending integer order."""
    return [v for v in all_vectors(n) if v.weight() & 1]


@dataclass(frozen=True)
class Gf2System:
    """Linear system ``rows . x = rhs`` over GF(2); ``rhs=None`` means homogeneous."""

    rows: tuple[BitVec, ...]
    ncols: int
    rhs: tuple[int, ...] | None = None

    def __init__(self, rows: Sequence[BitVec], ncols: int | None = None,
                 rhs: Sequence[int] | BitVec | None = None):
        rows = tuple(rows)
        if ncols is None:
            if not rows:
                raise ParameterError("ncols is required for an empty system")
            ncols = rows[0].n
        for r in rows:
            if r.n != ncols:
                raise DimensionError(f"row length {r.n} != {ncols}")
        if rhs is not None:
            rhs = tuple(rhs)
            if len(rhs) != len(rows):
                raise DimensionError(f"rhs has {len(rhs)} entries for {len(rows)} rows")
            if any(b not in (0, 1) for b in rhs):
                raise ParameterError("rhs entries must be bits")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rhs", rhs)


@dataclass(frozen=True)
class Gf2Solution:
    particular: BitVec
    basis: list[BitVec]


def _rref(rows: list[int], ncols: int, rhs: list[int] | None = None):
    """Reduced row echelon form with leftmost-column pivots chosen first.

    Works on int-encoded rows (column 1 = most significant bit).  Returns the
    reduced rows, their rhs bits, and the pivot columns (1-based, ascending).
    """
    rows = list(rows)
    rhs = list(rhs) if rhs is not None else [0] * len(rows)
    pivots: list[int] = []
    r = 0
    for col in range(1, ncols + 1):
        bit = 1 << (ncols - col)
        found = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if found is None:
            continue
        rows[r], rows[found] = rows[found], rows[r]
        rhs[r], rhs[found] = rhs[found], rhs[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
                rhs[i] ^= rhs[r]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, rhs, pivots


def gf2_rank(rows: Sequence[BitVec], ncols: int | None = None) -> int:
    sys = Gf2System(rows, ncols)
    _, _, pivots = _rref([row.value for row in sys.rows], sys.ncols)
    return len(pivots)


def _basis_from_rref(rows: list[int], pivots: list[int], ncols: int) -> list[BitVec]:
    pivot_set = set(pivots)
    basis = []
    for free in range(1, ncols + 1):
        if free in pivot_set:
            continue
        value = 1 << (ncols - free)
        free_bit = value
        for row, pcol in zip(rows, pivots):
            if row & free_bit:
                value |= 1 << (ncols - pcol)
        basis.append(BitVec(ncols, value))
    return basis


def gf2_nullspace(sys: Gf2System) -> list[BitVec]:
    """Basis of ``{x : row . x = 0 for all rows}``.

    One basis vector per free column, in ascending free-column order; each has
    a 1 at its free column and zeros at the other free columns.
    """
    if sys.rhs is not None and any(sys.rhs):
        raise ParameterError("gf2_nullspace requires a homogeneous system")
    rows, _, pivots = _rref([r.value for r in sys.rows], sys.ncols)
    return _basis_from_rref(rows, pivots, sys.ncols)


def gf2_solve(sys: Gf2System) -> Gf2Solution | None:
    """Particular solution (free variables set to 0) plus nullspace basis.

    Returns None when the system is inconsistent.
    """
    if sys.rhs is None:
        raise ParameterError("gf2_solve requires a right-hand side")
    rows, rhs, pivots = _rref([r.value for r in sys.rows], sys.ncols, list(sys.rhs))
    rank = len(pivots)
    if any(rhs[rank:]):
        return None
    value = 0
    for row_rhs, pcol in zip(rhs, pivots):
        if row_rhs:
            value |= 1 << (sys.ncols - pcol)
    return Gf2Solution(BitVec(sys.ncols, value), _basis_from_rref(rows, pivots, sys.ncols))
