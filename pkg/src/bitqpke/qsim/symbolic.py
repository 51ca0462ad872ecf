"""Exact symbolic two-branch states.

Every state the protocols produce has the form

    i^global * Y^{y_mask} H^{h_mask} (|u> + i^rel |v>) / sqrt(2)

with distinct branch labels ``u != v``.  Phases are stored as exponents of
``i`` mod 4.  Hadamard dressing is never expanded here; it stays a mask.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from ..errors import DimensionError, KeyMismatchError, ParameterError
from ..gf2 import BitVec

PHASES = (1, 1j, -1, -1j)


def phase_value(t: int) -> complex:
    """The scalar ``i**t`` without floating round-off."""
    return PHASES[t % 4]


@dataclass(frozen=True)
class TwoBranchState:
    n: int
    u: BitVec
    v: BitVec
    rel: int = 0
    global_phase: int = 0
    h_mask: BitVec | None = None
    y_mask: BitVec | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError("n must be >= 1")
        zero = BitVec.zeros(self.n)
        if self.h_mask is None:
            object.__setattr__(self, "h_mask", zero)
        if self.y_mask is None:
            object.__setattr__(self, "y_mask", zero)
        for name in ("u", "v", "h_mask", "y_mask"):
            if getattr(self, name).n != self.n:
                raise DimensionError(f"{name} has length {getattr(self, name).n}, expected {self.n}")
        if self.u == self.v:
            raise ParameterError("two-branch state needs distinct branches u != v")
        object.__setattr__(self, "rel", self.rel % 4)
        object.__setattr__(self, "global_phase", self.global_phase % 4)

    @property
    def undressed(self) -> bool:
        return self.h_mask.is_zero() and self.y_mask.is_zero()

    def dumps(self) -> str:
        return (f"n={self.n} u={self.u} v={self.v} rel={self.rel} "
                f"global={self.global_phase} h={self.h_mask} y={self.y_mask}")

    _LINE = re.compile(
        r"^n=(\d+) u=([01]+) v=([01]+) rel=([0-3]) global=([0-3]) h=([01]+) y=([01]+)$")

    @classmethod
    def loads(cls, line: str) -> TwoBranchState:
        match = cls._LINE.match(line.strip())
        if match is None:
            raise ParameterError(f"malformed state line: {line!r}")
        n, u, v, rel, glob, h, y = match.groups()
        n = int(n)
        fields = [BitVec.from_str(b) for b in (u, v, h, y)]
        if any(f.n != n for f in fields):
            raise DimensionError(f"bit-string lengths disagree with n={n}")
        return cls(n, fields[0], fields[1], int(rel), int(glob), fields[2], fields[3])


def sym_apply_y_all(s: TwoBranchState) -> TwoBranchState:
    """Y on every qubit; Y^{y} becomes Y^{y xor 1^n} since Y*Y = I."""
    return replace(s, y_mask=s.y_mask ^ BitVec.ones(s.n))


def _y_all_on_branches(s: TwoBranchState) -> tuple[BitVec, BitVec, int, int]:
    # Y^{(x)n}|x> = i^n (-1)^{wt x} |~x>
    wu, wv = s.u.weight(), s.v.weight()
    rel = s.rel + 2 * (wu + wv)
    glob = s.global_phase + s.n + 2 * wu
    return s.u.complement(), s.v.complement(), rel, glob


def sym_apply_z_all(s: TwoBranchState) -> TwoBranchState:
    """Z on every qubit of an undressed state."""
    if not s.undressed:
        raise ParameterError("Z^n is only tracked symbolically on undressed states")
    wu, wv = s.u.weight(), s.v.weight()
    return replace(s, rel=s.rel + 2 * (wu + wv), global_phase=s.global_phase + 2 * wu)


def sym_apply_x(s: TwoBranchState, mask: BitVec) -> TwoBranchState:
    """X on the qubits selected by ``mask`` of an undressed state."""
    if not s.undressed:
        raise ParameterError("X masks are only tracked symbolically on undressed states")
    return replace(s, u=s.u ^ mask, v=s.v ^ mask)


def sym_apply_cnot(s: TwoBranchState, control: int, target: int) -> TwoBranchState:
    """CNOT on an undressed state: a permutation of basis labels."""
    if not s.undressed:
        raise ParameterError("CNOT is only tracked symbolically on undressed states")
    if control == target:
        raise ParameterError("control and target must differ")
    flip = BitVec.unit(s.n, target)
    u = s.u ^ flip if s.u.bit(control) else s.u
    v = s.v ^ flip if s.v.bit(control) else s.v
    return replace(s, u=u, v=v)


def sym_undo_dressing(s: TwoBranchState, k2: BitVec, k3: BitVec) -> TwoBranchState:
    """Apply ``(Y^{k3} H^{k2})^dagger = H^{k2} Y^{k3}`` and return the bare state.

    The ciphertext is ``Y^{y} H^{k2} psi``.  ``Y^{k3} Y^{y} = Y^{d}`` with
    ``d = y xor k3``; only ``d = 0`` or ``d = 1^n`` are legal.  For ``d = 1^n``,
    ``H^{k2} Y^{(x)n} H^{k2} = (-1)^{wt k2} Y^{(x)n}`` because ``HYH = -Y``.
    """
    if k2.n != s.n or k3.n != s.n:
        raise DimensionError("key masks must match the state length")
    if s.h_mask != k2:
        raise KeyMismatchError("Hadamard mask differs from k2")
    d = s.y_mask ^ k3
    bare = replace(s, h_mask=BitVec.zeros(s.n), y_mask=BitVec.zeros(s.n))
    if d.is_zero():
        return bare
    if d != BitVec.ones(s.n):
        raise KeyMismatchError("Y mask is neither k3 nor k3 xor 1^n")
    u, v, rel, glob = _y_all_on_branches(bare)
    return TwoBranchState(s.n, u, v, rel, glob + 2 * k2.weight())
