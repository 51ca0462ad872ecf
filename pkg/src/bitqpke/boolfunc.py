"""Boolean-function private keys as XORs of AND-monomials.

A monomial with mask ``a`` evaluates to ``prod_b (s_b a_b + a_b + 1)`` over
GF(2); with ``x^0 = 1`` this is the AND of the selected input bits, and the
empty mask is the constant 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import DimensionError, ParameterError
from .gf2 import BitVec


@dataclass(frozen=True, slots=True)
class Monomial:
    mask: BitVec

    def __call__(self, s: BitVec) -> int:
        return eval_monomial(self, s)


def eval_monomial(t: Monomial, s: BitVec) -> int:
    if t.mask.n != s.n:
        raise DimensionError(f"monomial over {t.mask.n} inputs applied to {s.n} bits")
    return int(s.value & t.mask.value == t.mask.value)


@dataclass(frozen=True)
class BooleanFunction:
    """An m-input, n-output function; output j is the XOR of ``outputs[j]``."""

    m: int
    n: int
    p: int
    outputs: tuple[tuple[Monomial, ...], ...]

    def __post_init__(self) -> None:
        if min(self.m, self.n, self.p) < 1:
            raise ParameterError("m, n and p must all be >= 1")
        if len(self.outputs) != self.n:
            raise DimensionError(f"expected {self.n} output lists, got {len(self.outputs)}")
        for terms in self.outputs:
            if len(terms) != self.p:
                raise DimensionError(f"expected {self.p} terms per output, got {len(terms)}")
            for t in terms:
                if t.mask.n != self.m:
                    raise DimensionError(f"monomial mask length {t.mask.n} != m={self.m}")

    def __call__(self, s: BitVec) -> BitVec:
        return eval_boolean_function(self, s)

    def dumps(self) -> str:
        lines = [f"{self.m} {self.n} {self.p}"]
        lines += [" ".join(str(t.mask) for t in terms) for terms in self.outputs]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> BooleanFunction:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        return cls._parse(lines)

    @classmethod
    def _parse(cls, lines: list[str]) -> BooleanFunction:
        try:
            m, n, p = (int(x) for x in lines[0].split())
        except (ValueError, IndexError) as exc:
            raise ParameterError(f"bad BooleanFunction header: {lines[:1]!r}") from exc
        if len(lines) < n + 1:
            raise ParameterError(f"expected {n} output lines, got {len(lines) - 1}")
        outputs = tuple(
            tuple(Monomial(BitVec.from_str(tok)) for tok in lines[1 + j].split())
            for j in range(n)
        )
        return cls(m, n, p, outputs)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path: str | Path) -> BooleanFunction:
        return cls.loads(Path(path).read_text())


def coin_flip_count(m: int, n: int, p: int) -> int:
    return m * n * p


def sample_boolean_function(m: int, n: int, p: int, rng) -> BooleanFunction:
    """Draw every coefficient as an independent fair coin flip.

    Exactly ``n * p * m`` flips are taken from ``rng`` (a numpy Generator) in
    one call, consumed output-major, then term, then variable, so a seed
    reproduces the key bit for bit.
    """
    if min(m, n, p) < 1:
        raise ParameterError(f"m, n, p must be >= 1 (got {m}, {n}, {p})")
    flips = rng.integers(0, 2, size=(n, p, m), dtype=int)
    outputs = tuple(
        tuple(Monomial(BitVec.from_bits(int(b) for b in flips[j, a])) for a in range(p))
        for j in range(n)
    )
    return BooleanFunction(m, n, p, outputs)


def eval_boolean_function(F: BooleanFunction, s: BitVec) -> BitVec:
    if s.n != F.m:
        raise DimensionError(f"function takes {F.m} input bits, got {s.n}")
    value = 0
    sv = s.value
    for terms in F.outputs:
        bit = 0
        for t in terms:
            mv = t.mask.value
            bit ^= (sv & mv) == mv
        value = (value << 1) | bit
    return BitVec(F.n, value)
