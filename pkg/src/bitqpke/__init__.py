"""Bit-oriented quantum public-key encryption: simulation, verification, attacks."""

from .boolfunc import BooleanFunction, Monomial, eval_boolean_function, eval_monomial, sample_boolean_function
from .gf2 import BitVec, Gf2Solution, Gf2System, gf2_dot, gf2_nullspace, gf2_rank, gf2_solve, hamming_weight
from .registry import KeyRegistry
from .scheme import (
    Ciphertext,
    PrivateKey,
    PublicKey,
    decrypt,
    decrypt_dense,
    encrypt,
    issue_public_key,
    keygen,
    prepare_base_state,
)

__all__ = [
    "BooleanFunction",
    "Monomial",
    "eval_boolean_function",
    "eval_monomial",
    "sample_boolean_function",
    "BitVec",
    "Gf2Solution",
    "Gf2System",
    "gf2_dot",
    "gf2_nullspace",
    "gf2_rank",
    "gf2_solve",
    "hamming_weight",
    "KeyRegistry",
    "Ciphertext",
    "PrivateKey",
    "PublicKey",
    "decrypt",
    "decrypt_dense",
    "encrypt",
    "issue_public_key",
    "keygen",
    "prepare_base_state",
]

__version__ = "0.1.0"
