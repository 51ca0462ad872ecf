import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bitqpke.errors import CapacityError, DimensionError, KeyMismatchError, ParameterError
from bitqpke.gf2 import BitVec
from bitqpke.qsim import (
    DensityMatrix,
    DenseState,
    ExactMixture,
    TwoBranchState,
    apply_cnot,
    apply_hadamard_mask,
    apply_pauli_mask,
    density_of,
    exact_from_two_branch,
    expand,
    jacobi_eigh,
    measure_pm,
    mix,
    sym_apply_cnot,
    sym_apply_x,
    sym_apply_y_all,
    sym_apply_z_all,
    sym_undo_dressing,
    trace_distance,
)
from bitqpke.qsim.sampling import random_density_matrix, random_pure_state

from oracles import (
    H, MINUS, PLUS, X, Y, Z, cnot_matrix, ket, mask_operator, trace_distance_numpy, two_branch_oracle,
)

R2 = 1 / np.sqrt(2)


def B(s):
    return BitVec.from_str(s)


def vec(amps):
    amps = np.asarray(amps, dtype=complex)
    return DenseState(int(np.log2(amps.size)), amps)


def random_two_branch(n, rng, dressed=True):
    u = BitVec.random(n, rng)
    v = BitVec.random(n, rng)
    while v == u:
        v = BitVec.random(n, rng)
    zero = BitVec.zeros(n)
    return TwoBranchState(n, u, v, int(rng.integers(4)), int(rng.integers(4)),
                          BitVec.random(n, rng) if dressed else zero,
                          BitVec.random(n, rng) if dressed else zero)


def oracle_of(s):
    return two_branch_oracle(str(s.u), str(s.v), s.rel, s.global_phase, str(s.h_mask), str(s.y_mask))


# -- expand -------------------------------------------------------------------

def test_expand_zero_plus():
    psi = expand(TwoBranchState(2, B("00"), B("01")))
    assert np.allclose(psi.amps, [R2, R2, 0, 0], atol=1e-15)


def test_expand_minus():
    psi = expand(TwoBranchState(1, B("0"), B("1"), rel=2))
    assert np.allclose(psi.amps, MINUS, atol=1e-15)


def test_expand_dressed_matches_gate_sequence():
    s = TwoBranchState(2, B("00"), B("01"), h_mask=B("10"), y_mask=B("01"))
    expected = mask_operator(Y, "01") @ mask_operator(H, "10") @ ((ket("00") + ket("01")) * R2)
    assert np.max(np.abs(expand(s).amps - expected)) < 1e-12


def test_expand_over_capacity():
    big = TwoBranchState(13, BitVec.zeros(13), BitVec.ones(13))
    with pytest.raises(CapacityError):
        expand(big)


def test_expand_matches_oracle_random(rng):
    for _ in range(100):
        s = random_two_branch(int(rng.integers(1, 7)), rng)
        assert np.max(np.abs(expand(s).amps - oracle_of(s))) < 1e-12


def test_exact_vector_matches_dense(rng):
    for _ in range(100):
        s = random_two_branch(int(rng.integers(1, 7)), rng)
        assert np.max(np.abs(exact_from_two_branch(s).to_complex() - expand(s).amps)) < 1e-12


# -- gates ----------------------------------------------------------------------

def test_hadamard_examples():
    zero = DenseState.basis(B("0"))
    plus = apply_hadamard_mask(zero, B("1"))
    assert np.allclose(plus.amps, PLUS)
    assert np.allclose(apply_hadamard_mask(plus, B("1")).amps, ket("0"))
    uni = apply_hadamard_mask(DenseState.basis(B("00")), B("11"))
    assert np.allclose(uni.amps, np.full(4, 0.5))


def test_pauli_examples():
    out = apply_pauli_mask(DenseState.basis(B("0")), "Y", B("1"))
    assert np.allclose(out.amps, [0, 1j])
    psi = vec(np.array([1, 1, 0, 0]) * R2)
    out = apply_pauli_mask(psi, "Y", B("11"))
    # Y|0> = i|1>, Y|1> = -i|0>: the image is exactly (|10> - |11>)/sqrt2
    assert np.allclose(out.amps, mask_operator(Y, "11") @ psi.amps)
    assert np.allclose(out.amps, np.array([0, 0, 1, -1]) * R2)


def test_z_all_flips_relative_sign_for_odd_k():
    i, k = "101", "111"
    j = format(int(i, 2) ^ int(k, 2), "03b")
    psi = vec((ket(i) + ket(j)) * R2)
    out = apply_pauli_mask(psi, "Z", B("111")).amps
    ratio = out[int(j, 2)] / out[int(i, 2)]
    assert abs(ratio + 1) < 1e-12


def test_cnot_examples():
    assert np.allclose(apply_cnot(DenseState.basis(B("10")), 1, 2).amps, ket("11"))
    assert np.allclose(apply_cnot(DenseState.basis(B("01")), 1, 2).amps, ket("01"))
    bell = vec((ket("00") + ket("11")) * R2)
    assert np.allclose(apply_cnot(bell, 1, 2).amps, np.kron(PLUS, ket("0")))


def test_cnot_rejects_same_qubit():
    with pytest.raises((ParameterError, IndexError)):
        apply_cnot(DenseState.basis(B("00")), 1, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_gates_match_kronecker_oracle(n, seed):
    rng = np.random.default_rng(seed)
    psi = random_pure_state(n, rng)
    mask = BitVec.random(n, rng)
    m = str(mask)
    assert np.allclose(apply_hadamard_mask(psi, mask).amps, mask_operator(H, m) @ psi.amps, atol=1e-12)
    for name, gate in (("X", X), ("Y", Y), ("Z", Z)):
        out = apply_pauli_mask(psi, name, mask)
        assert np.allclose(out.amps, mask_operator(gate, m) @ psi.amps, atol=1e-12)
        assert abs(out.norm() - 1) < 1e-12
        # involution
        assert np.allclose(apply_pauli_mask(out, name, mask).amps, psi.amps, atol=1e-12)
    if n >= 2:
        c, t = rng.choice(np.arange(1, n + 1), size=2, replace=False)
        out = apply_cnot(psi, int(c), int(t))
        assert np.allclose(out.amps, cnot_matrix(n, int(c), int(t)) @ psi.amps, atol=1e-12)


def test_hyh_is_minus_y():
    assert np.allclose(H @ Y @ H, -Y)


# -- symbolic / dense commuting diagram ------------------------------------------

def test_sym_y_all_examples():
    s = TwoBranchState(4, B("0000"), B("0111"))
    assert sym_apply_y_all(s).y_mask == B("1111")
    s = TwoBranchState(4, B("0000"), B("0111"), y_mask=B("1010"))
    assert sym_apply_y_all(s).y_mask == B("0101")


def test_commuting_diagram_y_all(rng):
    for _ in range(200):
        n = int(rng.integers(1, 7))
        s = random_two_branch(n, rng)
        dense = apply_pauli_mask(expand(s), "Y", BitVec.ones(n))
        assert np.max(np.abs(expand(sym_apply_y_all(s)).amps - dense.amps)) < 1e-12


def test_commuting_diagram_undressed_ops(rng):
    for _ in range(200):
        n = int(rng.integers(2, 7))
        s = random_two_branch(n, rng, dressed=False)
        psi = expand(s)
        mask = BitVec.random(n, rng)
        assert expand(sym_apply_x(s, mask)).allclose(apply_pauli_mask(psi, "X", mask))
        assert expand(sym_apply_z_all(s)).allclose(apply_pauli_mask(psi, "Z", BitVec.ones(n)))
        c, t = (int(x) for x in rng.choice(np.arange(1, n + 1), size=2, replace=False))
        assert expand(sym_apply_cnot(s, c, t)).allclose(apply_cnot(psi, c, t))


def test_commuting_diagram_undo_dressing(rng):
    for _ in range(300):
        n = int(rng.integers(1, 7))
        k2, k3 = BitVec.random(n, rng), BitVec.random(n, rng)
        inner = random_two_branch(n, rng, dressed=False)
        s = TwoBranchState(n, inner.u, inner.v, inner.rel, inner.global_phase, k2, k3)
        if rng.integers(2):
            s = sym_apply_y_all(s)
        dense = apply_hadamard_mask(apply_pauli_mask(expand(s), "Y", k3), k2)
        bare = sym_undo_dressing(s, k2, k3)
        assert bare.undressed
        assert np.max(np.abs(expand(bare).amps - dense.amps)) < 1e-12


def test_symbolic_ops_require_undressed():
    s = TwoBranchState(2, B("00"), B("01"), h_mask=B("10"))
    for op in (lambda: sym_apply_x(s, B("11")), lambda: sym_apply_z_all(s),
               lambda: sym_apply_cnot(s, 1, 2)):
        with pytest.raises(ParameterError):
            op()


def test_undo_bit0_recovers_inner_state():
    s = TwoBranchState(4, B("0000"), B("0111"), h_mask=B("1001"), y_mask=B("0110"))
    bare = sym_undo_dressing(s, B("1001"), B("0110"))
    assert (bare.u, bare.v, bare.rel, bare.global_phase) == (B("0000"), B("0111"), 0, 0)


def test_undo_bit1_gives_complemented_branches():
    s = sym_apply_y_all(TwoBranchState(4, B("0000"), B("0111")))
    bare = sym_undo_dressing(s, B("0000"), B("0000"))
    expected = (ket("1111") - ket("1000")) * R2
    got = expand(bare).amps
    phase = got[0b1111] / expected[0b1111]
    assert abs(abs(phase) - 1) < 1e-12
    assert np.allclose(got, phase * expected, atol=1e-12)


def test_undo_mask_mismatch():
    s = TwoBranchState(4, B("0000"), B("0111"), h_mask=B("1001"), y_mask=B("0110"))
    with pytest.raises(KeyMismatchError, match="ciphertext does not match key"):
        sym_undo_dressing(s, B("1000"), B("0110"))
    with pytest.raises(KeyMismatchError):
        sym_undo_dressing(s, B("1001"), B("0100"))


def test_two_branch_validation():
    with pytest.raises(ParameterError):
        TwoBranchState(2, B("01"), B("01"))
    with pytest.raises(DimensionError):
        TwoBranchState(2, B("01"), B("011"))


@settings(max_examples=50)
@given(st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_two_branch_text_round_trip(n, seed):
    s = random_two_branch(n, np.random.default_rng(seed)) if n > 1 else TwoBranchState(1, B("0"), B("1"), 3, 1)
    line = s.dumps()
    assert TwoBranchState.loads(line) == s
    assert TwoBranchState.loads(line).dumps() == line


def test_two_branch_text_rejects_garbage():
    with pytest.raises(ParameterError):
        TwoBranchState.loads("n=2 u=00 v=01 rel=5 global=0 h=00 y=00")
    with pytest.raises(DimensionError):
        TwoBranchState.loads("n=3 u=00 v=01 rel=0 global=0 h=00 y=00")


# -- density matrices and distance --------------------------------------------------

def test_density_and_mix_examples():
    zero = density_of(DenseState.basis(B("0")))
    one = density_of(DenseState.basis(B("1")))
    assert np.allclose(zero.data, np.diag([1, 0]))
    assert np.allclose(mix([(0.5, zero), (0.5, one)]).data, np.eye(2) / 2)
    four = [density_of(vec(a)) for a in (ket("0"), ket("1"), PLUS, MINUS)]
    assert np.allclose(mix((0.25, r) for r in four).data, np.eye(2) / 2)


def test_mix_rejects_bad_weights():
    zero = density_of(DenseState.basis(B("0")))
    with pytest.raises(ParameterError):
        mix([(0.6, zero), (0.6, zero)])
    with pytest.raises(ParameterError):
        mix([])


def test_trace_distance_examples():
    zero = density_of(DenseState.basis(B("0")))
    one = density_of(DenseState.basis(B("1")))
    plus = density_of(vec(PLUS))
    assert trace_distance(zero, zero) == pytest.approx(0, abs=1e-15)
    assert trace_distance(zero, one) == pytest.approx(1, abs=1e-12)
    assert trace_distance(zero, plus) == pytest.approx(R2, abs=1e-12)


def test_trace_distance_dimension_mismatch():
    with pytest.raises(DimensionError):
        trace_distance(DensityMatrix.maximally_mixed(1), DensityMatrix.maximally_mixed(2))


def test_trace_distance_is_a_metric(rng):
    for _ in range(50):
        n = int(rng.integers(1, 4))
        a, b, c = (random_density_matrix(n, int(rng.integers(1, 5)), rng) for _ in range(3))
        dab = trace_distance(a, b)
        assert dab == pytest.approx(trace_distance(b, a), abs=1e-12)
        assert dab == pytest.approx(trace_distance_numpy(a.data, b.data), abs=1e-10)
        assert 0 <= dab <= 1
        assert dab <= trace_distance(a, c) + trace_distance(c, b) + 1e-10


def test_random_density_matrices_are_valid(rng):
    for rank in (1, 2, 4):
        rho = random_density_matrix(3, rank, rng)
        assert rho.is_valid()
        assert np.linalg.matrix_rank(rho.data, tol=1e-9) == rank


# -- eigen solver ---------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.integers(1, 32), st.integers(0, 2**32 - 1))
def test_jacobi_matches_numpy(size, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    a = a + a.conj().T
    w, v = jacobi_eigh(a)
    assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-10)
    assert np.all(np.diff(w) >= -1e-12)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - a)) < 1e-10
    assert np.max(np.abs(v.conj().T @ v - np.eye(size))) < 1e-10


def test_jacobi_degenerate_and_diagonal():
    w, _ = jacobi_eigh(np.eye(8, dtype=complex) / 8)
    assert np.allclose(w, 1 / 8)
    w, _ = jacobi_eigh(np.diag([3.0, -1.0, 2.0]).astype(complex))
    assert np.allclose(w, [-1, 2, 3])


# -- measurement -------------------------------------------------------------------

@pytest.mark.parametrize("amps, expected", [(PLUS, (1, 0)), (MINUS, (0, 1)), (ket("0"), (0.5, 0.5))])
def test_measure_pm_examples(amps, expected):
    res = measure_pm(vec(amps), 1)
    assert (res.prob_plus, res.prob_minus) == pytest.approx(expected, abs=1e-12)


def test_measure_pm_post_states(rng):
    for _ in range(50):
        n = int(rng.integers(1, 6))
        psi = random_pure_state(n, rng)
        q = int(rng.integers(1, n + 1))
        res = measure_pm(psi, q)
        assert res.prob_plus + res.prob_minus == pytest.approx(1, abs=1e-12)
        proj = kron_projector(n, q, PLUS)
        assert res.prob_plus == pytest.approx(np.vdot(psi.amps, proj @ psi.amps).real, abs=1e-12)
        expected = proj @ psi.amps / np.sqrt(res.prob_plus)
        assert np.allclose(res.post_plus.amps, expected, atol=1e-12)


def kron_projector(n, q, basis_vec):
    from oracles import I2, kron_all
    p = np.outer(basis_vec, basis_vec.conj())
    return kron_all(p if i == q else I2 for i in range(1, n + 1))


def test_measure_pm_bad_index():
    with pytest.raises(IndexError):
        measure_pm(DenseState.basis(B("00")), 3)


# -- exact accumulation -----------------------------------------------------------

def test_exact_mixture_is_order_independent(rng):
    states = [random_two_branch(3, rng) for _ in range(40)]
    vectors = [exact_from_two_branch(s) for s in states]
    a = ExactMixture(3)
    a.add_batch(vectors)
    b = ExactMixture(3)
    perm = rng.permutation(len(vectors))
    b.add_batch([vectors[i] for i in perm[:17]])
    c = ExactMixture(3)
    c.add_batch([vectors[i] for i in perm[17:]])
    merged = b.merge(c)
    assert np.array_equal(a.to_matrix(), merged.to_matrix())
    ref = sum(np.outer(expand(s).amps, expand(s).amps.conj()) for s in states) / len(states)
    assert np.max(np.abs(a.to_matrix() - ref)) < 1e-12
