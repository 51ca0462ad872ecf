import numpy as np
import pytest

from bitqpke.attacks import (
    GuessingEstimate,
    attack_success_rate,
    guessing_attack_estimate,
    guessing_closed_form,
    hadamard_attack_sample,
    key_ensemble,
    multi_copy_distance,
    multi_copy_mixture,
    py12_attack_trial,
    recover_boolean_function,
    recover_k_from_samples,
    truth_table_pairs,
)
from bitqpke.boolfunc import sample_boolean_function
from bitqpke.errors import CapacityError, InconsistentObservations, ParameterError
from bitqpke.gf2 import BitVec, gf2_dot, odd_weight_vectors
from bitqpke.py12 import Py12Key, py12_issue
from bitqpke.qsim import TwoBranchState, trace_distance
from bitqpke.scheme import public_key_state
from bitqpke.security import check_maximally_mixed

from oracles import brute_force_multicopy, trace_distance_numpy


def B(s):
    return BitVec.from_str(s)


# -- Hadamard measurement ---------------------------------------------------------

def test_py12_samples_are_orthogonal(rng):
    for _ in range(100):
        n = int(rng.integers(2, 8))
        k = BitVec.random(n, rng)
        while k.weight() % 2 == 0:
            k = BitVec.random(n, rng)
        state = py12_issue(Py12Key(None, None, k, BitVec.random(n, rng)))
        assert gf2_dot(hadamard_attack_sample(state, rng), k) == 0


def test_sample_distribution_for_k11(rng):
    state = TwoBranchState(2, B("00"), B("11"))
    draws = [str(hadamard_attack_sample(state, rng)) for _ in range(4000)]
    assert set(draws) == {"00", "11"}
    assert abs(draws.count("00") / 4000 - 0.5) < 0.03


def test_dressed_state_breaks_orthogonality(rng):
    violations = 0
    for _ in range(50):
        k1 = odd_weight_vectors(6)[int(rng.integers(32))]
        state = public_key_state(k1, BitVec.random(6, rng), BitVec.random(6, rng))
        violations += sum(gf2_dot(hadamard_attack_sample(state, rng), k1) for _ in range(20))
    assert violations > 0


def test_recover_k_exhaustive_n4():
    for k in odd_weight_vectors(4):
        orth = [BitVec(4, y) for y in range(16) if gf2_dot(BitVec(4, y), k) == 0]
        rec = recover_k_from_samples(orth, 4)
        assert rec.k == k and rec.rank == 3


def test_recover_k_single_sample():
    rec = recover_k_from_samples([B("0110")], 4)
    assert rec.k is None and rec.rank == 1 and not rec.sufficient


def test_py12_attack_is_reproducible():
    a = py12_attack_trial(8, np.random.default_rng(7))
    b = py12_attack_trial(8, np.random.default_rng(7))
    assert a.samples == b.samples and a.ranks == b.ranks
    assert a.success and a.orthogonal


def test_attack_rate_validation():
    with pytest.raises(ParameterError):
        attack_success_rate("nope", 4, 2, 0)


# -- coefficient recovery ------------------------------------------------------------

def test_recover_function_from_truth_table(rng):
    for _ in range(5):
        F = sample_boolean_function(6, 5, 4, rng)
        rec = recover_boolean_function(truth_table_pairs(F), 6, 5)
        assert not rec.underdetermined
        for v in range(64):
            assert rec(BitVec(6, v)) == F(BitVec(6, v))


def test_recover_function_no_pairs():
    rec = recover_boolean_function([], 3, 2)
    assert rec.underdetermined
    assert all(rec(BitVec(3, v)).is_zero() for v in range(8))


def test_recover_function_partial_pairs_are_consistent(rng):
    F = sample_boolean_function(5, 4, 3, rng)
    pairs = truth_table_pairs(F)
    picked = [pairs[i] for i in rng.choice(32, size=12, replace=False)]
    rec = recover_boolean_function(picked, 5, 4)
    assert rec.underdetermined
    for s, k in picked:
        assert rec(s) == k


def test_corrupted_pair_is_detected(rng):
    F = sample_boolean_function(4, 3, 2, rng)
    pairs = truth_table_pairs(F)
    s, k = pairs[5]
    corrupted = pairs + [(s, k ^ B("010"))]
    with pytest.raises(InconsistentObservations):
        recover_boolean_function(corrupted, 4, 3)


def test_recover_function_capacity():
    with pytest.raises(CapacityError):
        recover_boolean_function([], 15, 1)


# -- guessing attack -----------------------------------------------------------------

@pytest.mark.parametrize("l, expected", [(1, 0.75), (2, 0.625), (3, 0.5625)])
def test_closed_form(l, expected):
    assert guessing_closed_form(l) == expected


def test_guessing_estimate_small(rng):
    est = guessing_attack_estimate(4, 1, 4000, rng)
    assert isinstance(est, GuessingEstimate)
    assert abs(est.rate - 0.75) < 4 * est.half_width
    assert est.alt_value == 0.25


def test_guessing_is_seed_deterministic_across_workers():
    a = guessing_attack_estimate(4, 2, 3000, np.random.default_rng(5))
    b = guessing_attack_estimate(4, 2, 3000, np.random.default_rng(5), workers=3)
    assert a.successes == b.successes


@pytest.mark.parametrize("l", [0, 4])
def test_guessing_rejects_bad_l(l, rng):
    with pytest.raises(ParameterError):
        guessing_attack_estimate(4, l, 10, rng)


def test_reproduces_labels():
    est = GuessingEstimate(4, 1, 1000, 751, 0.75, 0.25)
    assert est.reproduces() == "closed-form"
    assert GuessingEstimate(4, 1, 1000, 500, 0.75, 0.25).reproduces() == "neither"


# -- multi-copy ------------------------------------------------------------------------

def test_single_copy_is_maximally_mixed():
    for n in (2, 3):
        for bit in (0, 1):
            ok, dev = check_maximally_mixed(multi_copy_mixture(n, 1, (bit,)))
            assert ok, dev


def test_two_copy_mixture_is_a_density_matrix():
    rho = multi_copy_mixture(2, 2, (0, 0))
    assert rho.data.shape == (16, 16)
    assert rho.is_valid()


def test_two_copy_matches_brute_force():
    for pattern in ((0, 0), (1, 0), (1, 1)):
        rho = multi_copy_mixture(2, 2, pattern)
        assert np.max(np.abs(rho.data - brute_force_multicopy(2, pattern))) < 1e-12


def test_two_copy_distance_value():
    d = multi_copy_distance(2, 2, (0, 0), (1, 0))
    ref = trace_distance_numpy(brute_force_multicopy(2, (0, 0)), brute_force_multicopy(2, (1, 0)))
    assert d == pytest.approx(ref, abs=1e-12)
    assert d == pytest.approx(0.75, abs=1e-12)


def test_multi_copy_order_invariance(rng):
    a = multi_copy_mixture(2, 2, (1, 0))
    perm = rng.permutation(len(key_ensemble(2)))
    b = multi_copy_mixture(2, 2, (1, 0), order=perm)
    assert np.array_equal(a.data, b.data)
    assert trace_distance(a, multi_copy_mixture(2, 2, (0, 0))) == multi_copy_distance(2, 2, (1, 0), (0, 0))


def test_multi_copy_validation():
    with pytest.raises(ParameterError):
        multi_copy_mixture(2, 2, (0,))
    with pytest.raises(CapacityError):
        multi_copy_mixture(4, 4, (0, 0, 0, 0))
