import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochlu.bloch import (
    MAX_QUBITS,
    BlochTensors,
    all_subsets,
    cayley_hamilton_residual,
    elementary_from_power,
    extract_tensors,
    fold,
    fourth_power_sum,
    power_sums,
    reconstruct_density,
    rotate_tensors,
    unfold,
    zero_tensors,
)
from blochlu.errors import BadPartition, IncompleteTensors, NotSymmetric, TooManyQubits
from blochlu.qstate import (
    DensityState,
    apply_local_unitary,
    random_density,
    random_local_unitary,
    su2_to_so3,
    validate_density,
)

import oracles


def _state(m):
    return validate_density(m)


def test_subsets_order():
    assert all_subsets(3) == [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)]


def test_extract_maximally_mixed_is_zero():
    t = extract_tensors(_state(np.eye(4) / 4))
    assert t.max_abs() == 0.0


def test_extract_product_and_bell():
    t = extract_tensors(_state(oracles.projector([1, 0, 0, 0])))
    np.testing.assert_allclose(t[1], [0, 0, 0.25])
    np.testing.assert_allclose(t[2], [0, 0, 0.25])
    expected = np.zeros((3, 3))
    expected[2, 2] = 0.25
    np.testing.assert_allclose(t[1, 2], expected)

    b = extract_tensors(_state(oracles.bell_phi()))
    assert b.local(1).any() == b.local(2).any() == False  # noqa: E712
    np.testing.assert_allclose(b[1, 2], np.diag([1, -1, 1]) / 4, atol=1e-16)


def test_extract_ghz():
    t = extract_tensors(_state(oracles.ghz3()))
    for j in (1, 2, 3):
        assert not t[j].any()
    ezz = np.zeros((3, 3))
    ezz[2, 2] = 1 / 8
    for pair in ((1, 2), (1, 3), (2, 3)):
        np.testing.assert_allclose(t[pair], ezz, atol=1e-16)
    expected = np.zeros((3, 3, 3))
    expected[0, 0, 0] = 1 / 8
    expected[0, 1, 1] = expected[1, 0, 1] = expected[1, 1, 0] = -1 / 8
    np.testing.assert_allclose(t[1, 2, 3], expected, atol=1e-16)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_extract_matches_dense_oracle(n, rng):
    rho = random_density(n, rng=rng)
    t = extract_tensors(rho)
    for s, ref in oracles.dense_tensors(rho.matrix).items():
        np.testing.assert_allclose(t[s], ref, atol=1e-15)
        assert np.max(np.abs(t[s])) <= 2.0**-n + 1e-12


def test_non_ascending_access_is_a_transpose(rng):
    t = extract_tensors(random_density(3, rng=rng))
    np.testing.assert_array_equal(t[2, 1], t[1, 2].T)
    np.testing.assert_array_equal(t[3, 1, 2], np.transpose(t[1, 2, 3], (2, 0, 1)))
    with pytest.raises(BadPartition):
        t[1, 1]


def test_reconstruct_round_trips(rng):
    np.testing.assert_allclose(reconstruct_density(zero_tensors(2)).matrix, np.eye(4) / 4)
    zero = oracles.projector([1, 0, 0, 0])
    np.testing.assert_allclose(reconstruct_density(extract_tensors(_state(zero))).matrix, zero, atol=1e-12)
    rho = random_density(3, rng=rng)
    np.testing.assert_allclose(reconstruct_density(extract_tensors(rho)).matrix, rho.matrix, atol=1e-10)


def test_reconstruct_needs_every_tensor():
    t = zero_tensors(2)
    partial = BlochTensors(2, {k: v for k, v in t.tensors.items() if k != (1, 2)})
    with pytest.raises(IncompleteTensors):
        reconstruct_density(partial)


def test_qubit_cap():
    big = MAX_QUBITS + 1
    dim = 2**big
    # built directly: validating a 128x128 identity is not the point here
    state = DensityState(big, np.eye(dim) / dim)
    with pytest.raises(TooManyQubits):
        extract_tensors(state)


def test_rotate_tensors_tracks_conjugation(rng):
    rho = random_density(3, rng=rng)
    lu = random_local_unitary(3, rng)
    t_rot = rotate_tensors(extract_tensors(rho), [su2_to_so3(u) for u in lu.factors])
    t_new = extract_tensors(apply_local_unitary(rho, lu))
    for s in all_subsets(3):
        np.testing.assert_allclose(t_rot[s], t_new[s], atol=1e-15)


# ------------------------------------------------------------------ folding

def test_fold_examples():
    b = extract_tensors(_state(oracles.bell_phi()))
    np.testing.assert_allclose(fold(b, (1, 2), (1,)).matrix, np.diag([1, -1, 1]) / 4, atol=1e-16)

    g = extract_tensors(_state(oracles.ghz3()))
    f = fold(g, (1, 2, 3), (1,)).matrix
    assert f.shape == (3, 9)
    expected = np.zeros((3, 9))
    expected[0, 0] = 1 / 8           # (x, xx)
    expected[0, 4] = -1 / 8          # (x, yy)
    expected[1, 1] = expected[1, 3] = -1 / 8   # (y, xy), (y, yx)
    np.testing.assert_allclose(f, expected, atol=1e-16)


def test_fold_rejects_bad_partitions(rng):
    t = extract_tensors(random_density(3, rng=rng))
    for pivot in ((), (1, 2, 3), (4,)):
        with pytest.raises(BadPartition):
            fold(t, (1, 2, 3), pivot)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from([(1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (2, 1)]))
def test_fold_is_a_permutation(seed, pivot):
    t = extract_tensors(random_density(3, rng=seed))
    f = fold(t, (1, 2, 3), pivot)
    assert np.linalg.norm(f.matrix) == pytest.approx(np.linalg.norm(t[1, 2, 3]), rel=1e-15)
    np.testing.assert_array_equal(np.sort(f.matrix.ravel()), np.sort(t[1, 2, 3].ravel()))
    np.testing.assert_array_equal(unfold(f), t[1, 2, 3])


# ------------------------------------------------- symmetric polynomials

def test_power_sum_examples():
    assert power_sums(np.diag([1.0, 2, 3]), 4) == [6, 14, 36, 98]
    assert power_sums(np.zeros((3, 3)), 3) == [0, 0, 0]
    m = np.diag([1, -1, 1]) / 4
    np.testing.assert_allclose(power_sums(m @ m.T, 3), [3 / 16, 3 / 256, 3 / 4096], rtol=1e-15)
    with pytest.raises(NotSymmetric):
        power_sums(np.array([[0, 1], [0, 0]]), 2)


def test_newton_identities():
    assert elementary_from_power(6, 14, 36) == (6, 11, 6)
    assert elementary_from_power(0, 0, 0) == (0, 0, 0)
    assert fourth_power_sum(6, 14, 36) == pytest.approx(98, abs=1e-12)


def test_cayley_hamilton_examples(rng):
    assert cayley_hamilton_residual(np.diag([1.0, 2, 3])) <= 1e-12
    assert cayley_hamilton_residual(np.zeros((3, 3))) == 0
    m = extract_tensors(random_density(2, rng=rng))[1, 2]
    assert cayley_hamilton_residual(m @ m.T) <= 1e-10
    with pytest.raises(NotSymmetric):
        cayley_hamilton_residual(np.eye(2))
