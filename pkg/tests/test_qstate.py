import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochlu.errors import (
    ArityMismatch,
    BadDimension,
    BadRank,
    NotHermitian,
    NotPositive,
    NotRotation,
    NotSpecialUnitary,
    TraceNotOne,
    ZeroVector,
)
from blochlu.qstate import (
    SX,
    SY,
    SZ,
    LocalUnitary,
    apply_local_unitary,
    check_su2,
    pure_state_density,
    quaternion_to_su2,
    random_density,
    random_local_unitary,
    so3_to_su2,
    su2_to_so3,
    validate_density,
)

import oracles

quaternions = st.lists(st.floats(-1, 1, allow_nan=False), min_size=4, max_size=4).filter(
    lambda q: np.linalg.norm(q) > 1e-3)


# ---------------------------------------------------------------- densities

def test_validate_accepts_mixed_and_pure():
    assert validate_density(np.eye(4) / 4).n_qubits == 2
    assert validate_density(oracles.projector([1, 0, 0, 0])).n_qubits == 2


def test_validate_rejects_negative_eigenvalue():
    with pytest.raises(NotPositive, match="-1.000e-01"):
        validate_density(np.diag([0.6, 0.6, -0.1, -0.1]))


@pytest.mark.parametrize("m, err", [
    (np.eye(3) / 3, BadDimension),
    (np.ones((2, 3)), BadDimension),
    (np.eye(2), TraceNotOne),
    (np.array([[0.5, 0.1], [0.2, 0.5]]), NotHermitian),
])
def test_validate_errors(m, err):
    with pytest.raises(err):
        validate_density(m)


def test_pure_state_density_normalizes():
    np.testing.assert_allclose(pure_state_density([2, 0, 0, 0]).matrix, oracles.projector([1, 0, 0, 0]))
    np.testing.assert_allclose(pure_state_density([1, 0, 0, 1]).matrix, oracles.bell_phi(), atol=1e-15)
    with pytest.raises(ZeroVector):
        pure_state_density([0, 0, 0, 0])


def test_random_density_contract():
    full = random_density(2, 4, rng=7)
    assert np.linalg.matrix_rank(full.matrix) == 4
    assert random_density(2, 1, rng=7).purity() == pytest.approx(1.0, rel=1e-12)
    a, b = random_density(3, 5, rng=11), random_density(3, 5, rng=11)
    assert np.array_equal(a.matrix, b.matrix)
    with pytest.raises(BadRank):
        random_density(2, 5)


# ---------------------------------------------------------------- unitaries

def test_random_local_unitary_factors(rng):
    for n in (1, 2, 3):
        lu = random_local_unitary(n, rng)
        assert lu.n_qubits == n
        for u in lu.factors:
            np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-12)
            assert abs(np.linalg.det(u) - 1) < 1e-12
    a = random_local_unitary(2, np.random.default_rng(3))
    b = random_local_unitary(2, np.random.default_rng(3))
    assert all(np.array_equal(x, y) for x, y in zip(a.factors, b.factors))


def test_check_su2_rejects_det_minus_one():
    with pytest.raises(NotSpecialUnitary):
        check_su2(SX)
    with pytest.raises(NotSpecialUnitary):
        check_su2(2 * np.eye(2))


def test_apply_local_unitary_examples(rng):
    rho = random_density(2, rng=rng)
    same = apply_local_unitary(rho, LocalUnitary.identity(2))
    np.testing.assert_allclose(same.matrix, rho.matrix, atol=1e-15)

    mixed = validate_density(np.eye(4) / 4)
    np.testing.assert_allclose(apply_local_unitary(mixed, random_local_unitary(2, rng)).matrix,
                               np.eye(4) / 4, atol=1e-15)

    flip = LocalUnitary((1j * SX, np.eye(2)))
    out = apply_local_unitary(validate_density(oracles.projector([1, 0, 0, 0])), flip)
    np.testing.assert_allclose(out.matrix, oracles.projector([0, 0, 1, 0]), atol=1e-15)

    with pytest.raises(ArityMismatch):
        apply_local_unitary(rho, LocalUnitary.identity(3))


# ---------------------------------------------------------- SU(2) <-> SO(3)

def test_su2_to_so3_examples():
    np.testing.assert_allclose(su2_to_so3(np.eye(2)), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(su2_to_so3(1j * SX), np.diag([1, -1, -1]), atol=1e-15)
    th = np.pi / 2
    rz = np.cos(th / 2) * np.eye(2) - 1j * np.sin(th / 2) * SZ
    expected = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    np.testing.assert_allclose(su2_to_so3(rz), expected, atol=1e-15)


def test_su2_to_so3_orientation_matches_conjugation(rng):
    # U (r . sigma) U^dag = (O r) . sigma
    u = random_local_unitary(1, rng).factors[0]
    o = su2_to_so3(u)
    r = rng.standard_normal(3)
    lhs = u @ (r[0] * SX + r[1] * SY + r[2] * SZ) @ u.conj().T
    r2 = o @ r
    np.testing.assert_allclose(lhs, r2[0] * SX + r2[1] * SY + r2[2] * SZ, atol=1e-14)


def test_so3_to_su2_examples():
    np.testing.assert_allclose(so3_to_su2(np.eye(3)), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(so3_to_su2(np.diag([1.0, -1, -1])), 1j * SX, atol=1e-15)
    with pytest.raises(NotRotation):
        so3_to_su2(np.diag([-1.0, 1, 1]))


@settings(max_examples=200, deadline=None)
@given(quaternions, quaternions)
def test_double_cover_properties(q, p):
    u = quaternion_to_su2(np.divide(q, np.linalg.norm(q)))
    v = quaternion_to_su2(np.divide(p, np.linalg.norm(p)))
    ou, ov = su2_to_so3(u), su2_to_so3(v)
    np.testing.assert_allclose(ou @ ou.T, np.eye(3), atol=1e-12)
    assert np.linalg.det(ou) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(su2_to_so3(u @ v), ou @ ov, atol=1e-12)
    np.testing.assert_allclose(su2_to_so3(-u), ou, atol=1e-12)
    back = so3_to_su2(ou)
    assert min(np.max(np.abs(back - u)), np.max(np.abs(back + u))) < 1e-9
    np.testing.assert_allclose(su2_to_so3(back), ou, atol=1e-12)
