"""Multi-qubit density matrices, local unitaries and the SU(2) -> SO(3) cover.

Qubit 1 is the leftmost (most significant) tensor factor, so ``|10>`` means
qubit 1 in state 1 and qubit 2 in state 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import (
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

ATOL = 1e-10
RTOL = 1e-9

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
#: Pauli basis; index 0 is the identity and 1, 2, 3 are x, y, z.
PAULI = np.stack([I2, SX, SY, SZ])


@dataclass(frozen=True, eq=False)
class DensityState:
    """A validated ``2**n_qubits`` square density matrix.

    Build through :func:`validate_density`, :func:`pure_state_density` or
    :func:`random_density` rather than directly.
    """

    n_qubits: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """Tensor product ``U_1 x ... x U_N`` of single-qubit SU(2) factors."""

    factors: tuple

    @property
    def n_qubits(self) -> int:
        return len(self.factors)

    def matrix(self) -> np.ndarray:
        return reduce(np.kron, self.factors)

    @classmethod
    def identity(cls, n_qubits: int) -> "LocalUnitary":
        return cls(tuple(I2.copy() for _ in range(n_qubits)))


def qubit_count(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise BadDimension(f"dimension {dim} is not a power of 2 (>= 2)")
    return n


def validate_density(m, atol: float = ATOL, rtol: float = RTOL) -> DensityState:
    """Check Hermiticity, unit trace and positivity; return a :class:`DensityState`.

    ``rtol`` is accepted for symmetry with the rest of the API; all three
    checks are absolute.
    """
    m = np.array(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise BadDimension(f"matrix must be square, got shape {m.shape}")
    n = qubit_count(m.shape[0])
    herm_dev = float(np.max(np.abs(m - m.conj().T)))
    if herm_dev > atol:
        raise NotHermitian(f"max |rho - rho^dag| = {herm_dev:.3e} exceeds atol {atol:.1e}")
    tr = np.trace(m)
    if abs(tr - 1) > atol:
        raise TraceNotOne(f"|Tr rho - 1| = {abs(tr - 1):.3e} exceeds atol {atol:.1e}")
    # eigvalsh, not Cholesky: singular (pure) states must pass
    lam_min = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
    if lam_min < -atol:
        raise NotPositive(f"minimum eigenvalue {lam_min:.3e} below -atol {atol:.1e}")
    m.setflags(write=False)
    return DensityState(n, m)


def pure_state_density(amplitudes) -> DensityState:
    psi = np.asarray(amplitudes, dtype=complex).ravel()
    qubit_count(psi.size)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ZeroVector("amplitude vector is zero")
    psi = psi / norm
    return validate_density(np.outer(psi, psi.conj()))


def mixture(weights, states) -> DensityState:
    """Convex combination of density states (or raw matrices)."""
    mats = [s.matrix if isinstance(s, DensityState) else np.asarray(s) for s in states]
    return validate_density(sum(w * m for w, m in zip(weights, mats)))


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_density(n_qubits: int, rank: int | None = None, rng=None) -> DensityState:
    """Random state ``G G^dag / Tr(G G^dag)`` from a complex Ginibre ``G``.

    ``rank`` defaults to full rank. ``rng`` is a seed or a ``numpy`` Generator.
    """
    dim = 1 << n_qubits
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise BadRank(f"rank {rank} outside 1..{dim}")
    gen = _rng(rng)
    g = gen.standard_normal((dim, rank)) + 1j * gen.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return validate_density(rho / np.real(np.trace(rho)))


def quaternion_to_su2(q) -> np.ndarray:
    """``w I - i (x sx + y sy + z sz)`` for a unit quaternion ``(w, x, y, z)``.

    This matrix rotates Bloch vectors by angle ``2 arccos(w)`` about ``(x, y, z)``.
    """
    w, x, y, z = q
    return np.array([[w - 1j * z, -1j * x - y], [-1j * x + y, w + 1j * z]])


def random_su2(rng=None) -> np.ndarray:
    # normalized Gaussian 4-vector is uniform on S^3, i.e. Haar on SU(2)
    q = _rng(rng).standard_normal(4)
    return quaternion_to_su2(q / np.linalg.norm(q))


def random_local_unitary(n_qubits: int, rng=None) -> LocalUnitary:
    gen = _rng(rng)
    return LocalUnitary(tuple(random_su2(gen) for _ in range(n_qubits)))


def check_su2(u, atol: float = ATOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise NotSpecialUnitary(f"expected a 2x2 matrix, got shape {u.shape}")
    dev = float(np.max(np.abs(u @ u.conj().T - I2)))
    if dev > atol:
        raise NotSpecialUnitary(f"|U U^dag - I| = {dev:.3e} exceeds atol {atol:.1e}")
    det_dev = abs(np.linalg.det(u) - 1)
    if det_dev > atol:
        raise NotSpecialUnitary(f"|det U - 1| = {det_dev:.3e} exceeds atol {atol:.1e}")
    return u


def check_rotation(o, atol: float = ATOL) -> np.ndarray:
    o = np.asarray(o, dtype=float)
    if o.shape != (3, 3):
        raise NotRotation(f"expected a 3x3 matrix, got shape {o.shape}")
    dev = float(np.max(np.abs(o @ o.T - np.eye(3))))
    if dev > atol:
        raise NotRotation(f"|O O^t - I| = {dev:.3e} exceeds atol {atol:.1e}")
    det = np.linalg.det(o)
    if abs(det - 1) > atol:
        raise NotRotation(f"det O = {det:.6f}, not +1")
    return o


def apply_local_unitary(state: DensityState, lu: LocalUnitary) -> DensityState:
    if lu.n_qubits != state.n_qubits:
        raise ArityMismatch(f"{lu.n_qubits} factors for a {state.n_qubits}-qubit state")
    u = lu.matrix()
    out = u @ state.matrix @ u.conj().T
    return validate_density((out + out.conj().T) / 2)


def su2_to_so3(u, atol: float = ATOL) -> np.ndarray:
    """Rotation ``O`` with ``O[k, l] = Tr(s_k U s_l U^dag) / 2``.

    With this orientation the Bloch data of ``U rho U^dag`` is ``O`` times
    the Bloch data of ``rho``, and ``su2_to_so3(U V) = su2_to_so3(U) su2_to_so3(V)``.
    """
    u = check_su2(u, atol)
    s = PAULI[1:]
    conj = u @ s @ u.conj().T  # conj[l] = U s_l U^dag
    return np.real(np.einsum("kab,lba->kl", s, conj)) / 2


def _canonical_sign(u, atol):
    tr = np.trace(u).real
    if abs(tr) > atol:
        return u if tr > 0 else -u
    # trace ~ 0: fix by the first nonzero entry (row-major), real part first,
    # imaginary part when the real part vanishes
    for z in u.ravel():
        if abs(z) > atol:
            key = z.real if abs(z.real) > atol else z.imag
            return u if key > 0 else -u
    return u


def so3_to_su2(o, atol: float = ATOL) -> np.ndarray:
    """One of the two SU(2) preimages of a rotation, with a canonical sign.

    The preimage with ``Re Tr U > 0`` is returned; when the trace vanishes
    (half-turns) the first nonzero entry decides.
    """
    o = check_rotation(o, atol)
    # Shepperd: take the largest of the four quaternion magnitudes as pivot
    tr = np.trace(o)
    cands = np.array([tr, o[0, 0], o[1, 1], o[2, 2]])
    k = int(np.argmax(cands))
    if k == 0:
        w = np.sqrt(max(1 + tr, 0.0)) / 2
        q = np.array([w, (o[2, 1] - o[1, 2]) / (4 * w),
                      (o[0, 2] - o[2, 0]) / (4 * w), (o[1, 0] - o[0, 1]) / (4 * w)])
    else:
        i = k - 1
        j, l = (i + 1) % 3, (i + 2) % 3
        v = np.empty(3)
        v[i] = np.sqrt(max(1 + 2 * o[i, i] - tr, 0.0)) / 2
        v[j] = (o[j, i] + o[i, j]) / (4 * v[i])
        v[l] = (o[l, i] + o[i, l]) / (4 * v[i])
        w = (o[l, j] - o[j, l]) / (4 * v[i])
        q = np.array([w, *v])
    q /= np.linalg.norm(q)
    return _canonical_sign(quaternion_to_su2(q), atol)
