"""Generalized Bloch (Pauli correlation) tensors.

For an N-qubit state every nonempty ascending qubit subset ``S = (j1 < ... < jM)``
carries a real tensor of shape ``(3,) * M`` with entries

    T_S[a1, ..., aM] = Tr(rho s_a1^(j1) ... s_aM^(jM)) / 2**N

(Pauli index 0, 1, 2 = x, y, z). The ``1 / 2**N`` factor is kept as is.
Qubit labels are 1-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import (
    BadPartition,
    IncompleteTensors,
    MissingTensor,
    NotHermitian,
    NotSymmetric,
    TooManyQubits,
)
from .qstate import ATOL, PAULI, DensityState, validate_density

MAX_QUBITS = 6


def all_subsets(n_qubits: int):
    """Nonempty ascending subsets of ``1..n``, ordered by size then lexicographically."""
    qubits = range(1, n_qubits + 1)
    return [c for m in range(1, n_qubits + 1) for c in combinations(qubits, m)]


@dataclass(frozen=True, eq=False)
class BlochTensors:
    n_qubits: int
    tensors: dict

    def __getitem__(self, subset) -> np.ndarray:
        """Tensor for ``subset`` in the given qubit order.

        Non-ascending orders are served as axis permutations of the stored
        ascending tensor, so ``t[2, 1]`` is ``t[1, 2].T``.
        """
        if isinstance(subset, (int, np.integer)):
            subset = (int(subset),)
        subset = tuple(subset)
        key = tuple(sorted(subset))
        if len(set(key)) != len(key):
            raise BadPartition(f"repeated qubit in {subset}")
        try:
            base = self.tensors[key]
        except KeyError:
            raise MissingTensor(f"no tensor for qubits {key}") from None
        if key == subset:
            return base
        return np.transpose(base, [key.index(j) for j in subset])

    def __contains__(self, subset) -> bool:
        return tuple(sorted(subset)) in self.tensors

    def local(self, j: int) -> np.ndarray:
        return self.tensors[(j,)]

    def coefficient_tensor(self) -> np.ndarray:
        """All ``4**N`` Pauli coefficients as one array of shape ``(4,) * N``.

        Index 0 on a qubit means identity on that qubit; entry ``(0, ..., 0)``
        is ``1 / 2**N``.
        """
        n = self.n_qubits
        c = np.zeros((4,) * n)
        c[(0,) * n] = 1.0 / 2**n
        for subset in all_subsets(n):
            if subset not in self.tensors:
                raise IncompleteTensors(f"missing tensor for qubits {subset}")
            idx = tuple(slice(1, 4) if q in subset else 0 for q in range(1, n + 1))
            c[idx] = self.tensors[subset]
        return c

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(t))) for t in self.tensors.values()), default=0.0)


def _pauli_coefficients(rho: np.ndarray, n: int) -> np.ndarray:
    # contract one qubit at a time: c[a1..aN] = sum rho[i, j] prod_k s_ak[j_k, i_k]
    t = rho.reshape((2,) * (2 * n))
    for k in range(n):
        # after k steps the leading k axes are Pauli indices; the current
        # qubit's row axis is at position k, its column axis at n
        t = np.tensordot(PAULI, t, axes=([2, 1], [k, n]))
        t = np.moveaxis(t, 0, k)
    return t


def extract_tensors(state: DensityState, atol: float = ATOL) -> BlochTensors:
    n = state.n_qubits
    if n > MAX_QUBITS:
        raise TooManyQubits(f"{n} qubits exceeds the cap of {MAX_QUBITS}")
    c = _pauli_coefficients(np.asarray(state.matrix), n)
    resid = float(np.max(np.abs(c.imag)))
    if resid > atol * 2**n:
        raise NotHermitian(f"imaginary Pauli expectation residue {resid:.3e}")
    c = c.real / 2**n
    tensors = {}
    for subset in all_subsets(n):
        idx = tuple(slice(1, 4) if q in subset else 0 for q in range(1, n + 1))
        tensors[subset] = np.ascontiguousarray(c[idx])
    return BlochTensors(n, tensors)


def reconstruct_density(t: BlochTensors, atol: float = ATOL) -> DensityState:
    n = t.n_qubits
    c = t.coefficient_tensor().astype(complex)
    # rho = sum_a c[a] s_a1 x ... x s_aN, again one qubit at a time
    out = c
    for k in range(n):
        out = np.tensordot(out, PAULI, axes=([0], [0]))  # appends (row_k, col_k)
    # axes are now row_1, col_1, ..., row_n, col_n
    perm = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    rho = np.transpose(out, perm).reshape(2**n, 2**n)
    return validate_density(rho, atol=atol)


def zero_tensors(n_qubits: int) -> BlochTensors:
    return BlochTensors(n_qubits, {s: np.zeros((3,) * len(s)) for s in all_subsets(n_qubits)})


@dataclass(frozen=True, eq=False)
class FoldedTensor:
    pivot: tuple
    complement: tuple
    matrix: np.ndarray


def _check_partition(subset, pivot):
    subset = tuple(sorted(subset))
    pivot = tuple(sorted(pivot))
    if len(set(subset)) != len(subset):
        raise BadPartition(f"repeated qubit in {subset}")
    if not pivot or not set(pivot) < set(subset):
        raise BadPartition(f"pivot {pivot} must be a nonempty proper subset of {subset}")
    return subset, pivot


def fold(t: BlochTensors, subset: Iterable[int], pivot: Iterable[int]) -> FoldedTensor:
    """Realign ``T_subset`` as a ``3**|A| x 3**|B|`` matrix along ``A | B``.

    Rows run over the pivot ``A``'s Pauli multi-index and columns over the
    complement ``B``'s, each row-major in ascending qubit order.
    """
    subset, pivot = _check_partition(subset, pivot)
    comp = tuple(q for q in subset if q not in pivot)
    mat = t[pivot + comp].reshape(3 ** len(pivot), 3 ** len(comp))
    return FoldedTensor(pivot, comp, mat)


def unfold(folded: FoldedTensor) -> np.ndarray:
    """Inverse of :func:`fold`: the parent tensor in ascending qubit order."""
    order = folded.pivot + folded.complement
    arr = folded.matrix.reshape((3,) * len(order))
    return np.transpose(arr, np.argsort(order))


def _check_symmetric(m, atol):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {m.shape}")
    dev = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if dev > atol:
        raise NotSymmetric(f"|m - m^t| = {dev:.3e} exceeds atol {atol:.1e}")
    return m


def power_sums(m, max_order: int, atol: float = ATOL) -> list:
    """``[Tr m, Tr m^2, ..., Tr m^max_order]`` by repeated multiplication."""
    m = _check_symmetric(m, atol)
    out = []
    p = np.eye(m.shape[0])
    for _ in range(max_order):
        p = p @ m
        out.append(float(np.trace(p)))
    return out


def elementary_from_power(p1: float, p2: float, p3: float) -> tuple:
    """Newton's identities for three variables: power sums -> (e1, e2, e3)."""
    e1 = p1
    e2 = (p1 * p1 - p2) / 2
    e3 = (p1**3 - 3 * p2 * p1 + 2 * p3) / 6
    return e1, e2, e3


def fourth_power_sum(p1: float, p2: float, p3: float) -> float:
    """``p4`` of three variables expressed through ``p1, p2, p3``."""
    return p1**4 / 6 - p1**2 * p2 + p2**2 / 2 + 4 * p1 * p3 / 3


def cayley_hamilton_residual(m, atol: float = ATOL) -> float:
    """``max |m^3 - e1 m^2 + e2 m - e3 I|`` for a symmetric 3x3 ``m``."""
    m = _check_symmetric(m, atol)
    if m.shape != (3, 3):
        raise NotSymmetric(f"expected 3x3, got {m.shape}")
    e1, e2, e3 = elementary_from_power(*power_sums(m, 3, atol))
    m2 = m @ m
    r = m2 @ m - e1 * m2 + e2 * m - e3 * np.eye(3)
    return float(np.max(np.abs(r)))


def rotate_tensors(t: BlochTensors, rotations) -> BlochTensors:
    """Apply ``O_j1 x ... x O_jM`` to every tensor ``T_{j1..jM}``.

    ``rotations[j - 1]`` acts on qubit ``j``.  For ``O_j = su2_to_so3(U_j)``
    this is the Bloch image of conjugation by ``U_1 x ... x U_N``.
    """
    out = {}
    for subset, arr in t.tensors.items():
        for axis, q in enumerate(subset):
            arr = np.moveaxis(np.tensordot(rotations[q - 1], arr, axes=([1], [axis])), 0, axis)
        out[subset] = arr
    return BlochTensors(t.n_qubits, out)
