"""Polynomial LU invariants and genericity diagnostics.

Three schemes are available:

* ``TwoQubit12``: 9 inner products and 3 traces for two qubits.
* ``ThreeQubit90``: the 90-entry three-qubit list (``ThreeQubitExtended``
  appends the pair-symmetric completions).
* ``GramGeneric(N)``: all pairwise inner products inside each orbit family.

Every entry carries a canonical label built from the word text, e.g.
``<T1,(T12 T12')^2 T12 T2>`` or ``tr((T12 T12')^3)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bloch import BlochTensors, power_sums
from .errors import DimensionMismatch, UnsupportedQubitCount, WrongQubitCount
from .words import (
    Atom,
    OrbitSet,
    Word,
    WordEvaluator,
    _format_atoms,
    evaluate_family,
    pivot_families,
)

TWO_QUBIT = "TwoQubit12"
THREE_QUBIT = "ThreeQubit90"
THREE_QUBIT_EXTENDED = "ThreeQubitExtended"
RANK_TOL = 1e-10


def gram_scheme(n_qubits: int) -> str:
    return f"GramGeneric({n_qubits})"


@dataclass(frozen=True, eq=False)
class InvariantVector:
    scheme: str
    labels: tuple
    values: np.ndarray

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(zip(self.labels, self.values))

    def __getitem__(self, label):
        return float(self.values[self.index(label)])

    def index(self, label) -> int:
        """Position of the first entry carrying ``label``.

        The verbatim three-qubit list repeats ``<Ti,Ti>`` (k = 0 of the
        realigned block); repeated labels always carry equal values.
        """
        if not hasattr(self, "_index"):
            idx = {}
            for i, lab in enumerate(self.labels):
                idx.setdefault(lab, i)
            object.__setattr__(self, "_index", idx)
        return self._index[label]

    def as_dict(self) -> dict:
        return dict(zip(self.labels, self.values.tolist()))


class _Builder:
    def __init__(self, t: BlochTensors):
        self.ev = WordEvaluator(t)
        self.labels, self.values = [], []

    def inner(self, a: Word, b: Word):
        self.labels.append(f"<{a},{b}>")
        self.values.append(float(self.ev(a) @ self.ev(b)))

    def traces(self, atom: Atom, orders):
        # tr((A A')^l) for the folded matrix A
        a = self.ev.matrix(atom)
        sums = power_sums(a @ a.T, max(orders))
        for l in orders:
            self.labels.append(f"tr({_power_text(atom, l)})")
            self.values.append(sums[l - 1])

    def build(self, scheme):
        return InvariantVector(scheme, tuple(self.labels), np.array(self.values, dtype=float))


def _power_text(atom, l):
    return _format_atoms((atom, atom.T) * l)


def _orbit(atom, power, tail):
    return Word((atom, atom.T) * power + tuple(tail))


def _pair_block(b: _Builder, i: int, j: int):
    """Nine pair invariants of qubits ``i < j`` (two-qubit list without traces)."""
    m = Atom((i,), (j,))
    ti, tj = Word((Atom((i,)),)), Word((Atom((j,)),))
    for beta in range(3):
        b.inner(ti, _orbit(m, beta, ti.atoms))
    for beta in range(3):
        b.inner(tj, _orbit(m.T, beta, tj.atoms))
    for beta in range(3):
        b.inner(ti, _orbit(m, beta, (m,) + tj.atoms))


def two_qubit_invariants(t: BlochTensors) -> InvariantVector:
    if t.n_qubits != 2:
        raise WrongQubitCount(f"{TWO_QUBIT} needs 2 qubits, got {t.n_qubits}")
    b = _Builder(t)
    _pair_block(b, 1, 2)
    b.traces(Atom((1,), (2,)), (1, 2, 3))
    return b.build(TWO_QUBIT)


_PIVOTS = ((1, (2, 3)), (2, (1, 3)), (3, (1, 2)))


def _realigned_block(b: _Builder, pivot, rest):
    m = Atom((pivot,), rest)
    vec = Word((Atom(rest),))
    for k in range(9):
        b.inner(vec, _orbit(m.T, k, vec.atoms))
    for k in range(9):
        b.inner(vec, _orbit(m.T, k, (m.T, Atom((pivot,)))))


def three_qubit_invariants(t: BlochTensors, extended: bool = False) -> InvariantVector:
    """The 90 three-qubit invariants in their fixed group order.

    With ``extended`` the pair block is repeated for pairs (1,3), (2,3) and
    the realigned blocks for pivots 2 and 3 (144 entries in total).
    """
    if t.n_qubits != 3:
        raise WrongQubitCount(f"{THREE_QUBIT} needs 3 qubits, got {t.n_qubits}")
    b = _Builder(t)
    _pair_block(b, 1, 2)
    for i, j in ((1, 2), (1, 3), (2, 3)):
        b.traces(Atom((i,), (j,)), (1, 2, 3))
    for pivot, rest in _PIVOTS:
        m = Atom((pivot,), rest)
        ti = Word((Atom((pivot,)),))
        for k in range(9):
            b.inner(ti, _orbit(m, k, ti.atoms))
    _realigned_block(b, 1, (2, 3))
    for pivot, rest in _PIVOTS:
        b.traces(Atom(rest, (pivot,)), range(1, 10))
    if not extended:
        return b.build(THREE_QUBIT)
    _pair_block(b, 1, 3)
    _pair_block(b, 2, 3)
    for pivot, rest in _PIVOTS[1:]:
        _realigned_block(b, pivot, rest)
    return b.build(THREE_QUBIT_EXTENDED)


def evaluate_families(families, t: BlochTensors) -> list:
    """``[(family, columns), ...]`` with one shared evaluation cache."""
    ev = WordEvaluator(t)
    return [(f, evaluate_family(f, t, ev)) for f in families]


def gram_invariants(evaluated, scheme: str | None = None) -> InvariantVector:
    """All inner products ``<v_i, v_j>`` (``i <= j``) inside each family.

    ``evaluated`` is a list of ``(OrbitSet, columns)`` pairs as returned by
    :func:`evaluate_families`.
    """
    labels, values = [], []
    for fam, cols in evaluated:
        cols = np.asarray(cols, dtype=float)
        if cols.ndim != 2 or cols.shape != (fam.dimension_bound, len(fam.words)):
            raise DimensionMismatch(
                f"family {fam.label}: expected {fam.dimension_bound}x{len(fam.words)} columns, got {cols.shape}")
        gram = cols.T @ cols
        iu, ju = np.triu_indices(len(fam.words))
        labels.extend(_gram_labels(fam))
        values.append(gram[iu, ju])
    vals = np.concatenate(values) if values else np.zeros(0)
    return InvariantVector(scheme or "Gram", tuple(labels), vals)


@lru_cache(maxsize=64)
def _gram_labels(fam: OrbitSet) -> tuple:
    names = [str(w) for w in fam.words]
    iu, ju = np.triu_indices(len(names))
    return tuple(f"<{names[i]},{names[j]}>" for i, j in zip(iu, ju))


def gram_generic_invariants(t: BlochTensors) -> InvariantVector:
    fams = pivot_families(t.n_qubits)
    return gram_invariants(evaluate_families(fams, t), gram_scheme(t.n_qubits))


def scheme_for(n_qubits: int) -> str:
    if n_qubits == 2:
        return TWO_QUBIT
    if n_qubits == 3:
        return THREE_QUBIT
    if n_qubits == 4:
        return gram_scheme(4)
    raise UnsupportedQubitCount(f"no invariant scheme for {n_qubits} qubits")


def compute_invariants(t: BlochTensors, scheme: str = "auto", extended: bool = False) -> InvariantVector:
    """Dispatch on scheme name: ``auto``, ``12``, ``90``, ``gram`` or a full scheme name."""
    aliases = {"12": TWO_QUBIT, "90": THREE_QUBIT, "gram": gram_scheme(t.n_qubits)}
    scheme = scheme_for(t.n_qubits) if scheme == "auto" else aliases.get(scheme, scheme)
    if scheme == TWO_QUBIT:
        return two_qubit_invariants(t)
    if scheme in (THREE_QUBIT, THREE_QUBIT_EXTENDED):
        return three_qubit_invariants(t, extended or scheme == THREE_QUBIT_EXTENDED)
    if scheme.startswith("GramGeneric"):
        return gram_generic_invariants(t)
    raise UnsupportedQubitCount(f"unknown scheme {scheme!r}")


# ---------------------------------------------------------------- genericity

@dataclass(frozen=True)
class FamilyRank:
    rank: int
    singular_values: tuple
    dimension: int


@dataclass(frozen=True)
class GenericityReport:
    families: dict = field(default_factory=dict)
    generic: bool = False
    rank_tol: float = RANK_TOL

    def rank(self, label) -> int:
        return self.families[label].rank


def numerical_rank(cols, rank_tol: float = RANK_TOL):
    s = np.linalg.svd(cols, compute_uv=False) if cols.size else np.zeros(0)
    thresh = rank_tol * max(1.0, float(s[0]) if s.size else 0.0)
    return int(np.sum(s > thresh)), s


def genericity(t: BlochTensors, rank_tol: float = RANK_TOL, families=None) -> GenericityReport:
    """Ranks of the orbit families; generic iff every R^3 family has rank 3."""
    if t.n_qubits not in (2, 3, 4):
        raise UnsupportedQubitCount(f"genericity is defined for 2..4 qubits, got {t.n_qubits}")
    fams = families if families is not None else pivot_families(t.n_qubits)
    out = {}
    for fam, cols in evaluate_families(fams, t):
        r, s = numerical_rank(cols, rank_tol)
        out[fam.label] = FamilyRank(r, tuple(float(x) for x in s), fam.dimension_bound)
    generic = all(fr.rank == 3 for fr in out.values() if fr.dimension == 3)
    return GenericityReport(out, generic, rank_tol)


def local_families(n_qubits: int) -> list:
    """The R^3 families, one per qubit, in qubit order."""
    return [f for f in pivot_families(n_qubits) if f.dimension_bound == 3]


__all__ = [
    "InvariantVector", "GenericityReport", "FamilyRank", "OrbitSet",
    "two_qubit_invariants", "three_qubit_invariants", "gram_invariants",
    "gram_generic_invariants", "evaluate_families", "genericity",
    "compute_invariants", "scheme_for", "numerical_rank", "local_families",
]
