"""Symbolic tensor words and the orbit families built from them.

A word is a product of tensor symbols read right to left: the rightmost
symbol is a vector, every other symbol is a matrix, and neighbouring symbols
must agree on the qubit set they share ("adjacent subindices match").

Symbols
-------
``Atom(rows, cols)``
    The correlation tensor of ``rows | cols`` folded with rows over ``rows``
    and columns over ``cols``.  ``cols == ()`` is a vector symbol: the tensor
    of ``rows`` flattened into ``R^(3**len(rows))``.
``Realign(word)``
    A matrix-valued word (rows ``A``, columns ``B``) flattened into a vector
    over ``A | B`` in ascending qubit order, e.g. ``[T23 T23' T23]``.

Text syntax: ``T1``, ``T12``, ``T12'`` (transpose), ``T1|23``, ``T1|23'``,
``(T12 T12')^2`` for powers and ``[...]`` for a realigned matrix word.  A
plain multi-index symbol such as ``T23`` is a vector when it closes a word
and the matrix ``T2|3`` anywhere else.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .bloch import BlochTensors, fold
from .errors import MissingTensor, UnsupportedQubitCount, WordSyntaxError


def _digits(qubits) -> str:
    return "".join(str(q) for q in qubits)


@dataclass(frozen=True)
class Atom:
    rows: tuple
    cols: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(sorted(self.rows)))
        object.__setattr__(self, "cols", tuple(sorted(self.cols)))

    @property
    def is_vector(self) -> bool:
        return not self.cols

    @property
    def qubits(self) -> tuple:
        return tuple(sorted(self.rows + self.cols))

    @property
    def T(self) -> "Atom":
        return Atom(self.cols, self.rows)

    def __str__(self):
        if self.is_vector:
            return "T" + _digits(self.rows)
        r, c = self.rows, self.cols
        allq = self.qubits
        if len(allq) == 2:
            return f"T{_digits(allq)}" + ("" if r[0] == allq[0] else "'")
        if len(r) < len(c) or (len(r) == len(c) and r[0] == allq[0]):
            return f"T{_digits(r)}|{_digits(c)}"
        return f"T{_digits(c)}|{_digits(r)}'"


@dataclass(frozen=True)
class Realign:
    inner: "Word"

    @property
    def rows(self) -> tuple:
        return tuple(sorted(self.inner.rows + self.inner.cols))

    cols = ()
    is_vector = True

    def __str__(self):
        return f"[{self.inner}]"


@dataclass(frozen=True)
class Word:
    atoms: tuple

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.atoms:
            raise WordSyntaxError("empty word")

    @property
    def rows(self) -> tuple:
        return self.atoms[0].rows

    @property
    def cols(self) -> tuple:
        return self.atoms[-1].cols

    @property
    def target(self) -> tuple:
        """Qubits of the space the word evaluates into."""
        return self.rows

    @property
    def dimension(self) -> int:
        return 3 ** len(self.rows)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.atoms + other.atoms)

    def __str__(self):
        return _format_atoms(self.atoms)

    def __repr__(self):
        return f"Word({str(self)!r})"


def _format_atoms(atoms) -> str:
    parts = []
    i = 0
    while i < len(atoms):
        a = atoms[i]
        if i + 1 < len(atoms) and not a.is_vector and isinstance(a, Atom):
            block = atoms[i:i + 2]
            k = 1
            while atoms[i + 2 * k:i + 2 * k + 2] == block:
                k += 1
            if k > 1:
                parts.append(f"({block[0]} {block[1]})^{k}")
                i += 2 * k
                continue
        parts.append(str(a))
        i += 1
    return " ".join(parts)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(T)(\d+)(?:\|(\d+))?('?)|(\()|(\))|\^(\d+)|(\[)|(\]))")


def _tokenize(text):
    pos, toks = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected character at offset {pos}: {text[pos:pos + 8]!r}", pos)
        toks.append((m, m.start()))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def items(self, closer=None):
        """Parse until ``closer``; returns list of raw atoms (tuples)."""
        out = []
        while True:
            m = self.peek()
            if m is None:
                if closer:
                    raise WordSyntaxError(f"missing {closer!r}", len(self.text))
                return out
            if m.group(6) and closer == ")" or m.group(9) and closer == "]":
                self.i += 1
                return out
            self.i += 1
            if m.group(1):
                rows = tuple(int(c) for c in m.group(2))
                cols = tuple(int(c) for c in m.group(3)) if m.group(3) else None
                out.append(("sym", rows, cols, bool(m.group(4)), m.start()))
            elif m.group(5):
                inner = self.items(")")
                power = 1
                nxt = self.peek()
                if nxt is not None and nxt.group(7):
                    power = int(nxt.group(7))
                    self.i += 1
                out.extend(inner * power)
            elif m.group(8):
                inner = self.items("]")
                out.append(("realign", inner, m.start()))
            else:
                raise WordSyntaxError(f"unbalanced {m.group(0).strip()!r}", m.start())


def _build(raw, closes_word):
    atoms = []
    for k, item in enumerate(raw):
        if item[0] == "realign":
            inner = _build(item[1], closes_word=False)
            atoms.append(Realign(Word(inner)))
            continue
        _, idx, cols, prime, pos = item
        if len(set(idx + (cols or ()))) != len(idx + (cols or ())):
            raise WordSyntaxError(f"repeated qubit in symbol at offset {pos}", pos)
        if cols is not None:
            a = Atom(idx, cols)
        elif len(idx) == 1 or (closes_word and k == len(raw) - 1 and not prime):
            a = Atom(idx)
        else:
            a = Atom(idx[:1], idx[1:])
        if prime:
            if a.is_vector:
                raise WordSyntaxError(f"transpose of a vector symbol at offset {pos}", pos)
            a = a.T
        atoms.append(a)
    return tuple(atoms)


def parse_word(text: str, check: bool = True) -> Word:
    """Parse word text; inadmissible words raise :class:`WordSyntaxError`."""
    raw = _Parser(text).items()
    if not raw:
        raise WordSyntaxError("empty word", 0)
    w = Word(_build(raw, closes_word=True))
    if check:
        j = first_bad_junction(w)
        if j is not None:
            raise WordSyntaxError(f"inadmissible word {text!r}: {_junction_msg(w.atoms, j)}", j)
    return w


# ------------------------------------------------------------ admissibility

def _junction_msg(atoms, j):
    if j == len(atoms):
        return "word must end in a vector symbol"
    return f"junction {j} ({atoms[j - 1]} | {atoms[j]}) does not match"


def _bad_junction(atoms, as_matrix):
    for j in range(1, len(atoms)):
        left, right = atoms[j - 1], atoms[j]
        if left.is_vector or left.cols != right.rows:
            return j
    for a in atoms:
        if isinstance(a, Realign) and _bad_junction(a.inner.atoms, as_matrix=True) is not None:
            return atoms.index(a) + 1
    last = atoms[-1]
    if last.is_vector == as_matrix:
        return len(atoms)
    return None


def first_bad_junction(w) -> int | None:
    """1-based junction where admissibility fails (``len(word)`` for a bad ending)."""
    atoms = w.atoms if isinstance(w, Word) else tuple(w)
    return _bad_junction(atoms, as_matrix=False)


def admissible(w) -> bool:
    """True iff neighbouring symbols share their qubit set and the word ends in a vector."""
    if isinstance(w, str):
        try:
            w = parse_word(w, check=False)
        except WordSyntaxError:
            return False
    return first_bad_junction(w) is None


# ----------------------------------------------------------------- families

@dataclass(frozen=True)
class OrbitSet:
    label: str
    target: tuple
    words: tuple = field(default_factory=tuple)

    @property
    def dimension_bound(self) -> int:
        return 3 ** len(self.target)

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


def seed_words(subset) -> list:
    """Words built from ``T_subset`` alone that transform like ``T_subset``.

    The plain vector symbol, then ``[(T_p|r T_p|r')^beta T_p|r]`` for
    ``beta = 1, 2, 3`` with ``p`` the smallest qubit of the subset.
    """
    subset = tuple(sorted(subset))
    out = [Word((Atom(subset),))]
    if len(subset) > 1:
        m = Atom(subset[:1], subset[1:])
        for beta in range(1, 4):
            out.append(Word((Realign(Word((m, m.T) * beta + (m,))),)))
    return out


def _complement(n_qubits, target):
    return tuple(q for q in range(1, n_qubits + 1) if q not in target)


def orbit_generators(n_qubits: int, target, cross_terms: bool = True) -> list:
    """Generating words of the family on ``target``.

    Seeds of ``target``, then ``T_{target|rest}`` applied to the seeds of the
    complement; with ``cross_terms`` also ``T_{target|rest} T_{rest|K} s``
    for proper nonempty ``K`` of the target and seeds ``s`` of ``K``.
    """
    tgt = tuple(sorted(target))
    comp = _complement(n_qubits, tgt)
    if not comp:
        return seed_words(tgt)
    m = Atom(tgt, comp)
    gens = seed_words(tgt)
    gens += [Word((m,)) + s for s in seed_words(comp)]
    if cross_terms:
        for size in range(1, len(tgt)):
            for k in combinations(tgt, size):
                link = Atom(comp, k)
                gens += [Word((m, link)) + s for s in seed_words(k)]
    return gens


def orbit_family(n_qubits: int, target, degree_cap: int | None = None,
                 cross_terms: bool = True, label: str | None = None) -> OrbitSet:
    """The ``(T_{t|c} T_{t|c}')``-orbit of :func:`orbit_generators`.

    Powers run ``0..degree_cap`` (default ``3**len(target) - 1``, the
    Cayley-Hamilton bound); words are ordered by power, then generator.
    """
    tgt = tuple(sorted(target))
    comp = _complement(n_qubits, tgt)
    if degree_cap is None:
        degree_cap = 3 ** len(tgt) - 1
    gens = orbit_generators(n_qubits, tgt, cross_terms)
    if comp:
        m = Atom(tgt, comp)
        step = (m, m.T)
    else:
        degree_cap, step = 0, ()
    seen, words = set(), []
    for p in range(degree_cap + 1):
        for g in gens:
            w = Word(step * p + g.atoms)
            if w not in seen:
                seen.add(w)
                words.append(w)
    if label is None:
        seq = tuple(target)
        label = f"O{_digits(seq)}" + (f"|{_digits(comp)}" if comp else "")
    return OrbitSet(label, tgt, tuple(words))


def two_qubit_orbits() -> tuple:
    """The two six-word families ``<O1>`` and ``<O2>`` of a two-qubit state."""
    return (orbit_family(2, (1,), label="O1"), orbit_family(2, (2,), label="O2"))


THREE_QUBIT_LABELS = ("O1|23", "O2|31", "O3|12", "O23|1", "O31|2", "O12|3")


def three_qubit_orbits() -> list:
    """Three R^3 families followed by three R^9 families of a three-qubit state."""
    targets = [(1,), (2,), (3,), (2, 3), (1, 3), (1, 2)]
    return [orbit_family(3, t, cross_terms=False, label=lab)
            for t, lab in zip(targets, THREE_QUBIT_LABELS)]


def enumerate_words(n_qubits: int, target, degree_cap: int | None = None) -> OrbitSet:
    if not 2 <= n_qubits <= 4:
        raise UnsupportedQubitCount(f"word enumeration supports 2..4 qubits, got {n_qubits}")
    if isinstance(target, (int, np.integer)):
        target = (int(target),)
    target = tuple(target)
    if (len(set(target)) != len(target) or not target
            or not set(target) <= set(range(1, n_qubits + 1))
            or len(target) == n_qubits):
        raise UnsupportedQubitCount(f"target {target} is not a proper strict sequence of 1..{n_qubits}")
    return orbit_family(n_qubits, target, degree_cap)


def pivot_families(n_qubits: int) -> list:
    """Single-pivot families: ``<O_i>`` and its complement family for every qubit."""
    return list(_pivot_families(n_qubits))


@lru_cache(maxsize=None)
def _pivot_families(n_qubits):
    if n_qubits == 2:
        return two_qubit_orbits()
    if n_qubits == 3:
        return tuple(three_qubit_orbits())
    if n_qubits != 4:
        raise UnsupportedQubitCount(f"families are defined for 2..4 qubits, got {n_qubits}")
    fams = [enumerate_words(4, (i,)) for i in range(1, 5)]
    fams += [enumerate_words(4, _complement(4, (i,))) for i in range(1, 5)]
    return tuple(fams)


def families_by_label(n_qubits: int) -> dict:
    return {f.label: f for f in pivot_families(n_qubits)}


# --------------------------------------------------------------- evaluation

class WordEvaluator:
    """Evaluates words against one set of tensors, caching folds and suffixes."""

    def __init__(self, t: BlochTensors):
        self.t = t
        self._mats = {}
        self._suffix = {}

    def matrix(self, atom: Atom) -> np.ndarray:
        key = (atom.rows, atom.cols)
        if key not in self._mats:
            self._mats[key] = fold(self.t, atom.qubits, atom.rows).matrix
        return self._mats[key]

    def vector(self, atom) -> np.ndarray:
        if isinstance(atom, Realign):
            inner = atom.inner
            mat = self.matrix(inner.atoms[0])
            for a in inner.atoms[1:]:
                mat = mat @ self.matrix(a)
            order = inner.rows + inner.cols
            arr = mat.reshape((3,) * len(order))
            return np.transpose(arr, np.argsort(order)).ravel()
        if atom.rows not in self.t:
            raise MissingTensor(f"no tensor for {atom}")
        return self.t[atom.rows].ravel()

    def __call__(self, w: Word) -> np.ndarray:
        atoms = w.atoms
        # longest cached suffix; orbit words share suffixes with lower powers
        k = next((k for k in range(len(atoms)) if atoms[k:] in self._suffix), None)
        if k is None:
            k = len(atoms) - 1
            v = self._suffix[atoms[k:]] = self.vector(atoms[k])
        else:
            v = self._suffix[atoms[k:]]
        for j in range(k - 1, -1, -1):
            v = self._suffix[atoms[j:]] = self.matrix(atoms[j]) @ v
        return v


def evaluate_word(w, t: BlochTensors) -> np.ndarray:
    if isinstance(w, str):
        w = parse_word(w)
    return WordEvaluator(t)(w)


def evaluate_family(family: OrbitSet, t: BlochTensors, evaluator: WordEvaluator | None = None) -> np.ndarray:
    """Columns are the evaluated words of the family, in order."""
    ev = evaluator or WordEvaluator(t)
    if not family.words:
        return np.zeros((family.dimension_bound, 0))
    return np.column_stack([ev(w) for w in family.words])
