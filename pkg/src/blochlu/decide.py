"""LU-equivalence decisions with witness reconstruction.

The pipeline extracts Bloch tensors, handles the two-qubit case with
vanishing local vectors separately, compares the invariant vectors, gates on
genericity and finally rebuilds one SO(3) rotation per qubit from the orbit
families.  An ``Equivalent`` verdict always comes with a witness that has
been checked by direct conjugation, except when only improper orthogonal
maps fit the data (``certified_by_invariants_only``).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg

from .bloch import BlochTensors, extract_tensors, reconstruct_density
from .errors import (
    ArityMismatch,
    ConstructionFailure,
    NotGeneric,
    PreconditionViolated,
    QubitMismatch,
    SchemeMismatch,
    UnsupportedQubitCount,
)
from .invariants import (
    RANK_TOL,
    GenericityReport,
    InvariantVector,
    compute_invariants,
    evaluate_families,
    genericity,
    local_families,
    numerical_rank,
    two_qubit_invariants,
)
from .qstate import DensityState, LocalUnitary, so3_to_su2


class Verdict(str, enum.Enum):
    EQUIVALENT = "Equivalent"
    INEQUIVALENT = "Inequivalent"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class DecideConfig:
    rtol: float = 1e-8           # invariant comparison
    atol: float = 1e-10
    verify_tol: float = 1e-7     # max-abs conjugation residual of a witness
    rank_tol: float = RANK_TOL
    polar_tol: float = 1e-6      # allowed departure of a solved map from O(3)
    extended: bool = False
    max_alternates: int = 20


@dataclass(frozen=True)
class Separating:
    label: str
    value: float
    value_prime: float

    @property
    def gap(self) -> float:
        return abs(self.value - self.value_prime)


@dataclass(frozen=True)
class MatchReport:
    matched: bool
    first: Separating | None = None
    largest: Separating | None = None
    max_violation: float = 0.0
    n_failed: int = 0


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    witness: LocalUnitary | None = None
    separating: Separating | None = None
    genericity: tuple = (None, None)
    residual: float | None = None
    certified_by_invariants_only: bool = False
    branch: str = ""
    notes: str = ""
    rotations: tuple = field(default=(), repr=False)

    @property
    def exit_code(self) -> int:
        return {Verdict.EQUIVALENT: 0, Verdict.INEQUIVALENT: 1, Verdict.INCONCLUSIVE: 2}[self.verdict]


def compare_invariants(a: InvariantVector, b: InvariantVector,
                       rtol: float = 1e-8, atol: float = 1e-10) -> MatchReport:
    """Entrywise ``|a - b| <= atol + rtol * max(|a|, |b|)``.

    Reports the first failing label, the label with the largest absolute gap
    and the largest violation of the bound.
    """
    if a.scheme != b.scheme or a.labels != b.labels:
        raise SchemeMismatch(f"cannot compare {a.scheme} with {b.scheme}")
    x, y = a.values, b.values
    gap = np.abs(x - y)
    excess = gap - (atol + rtol * np.maximum(np.abs(x), np.abs(y)))
    bad = np.flatnonzero(excess > 0)
    if bad.size == 0:
        return MatchReport(True, max_violation=float(excess.max(initial=-np.inf)))
    i = int(bad[0])
    j = int(bad[np.argmax(gap[bad])])
    return MatchReport(
        False,
        Separating(a.labels[i], float(x[i]), float(y[i])),
        Separating(a.labels[j], float(x[j]), float(y[j])),
        float(excess.max()),
        int(bad.size),
    )


def verify_witness(rho: DensityState, rho_prime: DensityState, lu: LocalUnitary) -> float:
    """``max |rho' - U rho U^dag|`` with ``U`` the tensor product of the factors."""
    if lu.n_qubits != rho.n_qubits or rho.n_qubits != rho_prime.n_qubits:
        raise ArityMismatch(
            f"{lu.n_qubits} factors for states of {rho.n_qubits} and {rho_prime.n_qubits} qubits")
    u = lu.matrix()
    return float(np.max(np.abs(rho_prime.matrix - u @ rho.matrix @ u.conj().T)))


# ------------------------------------------------------------------ witness

def _candidate_triples(cols, limit):
    norms = np.linalg.norm(cols, axis=0)
    usable = np.flatnonzero(norms > 0)
    unit = cols[:, usable] / norms[usable]
    # greedy max-volume pick first, then the remaining triples by volume
    _, _, piv = scipy.linalg.qr(unit, pivoting=True)
    first = tuple(sorted(usable[piv[:3]]))
    rest = sorted(
        (tuple(usable[list(c)]) for c in combinations(range(usable.size), 3)),
        key=lambda c: -abs(np.linalg.det(cols[:, c] / norms[list(c)])),
    )
    out = [first] + [c for c in rest if c != first]
    return out[:limit + 1]


def _nearest_orthogonal(m):
    w, _, vt = np.linalg.svd(m)
    q = w @ vt
    return q, float(np.max(np.abs(m - q)))


def _solve_rotation(cols, cols_p, cfg):
    """Orthogonal map sending ``cols`` onto ``cols_p`` from a well-conditioned triple."""
    tried = []
    for triple in _candidate_triples(cols, cfg.max_alternates):
        basis, basis_p = cols[:, triple], cols_p[:, triple]
        if abs(np.linalg.det(basis)) == 0:
            continue
        m = basis_p @ np.linalg.inv(basis)
        q, polar_res = _nearest_orthogonal(m)
        det = float(np.linalg.det(q))
        tried.append({"columns": triple, "det": det, "polar_residual": polar_res})
        if det > 0 and polar_res <= cfg.polar_tol:
            return q, tried
    return None, tried


def witness_rotations(t: BlochTensors, t_prime: BlochTensors, config: DecideConfig | None = None):
    """One SO(3) matrix per qubit, solved from the per-qubit R^3 families."""
    cfg = config or DecideConfig()
    if t.n_qubits != t_prime.n_qubits:
        raise QubitMismatch(f"{t.n_qubits} vs {t_prime.n_qubits} qubits")
    fams = local_families(t.n_qubits)
    ev, ev_p = evaluate_families(fams, t), evaluate_families(fams, t_prime)
    rotations, diagnostics, improper = [], {}, False
    for (fam, cols), (_, cols_p) in zip(ev, ev_p):
        for c, which in ((cols, "first"), (cols_p, "second")):
            r, _ = numerical_rank(c, cfg.rank_tol)
            if r != 3:
                raise NotGeneric(f"family {fam.label} of the {which} state has rank {r}")
        q, tried = _solve_rotation(cols, cols_p, cfg)
        diagnostics[fam.label] = tried
        if q is None:
            improper |= any(d["det"] < 0 and d["polar_residual"] <= cfg.polar_tol for d in tried)
            rotations.append(None)
        else:
            rotations.append(q)
    if any(q is None for q in rotations):
        bad = [f.label for f, q in zip(fams, rotations) if q is None]
        raise ConstructionFailure(f"no proper rotation found for families {bad}", diagnostics, improper)
    return rotations, diagnostics


def reconstruct_witness(t: BlochTensors, t_prime: BlochTensors,
                        config: DecideConfig | None = None) -> LocalUnitary:
    """SU(2) lifts of the per-qubit rotations; the caller must verify them."""
    rotations, _ = witness_rotations(t, t_prime, config)
    return LocalUnitary(tuple(so3_to_su2(q) for q in rotations))


# --------------------------------------------------------------- degenerate

def _is_degenerate(t: BlochTensors, atol: float) -> bool:
    return all(float(np.max(np.abs(t.local(j)))) <= atol for j in (1, 2))


def _proper_svd(m):
    l, s, rt = np.linalg.svd(m)
    r = rt.T
    if np.linalg.det(l) < 0:
        l[:, -1] *= -1
        r[:, -1] *= -1
    return l, s, r


def degenerate_two_qubit_decide(t: BlochTensors, t_prime: BlochTensors,
                                config: DecideConfig | None = None,
                                states: tuple | None = None) -> Decision:
    """Decide two-qubit states whose local Bloch vectors both vanish.

    Equivalence needs equal singular values of ``T12`` (equivalently the
    three traces) and, since proper rotations preserve it, equal ``det T12``.
    """
    cfg = config or DecideConfig()
    if t.n_qubits != 2 or t_prime.n_qubits != 2:
        raise PreconditionViolated("degenerate branch is two-qubit only")
    if not (_is_degenerate(t, cfg.atol) and _is_degenerate(t_prime, cfg.atol)):
        raise PreconditionViolated("local Bloch vectors must vanish for both states")
    gen = (genericity(t, cfg.rank_tol), genericity(t_prime, cfg.rank_tol))
    inv, inv_p = two_qubit_invariants(t), two_qubit_invariants(t_prime)
    traces = [i for i, lab in enumerate(inv.labels) if lab.startswith("tr(")]
    sub = InvariantVector("traces", tuple(inv.labels[i] for i in traces), inv.values[traces])
    sub_p = InvariantVector("traces", sub.labels, inv_p.values[traces])
    match = compare_invariants(sub, sub_p, cfg.rtol, cfg.atol)
    if not match.matched:
        return Decision(Verdict.INEQUIVALENT, separating=match.largest, genericity=gen, branch="degenerate")

    m, m_p = t[1, 2], t_prime[1, 2]
    d, d_p = float(np.linalg.det(m)), float(np.linalg.det(m_p))
    if abs(d - d_p) > cfg.atol + cfg.rtol * max(abs(d), abs(d_p)):
        return Decision(Verdict.INEQUIVALENT, separating=Separating("det(T12)", d, d_p), genericity=gen,
                        branch="degenerate",
                        notes="singular values agree but det(T12) has opposite sign")

    l, s, r = _proper_svd(m)
    l_p, s_p, r_p = _proper_svd(m_p)
    if np.linalg.det(r) * np.linalg.det(r_p) < 0:
        # only reachable when the smallest singular value vanishes
        r_p[:, -1] *= -1
    o1, o2 = l_p @ l.T, r_p @ r.T
    lu = LocalUnitary((so3_to_su2(o1), so3_to_su2(o2)))
    rho, rho_p = states if states is not None else (reconstruct_density(t), reconstruct_density(t_prime))
    res = verify_witness(rho, rho_p, lu)
    if res <= cfg.verify_tol:
        return Decision(Verdict.EQUIVALENT, witness=lu, genericity=gen, residual=res,
                        branch="degenerate", rotations=(o1, o2))
    return Decision(Verdict.INCONCLUSIVE, genericity=gen, residual=res, branch="degenerate",
                    notes="singular-value witness failed verification")


# ------------------------------------------------------------------ pipeline

def decide_equivalence(rho: DensityState, rho_prime: DensityState,
                       config: DecideConfig | None = None) -> Decision:
    cfg = config or DecideConfig()
    if rho.n_qubits != rho_prime.n_qubits:
        raise QubitMismatch(f"{rho.n_qubits} vs {rho_prime.n_qubits} qubits")
    n = rho.n_qubits
    if not 2 <= n <= 4:
        raise UnsupportedQubitCount(f"decisions support 2..4 qubits, got {n}")

    ident = LocalUnitary.identity(n)
    res = verify_witness(rho, rho_prime, ident)
    if res <= cfg.verify_tol:
        return Decision(Verdict.EQUIVALENT, witness=ident, residual=res, branch="identical",
                        rotations=tuple(np.eye(3) for _ in range(n)))

    t, t_p = extract_tensors(rho), extract_tensors(rho_prime)
    if n == 2 and _is_degenerate(t, cfg.atol) and _is_degenerate(t_p, cfg.atol):
        return degenerate_two_qubit_decide(t, t_p, cfg, states=(rho, rho_prime))

    gen = (genericity(t, cfg.rank_tol), genericity(t_p, cfg.rank_tol))
    inv = compute_invariants(t, extended=cfg.extended)
    inv_p = compute_invariants(t_p, extended=cfg.extended)
    match = compare_invariants(inv, inv_p, cfg.rtol, cfg.atol)
    if not match.matched:
        return Decision(Verdict.INEQUIVALENT, separating=match.largest, genericity=gen,
                        branch="invariants")
    if not (gen[0].generic and gen[1].generic):
        return Decision(Verdict.INCONCLUSIVE, genericity=gen, branch="genericity",
                        notes="invariants agree but a state is not generic")
    try:
        rotations, _ = witness_rotations(t, t_p, cfg)
    except ConstructionFailure as exc:
        if exc.improper:
            return Decision(Verdict.EQUIVALENT, genericity=gen, certified_by_invariants_only=True,
                            branch="witness",
                            notes="invariants agree; only improper orthogonal maps fit the orbit data")
        return Decision(Verdict.INCONCLUSIVE, genericity=gen, branch="witness", notes=str(exc))
    lu = LocalUnitary(tuple(so3_to_su2(q) for q in rotations))
    res = verify_witness(rho, rho_prime, lu)
    if res <= cfg.verify_tol:
        return Decision(Verdict.EQUIVALENT, witness=lu, genericity=gen, residual=res,
                        branch="witness", rotations=tuple(rotations))
    return Decision(Verdict.INCONCLUSIVE, genericity=gen, residual=res, branch="witness",
                    notes="reconstructed witness failed verification")
