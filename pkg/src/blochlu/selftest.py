"""Randomized property suites, shared by ``blochlu selftest``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import cayley_hamilton_residual, extract_tensors, reconstruct_density, rotate_tensors
from .decide import Verdict, compare_invariants, decide_equivalence
from .invariants import compute_invariants
from .qstate import (
    apply_local_unitary,
    random_density,
    random_local_unitary,
    random_su2,
    so3_to_su2,
    su2_to_so3,
)


@dataclass
class SuiteResult:
    name: str
    trials: int
    failures: int
    worst: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _roundtrip(rng, i):
    rho = random_density(1 + i % 4, rng=rng)
    return float(np.max(np.abs(reconstruct_density(extract_tensors(rho)).matrix - rho.matrix))), 1e-10


def _cover(rng, i):
    u, v = random_su2(rng), random_su2(rng)
    back = so3_to_su2(su2_to_so3(u))
    err = min(np.max(np.abs(back - u)), np.max(np.abs(back + u)))
    hom = np.max(np.abs(su2_to_so3(u @ v) - su2_to_so3(u) @ su2_to_so3(v)))
    return float(max(err, hom)), 1e-10


def _covariance(rng, i):
    n = 2 + i % 2
    rho, lu = random_density(n, rng=rng), random_local_unitary(n, rng)
    t_rot = rotate_tensors(extract_tensors(rho), [su2_to_so3(u) for u in lu.factors])
    t_new = extract_tensors(apply_local_unitary(rho, lu))
    return max(float(np.max(np.abs(t_rot.tensors[s] - t_new.tensors[s]))) for s in t_new.tensors), 1e-9


def _invariance(rng, i):
    n = 2 + i % 2
    rho, lu = random_density(n, rng=rng), random_local_unitary(n, rng)
    a = compute_invariants(extract_tensors(rho))
    b = compute_invariants(extract_tensors(apply_local_unitary(rho, lu)))
    rep = compare_invariants(a, b, rtol=1e-8, atol=0.0)
    return max(rep.max_violation, 0.0), 0.0


def _cayley_hamilton(rng, i):
    a = rng.uniform(-1, 1, (3, 3))
    m = (a + a.T) / 2
    return cayley_hamilton_residual(m), 1e-9


def _completeness(rng, i):
    rho, lu = random_density(2, rng=rng), random_local_unitary(2, rng)
    d = decide_equivalence(rho, apply_local_unitary(rho, lu))
    ok = d.verdict is Verdict.EQUIVALENT and d.witness is not None
    return (d.residual if ok else np.inf), 1e-7


def _discrimination(rng, i):
    d = decide_equivalence(random_density(2, rng=rng), random_density(2, rng=rng))
    return (0.0 if d.verdict is Verdict.INEQUIVALENT else 1.0), 0.0


SUITES = {
    "bloch-roundtrip": _roundtrip,
    "double-cover": _cover,
    "covariance": _covariance,
    "invariance": _invariance,
    "cayley-hamilton": _cayley_hamilton,
    "completeness": _completeness,
    "discrimination": _discrimination,
}


def run_selftest(trials: int = 20, seed: int | None = 0, suites=None) -> list:
    """Run each suite ``trials`` times; the worst error per suite is reported."""
    results = []
    if trials <= 0:
        return results
    for k, name in enumerate(suites or SUITES):
        rng = np.random.default_rng([seed if seed is not None else 0, k])
        failures, worst = 0, 0.0
        for i in range(trials):
            err, tol = SUITES[name](rng, i)
            worst = max(worst, err)
            failures += err > tol
        results.append(SuiteResult(name, trials, failures, worst))
    return results
