"""
A state and its transpose
=========================

Transposing a density matrix flips the sign of every ``y`` Pauli component.
On each qubit that is the reflection diag(1, -1, 1), which has determinant
-1 and is not a rotation.  All polynomial invariants built from inner
products and traces are blind to it, so they agree, yet the only orthogonal
maps that match the orbit vectors are improper.

The decision procedure reports such pairs as ``Equivalent`` with
``certified_by_invariants_only`` set and no witness.  This example shows why a
witness cannot be found: equal invariants alone do not certify equivalence
here.
"""

import numpy as np

from blochlu import decide_equivalence, extract_tensors, random_density, validate_density
from blochlu.decide import witness_rotations
from blochlu.errors import ConstructionFailure

rng = np.random.default_rng(5)
rho = random_density(2, rng=rng)
rho_t = validate_density(rho.matrix.T)

d = decide_equivalence(rho, rho_t)
print(d.verdict, "| certified_by_invariants_only =", d.certified_by_invariants_only)
print(d.notes)

# %%
# The per-qubit solve finds orthogonal maps, but every candidate has det -1.

try:
    witness_rotations(extract_tensors(rho), extract_tensors(rho_t))
except ConstructionFailure as exc:
    for label, tried in exc.diagnostics.items():
        print(label, "determinants of candidate maps:", sorted({round(c["det"], 6) for c in tried}))

# %%
# A determinant-sensitive quantity does separate them, for example the
# pseudoscalar det of the 3x3 matrix of orbit vectors T1, T12 T2, T12 T12' T1.

def orbit_det(state):
    t = extract_tensors(state)
    m = t[1, 2]
    return np.linalg.det(np.column_stack([t[1], m @ t[2], m @ m.T @ t[1]]))

print("orbit determinant:", orbit_det(rho), "vs", orbit_det(rho_t))
