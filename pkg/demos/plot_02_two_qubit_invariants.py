"""
Twelve numbers for two qubits
=============================

Local unitaries rotate each qubit's Bloch index by an SO(3) matrix, so inner
products of vectors built from ``T1``, ``T2`` and ``T12`` do not change.  The
two-qubit scheme lists twelve of them.  Here we print the list for a product
state, check invariance on a random state and look at the words behind it.
"""

import numpy as np

from blochlu import (
    apply_local_unitary,
    compute_invariants,
    extract_tensors,
    pure_state_density,
    random_density,
    random_local_unitary,
    two_qubit_orbits,
)

# %%
# The orbit families: six words each, all ending in a local vector.

o1, o2 = two_qubit_orbits()
for fam in (o1, o2):
    print(fam.label, [str(w) for w in fam.words])

# %%
# For ``|00>`` every entry is a power of 1/4.

inv = compute_invariants(extract_tensors(pure_state_density([1, 0, 0, 0])))
for label, value in inv:
    print(f"{label:28s} {value:.10g}")

# %%
# Rotating the qubits independently leaves the list unchanged.

rng = np.random.default_rng(7)
rho = random_density(2, rng=rng)
moved = apply_local_unitary(rho, random_local_unitary(2, rng))
a = compute_invariants(extract_tensors(rho)).values
b = compute_invariants(extract_tensors(moved)).values
print("largest relative change:", np.max(np.abs(a - b) / np.abs(a)))
