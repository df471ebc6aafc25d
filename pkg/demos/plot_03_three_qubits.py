"""
Three qubits and realigned tensors
==================================

With three qubits the tensor ``T123`` enters through its realignments
``T_{i|jk}``.  The default scheme has 90 entries in six groups; words such as
``T1|23 T1|23' T1`` mix the local vector with the tripartite correlations.
"""

import numpy as np

from blochlu import (
    apply_local_unitary,
    compute_invariants,
    extract_tensors,
    genericity,
    random_density,
    random_local_unitary,
    three_qubit_orbits,
)

# %%
# The six families: three with values in R^3 and three in R^9.

for fam in three_qubit_orbits():
    print(f"{fam.label:6s} {len(fam.words):3d} words in R^{fam.dimension_bound}:",
          ", ".join(str(w) for w in fam.words[:3]), "...")

# %%
# A random state is generic: each R^3 family spans all of R^3.

rng = np.random.default_rng(11)
rho = random_density(3, rng=rng)
t = extract_tensors(rho)
rep = genericity(t)
for label, fr in rep.families.items():
    print(f"{label:6s} rank {fr.rank} / {fr.dimension}, smallest kept sigma {fr.singular_values[fr.rank - 1]:.2e}")

# %%
# The invariant list and its behaviour under local rotation.

inv = compute_invariants(t)
moved = compute_invariants(extract_tensors(apply_local_unitary(rho, random_local_unitary(3, rng))))
print(inv.scheme, len(inv), "entries; max abs change", np.max(np.abs(inv.values - moved.values)))
print("first realigned trace:", inv["tr(T1|23' T1|23)"])
