"""Local-unitary invariants of multi-qubit states from their Bloch tensors."""

__version__ = "0.1.0"

from .bloch import (
    BlochTensors,
    FoldedTensor,
    cayley_hamilton_residual,
    elementary_from_power,
    extract_tensors,
    fold,
    power_sums,
    reconstruct_density,
    rotate_tensors,
    unfold,
)
from .decide import (
    Decision,
    DecideConfig,
    Verdict,
    compare_invariants,
    decide_equivalence,
    degenerate_two_qubit_decide,
    reconstruct_witness,
    verify_witness,
)
from .invariants import (
    InvariantVector,
    compute_invariants,
    genericity,
    gram_invariants,
    three_qubit_invariants,
    two_qubit_invariants,
)
from .qstate import (
    DensityState,
    LocalUnitary,
    apply_local_unitary,
    pure_state_density,
    random_density,
    random_local_unitary,
    so3_to_su2,
    su2_to_so3,
    validate_density,
)
from .words import (
    OrbitSet,
    Word,
    admissible,
    enumerate_words,
    evaluate_word,
    parse_word,
    three_qubit_orbits,
    two_qubit_orbits,
)
