"""SLOCC equivalence classes of nonlocal gates through their Choi states."""

from .cartan import CartanParams, TwoQubitClass, cartan_decompose, choi_coefficients, mu_invariants, rank_from_mu, two_qubit_class
from .choi import GateDescriptor, PureState, bell_state, choi_state, implement_via_state, mes, operator_from_choi
from .schmidt import (
    SchmidtData,
    entanglement_entropy,
    multicopy_schmidt_number,
    operator_schmidt_rank,
    schmidt_decompose,
    schmidt_number,
)
from .slocc import (
    Method,
    SloccVerdict,
    ThreeQubitClass,
    ThreeQubitLabel,
    can_generate,
    can_simulate,
    can_simulate_multicopy,
    classify_three_qubit,
    four_qubit_family,
    four_qubit_invariant_ratio,
    operator_class,
    pairwise_inequivalence_demo,
    uw_generation_demo,
    xxx_choi_class,
)
from .tensor import PartyStructure, haar_random_unitary, kron, partial_trace, reshuffle_operator, svd

__version__ = "0.1.0"
