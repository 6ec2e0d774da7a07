import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gateclass import gates
from gateclass.choi import GateDescriptor, PureState, choi_state, mes
from gateclass.schmidt import (
    choi_schmidt_number,
    entanglement_entropy,
    gate_tensor_power,
    multicopy_schmidt_number,
    operator_schmidt_rank,
    schmidt_decompose,
    schmidt_number,
)
from gateclass.tensor import PartyStructure, haar_random_unitary, random_state_vector


def locally_disguised(u, rng):
    """``(V (x) W) u (V' (x) W')`` for Haar local factors."""
    a, b, c, d = (haar_random_unitary(2, rng) for _ in range(4))
    return np.kron(a, b) @ u @ np.kron(c, d)


def test_mes_decomposition():
    data = schmidt_decompose(mes(2), [0])
    assert np.allclose(data.coefficients, [0.5, 0.5])
    assert data.rank == 2
    assert abs(entanglement_entropy(mes(2), [0]) - 1) < 1e-12


def test_product_decomposition():
    psi = PureState.from_vector([1, 0, 0, 0])
    data = schmidt_decompose(psi, ["A"])
    assert np.allclose(data.coefficients, [1]) and data.rank == 1
    assert entanglement_entropy(psi, ["A"]) == 0.0


def test_cnot_choi_decomposition():
    data = schmidt_decompose(choi_state(gates.cnot()), ["A"])
    assert data.rank == 2
    assert np.allclose(data.coefficients, [0.5, 0.5])


def test_named_schmidt_numbers():
    assert schmidt_number(choi_state(gates.swap()), ["A"]) == 4
    assert abs(entanglement_entropy(choi_state(gates.swap()), ["A"]) - 2) < 1e-12
    local = GateDescriptor(np.kron(haar_random_unitary(2, 1), haar_random_unitary(2, 2)), PartyStructure.uniform(2, 2))
    assert schmidt_number(choi_state(local), ["A"]) == 1
    for t in (0.05, 0.3, 0.7):
        assert schmidt_number(choi_state(gates.xx(t)), ["A"]) == 2


def test_trivial_bipartition_rejected():
    psi = choi_state(gates.cnot())
    with pytest.raises(ValueError):
        schmidt_decompose(psi, [])
    with pytest.raises(ValueError):
        schmidt_decompose(psi, [0, 1, 2, 3])


@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (3, 4), (2, 2, 2)]))
@settings(max_examples=30, deadline=None)
def test_decomposition_contracts(seed, dims):
    s = PartyStructure(tuple("ABC"[: len(dims)]), dims)
    psi = PureState(random_state_vector(s.total_dim, seed), s)
    data = schmidt_decompose(psi, [0])
    assert abs(data.coefficients.sum() - 1) < 1e-10
    assert np.all(np.diff(data.coefficients) <= 0)
    assert np.allclose(data.left_basis.conj().T @ data.left_basis, np.eye(data.rank), atol=1e-10)
    assert np.allclose(data.right_basis.conj().T @ data.right_basis, np.eye(data.rank), atol=1e-10)
    assert np.linalg.norm(data.reconstruct() - psi.vector) < 1e-10
    h = entanglement_entropy(psi, [0])
    assert -1e-12 <= h <= np.log2(min(dims[0], s.total_dim // dims[0])) + 1e-12


def test_relative_cutoff():
    eps = 1e-10
    v = np.array([1, 0, 0, eps])
    psi = PureState.from_vector(v / np.linalg.norm(v))
    assert schmidt_number(psi, [0]) == 1
    assert schmidt_number(psi, [0], tol=1e-12) == 2


def test_dual_route_named_and_random():
    rng = np.random.default_rng(0)
    named = [gates.identity(), gates.cnot(), gates.swap(), gates.xx(0.3), gates.xy(0.2)]
    randoms = [GateDescriptor(haar_random_unitary(4, rng, special=True), PartyStructure.uniform(2, 2)) for _ in range(50)]
    for g in named + randoms:
        assert operator_schmidt_rank(g) == choi_schmidt_number(g)


def test_operator_rank_examples():
    assert operator_schmidt_rank(gates.cnot()) == 2
    assert operator_schmidt_rank(gates.swap()) == 4
    assert operator_schmidt_rank(gates.random_two_qubit(3)) == 4
    with pytest.raises(ValueError):
        operator_schmidt_rank(gates.xxx(0.2))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_choi_coefficients_lu_invariant(seed):
    rng = np.random.default_rng(seed)
    u = haar_random_unitary(4, rng)
    s = PartyStructure.uniform(2, 2)
    base = schmidt_decompose(choi_state(GateDescriptor(u, s)), ["A"], tol=0).coefficients
    moved = schmidt_decompose(choi_state(GateDescriptor(locally_disguised(u, rng), s)), ["A"], tol=0).coefficients
    assert np.allclose(base, moved, atol=1e-10)


def test_tensor_power_structure():
    g2 = gate_tensor_power(gates.cnot(), 2)
    assert g2.local_dims == (4, 4)
    assert g2.unitary
    # two CNOTs on (A1,B1),(A2,B2): check action on |a1 a2, b1 b2> = |1 0, 0 0>
    v = np.zeros(16)
    v[0b1000] = 1
    out = g2.matrix @ v
    assert out[0b1010] == 1


def test_multiplicativity():
    for g in (gates.cnot(), gates.xx(0.3)):
        r = schmidt_number(choi_state(g), ["A"])
        assert schmidt_number(choi_state(gate_tensor_power(g, 2)), ["A"]) == r**2


def test_multicopy_examples():
    assert multicopy_schmidt_number(gates.xx(0.3), 3) == 8
    assert multicopy_schmidt_number(gates.cnot(), 1) == 2
    for g in (gates.identity(), gates.swap(), gates.random_two_qubit(1)):
        assert multicopy_schmidt_number(g, 1) == operator_schmidt_rank(g)
    assert multicopy_schmidt_number(gates.swap(), 40) == 4**40
    with pytest.raises(ValueError):
        multicopy_schmidt_number(gates.cnot(), 0)
