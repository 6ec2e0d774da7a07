import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from gateclass import gates
from gateclass.choi import GateDescriptor, PureState, choi_state
from gateclass.slocc import (
    BELL_QUBIT_BASIS,
    Method,
    ThreeQubitLabel as L,
    UndefinedInvariantError,
    can_generate,
    can_simulate,
    can_simulate_multicopy,
    classify_three_qubit,
    effective_qubit_state,
    four_qubit_alpha_beta,
    four_qubit_family,
    four_qubit_invariant_ratio,
    four_qubit_invariants,
    hyperdeterminant,
    operator_class,
    operator_of_choi_rank,
    pairwise_inequivalence_demo,
    three_qubit_reachable,
    three_tangle,
    uw_generation_demo,
    xxx_choi_class,
)
from gateclass.tensor import PartyStructure, haar_random_unitary, kron

seeds = st.integers(0, 2**32 - 1)
BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)
KET0 = np.array([1, 0])

SEED_STATES = {
    L.GHZ: gates.GHZ_VECTOR,
    L.W: gates.W_VECTOR,
    L.BISEP_A: np.kron(KET0, BELL),
    L.BISEP_B: np.kron(BELL, KET0).reshape(2, 2, 2).transpose(0, 2, 1).reshape(-1),
    L.BISEP_C: np.kron(BELL, KET0),
    L.PRODUCT: np.kron(np.kron(KET0, KET0), KET0),
}


def discriminant_oracle(v):
    """Discriminant of the quadratic ``det(A0 + x A1)`` built from the two slices on party A."""
    a = np.asarray(v).reshape(2, 2, 2)
    c0, c2 = np.linalg.det(a[0]), np.linalg.det(a[1])
    c1 = np.linalg.det(a[0] + a[1]) - c0 - c2
    return c1 * c1 - 4 * c0 * c2


def random_invertible(rng):
    return rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))


def rank_k_state(k, rng, d=4):
    """A random d x d state of Schmidt rank k."""
    lam = rng.uniform(0.2, 1.0, k)
    lam = lam / lam.sum()
    left = haar_random_unitary(d, rng)[:, :k]
    right = haar_random_unitary(d, rng)[:, :k]
    v = np.einsum("i,ai,bi->ab", np.sqrt(lam), left, right).reshape(-1)
    return PureState(v, PartyStructure(("A", "B"), (d, d)))


# ---------------------------------------------------------------- three qubits

def test_tangle_examples():
    assert abs(three_tangle(gates.GHZ_VECTOR) - 1) < 1e-14
    assert hyperdeterminant(gates.W_VECTOR) == 0
    assert classify_three_qubit(gates.GHZ_VECTOR).label == L.GHZ
    assert classify_three_qubit(gates.W_VECTOR).label == L.W
    assert classify_three_qubit(np.kron(KET0, BELL)).label == L.BISEP_A


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_hyperdeterminant_matches_discriminant(seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    assert np.isclose(hyperdeterminant(v), discriminant_oracle(v), rtol=1e-10, atol=1e-12)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_hyperdeterminant_sl_covariance(seed):
    """Det scales by prod det(g_i)^2 under local maps."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    gs = [random_invertible(rng) for _ in range(3)]
    scale = np.prod([np.linalg.det(g) for g in gs]) ** 2
    assert np.isclose(hyperdeterminant(kron(*gs) @ v), scale * hyperdeterminant(v), rtol=1e-9)


@pytest.mark.parametrize("label", list(SEED_STATES))
def test_labels_survive_local_unitaries(label):
    rng = np.random.default_rng(list(SEED_STATES).index(label))
    tangle = classify_three_qubit(SEED_STATES[label]).tangle
    for _ in range(100):
        u = kron(*[haar_random_unitary(2, rng) for _ in range(3)])
        got = classify_three_qubit(u @ SEED_STATES[label])
        assert got.label == label
        assert abs(got.tangle - tangle) < 1e-10


@pytest.mark.parametrize("label", list(SEED_STATES))
def test_labels_survive_invertible_maps(label):
    rng = np.random.default_rng(1)
    for _ in range(30):
        g = kron(*[random_invertible(rng) for _ in range(3)])
        assert classify_three_qubit(g @ SEED_STATES[label]).label == label


def test_class_invariants():
    rng = np.random.default_rng(5)
    for _ in range(200):
        c = classify_three_qubit(rng.standard_normal(8) + 1j * rng.standard_normal(8))
        assert c.label == L.GHZ and c.local_ranks == (2, 2, 2) and c.tangle > 1e-9
    d = classify_three_qubit(SEED_STATES[L.BISEP_B]).to_dict()
    assert d == {"label": "BisepB", "local_ranks": [2, 1, 2], "tangle": 0.0}


def test_reachability_order():
    labels = list(L)
    for a in labels:
        assert three_qubit_reachable(a, a)
        assert three_qubit_reachable(a, L.PRODUCT)
        for b, c in itertools.product(labels, labels):
            if three_qubit_reachable(a, b) and three_qubit_reachable(b, c):
                assert three_qubit_reachable(a, c)
    assert not three_qubit_reachable(L.GHZ, L.W)
    assert not three_qubit_reachable(L.W, L.GHZ)
    assert not three_qubit_reachable(L.BISEP_A, L.BISEP_B)
    assert three_qubit_reachable("W", "BisepC")


@pytest.mark.parametrize("t", [0.1, 0.4, 0.5, 0.7])
def test_xxx_choi_is_ghz(t):
    c = xxx_choi_class(t)
    assert c.label == L.GHZ
    assert abs(c.tangle - np.sin(2 * t) ** 2) < 1e-12


def test_xxx_range():
    for t in (0.0, np.pi / 4, 1.0):
        with pytest.raises(ValueError):
            xxx_choi_class(t)


def test_effective_state_support_and_basis_agree():
    psi = choi_state(gates.xxx(0.3))
    with_basis = effective_qubit_state(psi, BELL_QUBIT_BASIS)
    from_support = effective_qubit_state(psi)
    assert np.allclose(with_basis.vector[[0, 7]], [np.cos(0.3), -1j * np.sin(0.3)])
    assert abs(three_tangle(with_basis) - three_tangle(from_support)) < 1e-12


def test_effective_state_rejects_wide_support():
    with pytest.raises(ValueError):
        effective_qubit_state(choi_state(gates.uw(0.3)))
    with pytest.raises(ValueError):
        effective_qubit_state(choi_state(gates.xxx(0.3)), np.eye(4)[:, 2:])


def test_uw_generation():
    first, second = uw_generation_demo(0.3)
    assert first.label == L.W and second.label == L.GHZ
    for t in (0.05, 0.3, 0.7):
        assert abs(abs(1 + gates.uw_gamma(t)) - 1) < 1e-15
        assert np.allclose(gates.uw(t).matrix, expm(-1j * t * gates.w_projector()), atol=1e-14)
    tiny_first, tiny_second = uw_generation_demo(1e-6)
    assert tiny_first.tangle < 1e-9 and tiny_second.tangle < 1e-10
    for t in (0, np.pi / 4):
        with pytest.raises(ValueError):
            uw_generation_demo(t)


def test_uw_001_display():
    t = 0.3
    out = gates.uw(t).matrix @ np.eye(8)[0b001]
    expected = np.eye(8)[0b001] + gates.uw_gamma(t) / np.sqrt(3) * gates.W_VECTOR
    assert np.allclose(out, expected)


# ----------------------------------------------------------------- four qubits

def test_hamiltonian_structure():
    h = gates.four_qubit_hamiltonian()
    assert np.max(np.abs(h @ h - 2 * h - 3 * np.eye(16))) < 1e-12
    assert np.allclose(np.unique(np.round(np.linalg.eigvalsh(h), 12)), [-1, 3])


@pytest.mark.parametrize("t", np.linspace(0.05, 0.75, 8))
def test_alpha_beta_against_expm(t):
    h = gates.four_qubit_hamiltonian()
    alpha, beta = four_qubit_alpha_beta(t)
    assert np.max(np.abs(expm(-1j * t * h) - (alpha * np.eye(16) + beta * h))) < 1e-12


def test_family_limits_and_form():
    assert np.allclose(four_qubit_family(1e-9).vector, np.eye(16)[0], atol=1e-8)
    alpha, beta = four_qubit_alpha_beta(0.3)
    v = four_qubit_family(0.3).vector * np.linalg.norm([alpha, beta, beta, beta])
    assert np.allclose(v[[0, 3, 12, 15]], [alpha, beta, beta, beta])


@pytest.mark.parametrize("t", [0.1, 0.3, 0.6])
def test_family_invariants_closed_form(t):
    alpha, beta = four_qubit_alpha_beta(t)
    v = np.zeros(16, dtype=complex)
    v[0], v[[3, 12, 15]] = alpha, beta
    h_inv, det = four_qubit_invariants(v)
    assert np.isclose(h_inv, 2 * beta * (alpha + beta), atol=1e-14)
    assert np.isclose(det, alpha * beta**3, atol=1e-14)
    assert np.isclose(four_qubit_invariant_ratio(v), 4 * (alpha + beta) ** 2 / (alpha * beta), rtol=1e-12)
    assert abs(four_qubit_invariants(v, "AB|CD")[1]) < 1e-15


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_ratio_invariant_under_invertible_maps(seed):
    rng = np.random.default_rng(seed)
    psi = four_qubit_family(rng.uniform(0.05, 0.75)).vector
    moved = kron(*[random_invertible(rng) for _ in range(4)]) @ psi
    moved = moved / np.linalg.norm(moved)
    r0, r1 = four_qubit_invariant_ratio(psi), four_qubit_invariant_ratio(moved)
    assert abs(r0 - r1) < 1e-8 * max(1, abs(r0))


def test_ghz4_ratio_undefined():
    v = np.zeros(16)
    v[[0, 15]] = 1 / np.sqrt(2)
    h_inv, det = four_qubit_invariants(v)
    assert np.isclose(h_inv, 1) and det == 0
    for pairing in ("AB|CD", "AC|BD", "AD|BC"):
        with pytest.raises(UndefinedInvariantError):
            four_qubit_invariant_ratio(v, pairing)
    with pytest.raises(ValueError):
        four_qubit_invariants(v, "AA|BB")


def test_pairwise_demo():
    m = pairwise_inequivalence_demo(np.linspace(0.05, 0.75, 10))
    assert np.all(m[~np.eye(10, dtype=bool)]) and not np.any(np.diag(m))
    assert not np.any(pairwise_inequivalence_demo([0.3, 0.3]))
    assert pairwise_inequivalence_demo([0.2, 0.200001])[0, 1]


def test_ratio_injective_on_fine_grid():
    ts = np.linspace(0.01, 0.78, 400)
    r = np.array([four_qubit_invariant_ratio(four_qubit_family(t)) for t in ts])
    sep = np.abs(r[:, None] - r[None, :]) + np.diag(np.full(ts.size, np.inf))
    assert sep.min() > 1e-6


def test_four_qubit_gate_choi_matches_family():
    t = 0.4
    eff = effective_qubit_state(choi_state(gates.four_qubit_gate(t)), BELL_QUBIT_BASIS)
    assert np.allclose(eff.vector, four_qubit_family(t).vector, atol=1e-12)


# ----------------------------------------------------------------- decisions

def test_bipartite_simulation_examples():
    t = 0.1
    assert can_simulate(gates.swap(), gates.cnot()).decision is True
    assert can_simulate(gates.cnot(), gates.swap()).decision is False
    assert can_simulate(gates.cnot(), gates.xy(t)).decision is False
    for seed in range(10):
        assert can_simulate(gates.random_two_qubit(seed), gates.cnot()).decision is True
    v = can_simulate(gates.cnot(), gates.swap())
    assert v.method == Method.BIPARTITE
    assert v.witness == {"schmidt_number_source": 2, "schmidt_number_target": 4}


def test_simulation_preorder_and_partition():
    gate_set = [gates.identity(), gates.cnot(), gates.swap(), gates.xx(0.3)]
    sim = {(i, j): can_simulate(a, b).decision for (i, a), (j, b) in itertools.product(enumerate(gate_set), repeat=2)}
    from gateclass.schmidt import choi_schmidt_number
    ranks = [choi_schmidt_number(g) for g in gate_set]
    for i in range(4):
        assert sim[i, i]
    for i, j, k in itertools.product(range(4), repeat=3):
        if sim[i, j] and sim[j, k]:
            assert sim[i, k]
    for i, j in itertools.product(range(4), repeat=2):
        assert (sim[i, j] and sim[j, i]) == (ranks[i] == ranks[j])


def test_simulation_structure_mismatch():
    with pytest.raises(ValueError):
        can_simulate(gates.cnot(), gates.xxx(0.1))


def test_multicopy_examples():
    x = gates.xx(0.2)
    assert can_simulate_multicopy(gates.cnot(), 1, x, 2).decision is False
    assert can_simulate_multicopy(x, 2, gates.cnot(), 1).decision is True
    assert can_simulate_multicopy(gates.cnot(), 2, gates.swap(), 1).decision is True


def test_three_qubit_simulation():
    assert can_simulate(gates.xxx(0.2), gates.xxx(0.6)).decision is True
    v = can_simulate(gates.xxx(0.2), gates.uw(0.3))
    assert v.decision is False and v.method == Method.BIPARTITE
    assert can_simulate(gates.uw(0.3), gates.xxx(0.2)).method == Method.UNDECIDABLE
    assert can_simulate(gates.xxx(0.2), gates.identity(3)).decision is True


def test_four_qubit_simulation():
    v = can_simulate(gates.four_qubit_gate(0.2), gates.four_qubit_gate(0.4))
    assert v.decision is False and v.method == Method.FOUR_QUBIT
    assert can_simulate(gates.four_qubit_gate(0.2), gates.four_qubit_gate(0.2)).decision is True
    assert can_simulate(gates.four_qubit_gate(0.2), gates.identity(4)).decision is True
    g = GateDescriptor(haar_random_unitary(16, 0), PartyStructure.uniform(4, 2))
    assert can_simulate(g, gates.four_qubit_gate(0.2)).method == Method.UNDECIDABLE


def test_generation_examples():
    rng = np.random.default_rng(11)
    x = gates.xx(0.3)
    for _ in range(20):
        assert can_generate(x, rank_k_state(2, rng)).decision is True
        assert can_generate(x, rank_k_state(1, rng)).decision is True
        assert can_generate(x, rank_k_state(3, rng)).decision is False
        assert can_generate(x, rank_k_state(4, rng)).decision is False
    qubits = PureState.from_vector(BELL)
    assert can_generate(x, qubits).decision is True
    assert can_generate(gates.identity(), qubits).decision is False
    with pytest.raises(ValueError):
        can_generate(x, PureState.from_vector(gates.GHZ_VECTOR))


def test_generation_monotone_under_local_projection():
    rng = np.random.default_rng(12)
    x = gates.xx(0.3)
    for k in (2, 3, 4):
        psi = rank_k_state(k, rng)
        verdict = can_generate(x, psi).decision
        for keep in (1, 2, 3):
            proj = np.diag([1.0] * keep + [0.0] * (4 - keep))
            phi = np.kron(proj, np.eye(4)) @ psi.vector
            phi = PureState(phi / np.linalg.norm(phi), psi.structure)
            if verdict:
                assert can_generate(x, phi).decision


def test_three_qubit_generation():
    ghz, w = PureState.from_vector(gates.GHZ_VECTOR), PureState.from_vector(gates.W_VECTOR)
    assert can_generate(gates.xxx(0.3), ghz).decision is True
    v = can_generate(gates.xxx(0.3), w)
    assert v.decision is False and v.method == Method.THREE_QUBIT
    assert can_generate(gates.identity(3), ghz).decision is False


def test_operator_classes():
    assert operator_class(gates.cnot()) == 2
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
    assert operator_class(GateDescriptor(np.kron(a, b), PartyStructure.uniform(2, 2), unitary=False)) == 1
    for r in (1, 2, 3, 4):
        op = operator_of_choi_rank(r, seed=r)
        assert not op.unitary and operator_class(op) == r
    with pytest.raises(ValueError):
        operator_class(GateDescriptor(np.zeros((4, 4)), PartyStructure.uniform(2, 2), unitary=False))
    with pytest.raises(ValueError):
        operator_of_choi_rank(5)


def test_verdict_json():
    d = can_simulate(gates.four_qubit_gate(0.2), gates.four_qubit_gate(0.4)).to_dict()
    assert d["method"] == "four-qubit-invariant"
    assert isinstance(d["witness"]["ratio_source"], list)
