"""SLOCC decisions for gates and states: simulation, generation and class labels.

Bipartite questions reduce to Schmidt numbers of Choi states. Three-qubit
states are labelled with local ranks and the 3-tangle. Four-qubit states are
separated with a ratio of degree-4 SL-invariant polynomials, which proves
inequivalence when the ratios differ and says nothing when they agree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import gates
from .choi import GateDescriptor, PureState, bell_basis, choi_state, operator_from_choi
from .schmidt import choi_schmidt_number, multicopy_schmidt_number, schmidt_number
from .tensor import RANK_TOL, SY, PartyStructure, haar_random_unitary, kron, numerical_rank

TANGLE_TOL = 1e-9
RATIO_TOL = 1e-10
SUPPORT_TOL = 1e-10


class Method(str, enum.Enum):
    BIPARTITE = "bipartite-rank"
    THREE_QUBIT = "three-qubit-class"
    FOUR_QUBIT = "four-qubit-invariant"
    UNDECIDABLE = "undecidable"


class ThreeQubitLabel(str, enum.Enum):
    PRODUCT = "Product"
    BISEP_A = "BisepA"
    BISEP_B = "BisepB"
    BISEP_C = "BisepC"
    W = "W"
    GHZ = "GHZ"


_BISEP = (ThreeQubitLabel.BISEP_A, ThreeQubitLabel.BISEP_B, ThreeQubitLabel.BISEP_C)


class UndefinedInvariantError(ArithmeticError):
    """The denominator invariant vanishes, so the ratio carries no information."""


def _jsonable(x):
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


@dataclass(frozen=True)
class SloccVerdict:
    decision: Any
    method: Method
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"decision": _jsonable(self.decision), "method": self.method.value, "witness": _jsonable(self.witness)}


@dataclass(frozen=True)
class ThreeQubitClass:
    label: ThreeQubitLabel
    local_ranks: tuple[int, int, int]
    tangle: float

    def to_dict(self) -> dict:
        return {"label": self.label.value, "local_ranks": list(self.local_ranks), "tangle": self.tangle}


# ---------------------------------------------------------------- three qubits

def hyperdeterminant(psi) -> complex:
    """Cayley's 2x2x2 hyperdeterminant of the amplitudes ``a_{ijk}``."""
    a = np.asarray(psi.vector if isinstance(psi, PureState) else psi, dtype=complex).reshape(2, 2, 2)
    d1 = (a[0, 0, 0]**2 * a[1, 1, 1]**2 + a[0, 0, 1]**2 * a[1, 1, 0]**2
          + a[0, 1, 0]**2 * a[1, 0, 1]**2 + a[1, 0, 0]**2 * a[0, 1, 1]**2)
    d2 = (a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
          + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1])
    d3 = (a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
          + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0])
    return complex(d1 - 2 * d2 + 4 * d3)


def three_tangle(psi) -> float:
    """``4 |Det|`` of the normalized state."""
    v = np.asarray(psi.vector if isinstance(psi, PureState) else psi, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    return 4 * abs(hyperdeterminant(v))


def _qubit_state(psi, n: int) -> PureState:
    if isinstance(psi, PureState):
        if psi.structure.dims != (2,) * n:
            raise ValueError(f"expected a {n}-qubit state, got dims {psi.structure.dims}")
        return psi
    return PureState.from_vector(psi, (2,) * n)


def classify_three_qubit(psi, tol: float = TANGLE_TOL, rank_tol: float = RANK_TOL) -> ThreeQubitClass:
    state = _qubit_state(psi, 3).normalized()
    ranks = tuple(schmidt_number(state, [k], rank_tol) for k in range(3))
    tau = three_tangle(state)
    if ranks == (1, 1, 1):
        label = ThreeQubitLabel.PRODUCT
    elif 1 in ranks:
        label = _BISEP[ranks.index(1)]
    else:
        label = ThreeQubitLabel.GHZ if tau > tol else ThreeQubitLabel.W
    return ThreeQubitClass(label, ranks, tau)


def three_qubit_reachable(source: ThreeQubitLabel, target: ThreeQubitLabel) -> bool:
    """Whether SLOCC can turn a state of class ``source`` into one of class ``target``."""
    source, target = ThreeQubitLabel(source), ThreeQubitLabel(target)
    if target == source or target == ThreeQubitLabel.PRODUCT:
        return True
    if source in (ThreeQubitLabel.GHZ, ThreeQubitLabel.W):
        return target in _BISEP
    return False


def effective_qubit_state(state: PureState, basis: np.ndarray | None = None, tol: float = SUPPORT_TOL) -> PureState:
    """Compress every party onto a two-dimensional local subspace.

    With ``basis`` (a ``(d_party, 2)`` isometry, shared by all parties) the
    state is expressed in that basis; otherwise each party's support is read
    off its reduced density matrix. Raises ``ValueError`` when some weight lies
    outside the chosen subspaces.
    """
    structure = state.structure
    pdims = [structure.party_dim(p) for p in range(structure.num_parties)]
    t = state.vector.reshape(pdims)
    n = len(pdims)
    for p, d in enumerate(pdims):
        if basis is not None:
            iso = np.asarray(basis, dtype=complex)
            if iso.shape != (d, 2):
                raise ValueError(f"basis must be {d}x2 for party {structure.parties[p]}")
        elif d == 2:
            iso = np.eye(2, dtype=complex)
        else:
            m = np.moveaxis(t, p, 0).reshape(d, -1)
            u, s, _ = np.linalg.svd(m, full_matrices=False)
            if numerical_rank(s, np.sqrt(tol)) > 2:
                raise ValueError(f"party {structure.parties[p]} has local rank above 2")
            iso = u[:, :2]
        t = np.moveaxis(np.tensordot(iso.conj().T, t, axes=([1], [p])), 0, p)
    out = t.reshape(-1)
    lost = state.norm**2 - np.linalg.norm(out) ** 2
    if lost > tol * max(state.norm**2, 1e-300):
        raise ValueError(f"state has weight {lost:.3g} outside the two-dimensional local subspaces")
    return PureState(out, PartyStructure(structure.parties, (2,) * n))


BELL_QUBIT_BASIS = bell_basis()[:, :2]


def xxx_choi_class(t: float, tol: float = TANGLE_TOL) -> ThreeQubitClass:
    """Class of the Choi state of ``exp(-i t XXX)`` with ``|Phi_0>, |Phi_1>`` read as ``|0>, |1>``."""
    if not 0 < t < np.pi / 4:
        raise ValueError("t must lie in (0, pi/4)")
    eff = effective_qubit_state(choi_state(gates.xxx(t)), BELL_QUBIT_BASIS)
    return classify_three_qubit(eff, tol)


def uw_generation_demo(t: float, tol: float = TANGLE_TOL) -> tuple[ThreeQubitClass, ThreeQubitClass]:
    """Apply ``exp(-i t |W><W|)`` to ``|001>`` and to ``|0>(|0>+|1>)|1>/sqrt 2``."""
    if not 0 < t < np.pi / 4:
        raise ValueError("t must lie in (0, pi/4)")
    u = gates.uw(t).matrix
    ket001 = np.zeros(8, dtype=complex)
    ket001[0b001] = 1
    spread = np.zeros(8, dtype=complex)
    spread[[0b001, 0b011]] = 1 / np.sqrt(2)
    return classify_three_qubit(u @ ket001, tol), classify_three_qubit(u @ spread, tol)


# ----------------------------------------------------------------- four qubits

def four_qubit_alpha_beta(t: float) -> tuple[complex, complex]:
    """Coefficients with ``exp(-i t H) = alpha 1 + beta H`` for ``H = XXXX + IIXX + XXII``."""
    e3, e1 = np.exp(-3j * t), np.exp(1j * t)
    return complex((e3 + 3 * e1) / 4), complex((e3 - e1) / 4)


def four_qubit_family(t: float) -> PureState:
    """``alpha|0000> + beta(|1111> + |0011> + |1100>)``."""
    alpha, beta = four_qubit_alpha_beta(t)
    v = np.zeros(16, dtype=complex)
    v[0b0000] = alpha
    v[[0b1111, 0b0011, 0b1100]] = beta
    return PureState(v / np.linalg.norm(v), PartyStructure.uniform(4, 2))


_PAIRINGS = {"AB|CD": (0, 1, 2, 3), "AC|BD": (0, 2, 1, 3), "AD|BC": (0, 3, 1, 2)}
_SY4 = kron(SY, SY, SY, SY)


def four_qubit_invariants(psi, pairing: str = "AC|BD") -> tuple[complex, complex]:
    """``(psi^T Y^{(x)4} psi, det of the 4x4 reshape for the pairing)``."""
    if pairing not in _PAIRINGS:
        raise ValueError(f"pairing must be one of {sorted(_PAIRINGS)}")
    v = _qubit_state(psi, 4).vector
    bilinear = complex(v @ _SY4 @ v)
    m = np.transpose(v.reshape(2, 2, 2, 2), _PAIRINGS[pairing]).reshape(4, 4)
    return bilinear, complex(np.linalg.det(m))


def four_qubit_invariant_ratio(psi, pairing: str = "AC|BD", tol: float = 1e-12) -> complex:
    """``(psi^T Y^{(x)4} psi)^2 / det(reshape)``, constant on SLOCC orbits."""
    v = _qubit_state(psi, 4).vector
    bilinear, det = four_qubit_invariants(v, pairing)
    if abs(det) <= tol * np.linalg.norm(v) ** 4:
        raise UndefinedInvariantError(f"{pairing} determinant invariant vanishes (|D| = {abs(det):.3g})")
    return bilinear**2 / det


def pairwise_inequivalence_demo(ts: Sequence[float], tol: float = RATIO_TOL) -> np.ndarray:
    """Entry (i, j) is True when the invariant ratios of the family at ``ts[i]`` and ``ts[j]`` differ."""
    ratios = np.array([four_qubit_invariant_ratio(four_qubit_family(t)) for t in ts])
    return np.abs(ratios[:, None] - ratios[None, :]) > tol


# ----------------------------------------------------------------- decisions

def _same_structure(u: GateDescriptor, v: GateDescriptor):
    if u.local_dims != v.local_dims:
        raise ValueError(f"party structures differ: {u.local_dims} vs {v.local_dims}")


def _full_local_ranks(state: PureState, tol: float) -> bool:
    return all(schmidt_number(state, [p], tol) == 2 for p in state.structure.parties)


def can_simulate(u: GateDescriptor, v: GateDescriptor, tol: float = RANK_TOL, ratio_tol: float = RATIO_TOL) -> SloccVerdict:
    """Whether one use of ``u`` plus SLOCC can implement ``v``."""
    _same_structure(u, v)
    n = u.num_parties
    if n == 2:
        nu, nv = choi_schmidt_number(u, tol), choi_schmidt_number(v, tol)
        return SloccVerdict(nu >= nv, Method.BIPARTITE, {"schmidt_number_source": nu, "schmidt_number_target": nv})
    su, sv = choi_state(u), choi_state(v)
    cuts_u = [schmidt_number(su, [p], tol) for p in u.structure.parties]
    cuts_v = [schmidt_number(sv, [p], tol) for p in v.structure.parties]
    cuts = {"cut_ranks_source": cuts_u, "cut_ranks_target": cuts_v}
    # SLOCC never raises the Schmidt number across a cut; product targets are always reachable
    if any(b > a for a, b in zip(cuts_u, cuts_v)):
        return SloccVerdict(False, Method.BIPARTITE, cuts)
    if all(b == 1 for b in cuts_v):
        return SloccVerdict(True, Method.BIPARTITE, cuts)
    if set(u.local_dims) != {2} or n not in (3, 4):
        return SloccVerdict(None, Method.UNDECIDABLE, {"reason": "no criterion for this party structure", **cuts})
    try:
        eu = effective_qubit_state(su)
        ev = effective_qubit_state(sv)
    except ValueError as exc:
        return SloccVerdict(None, Method.UNDECIDABLE, {"reason": str(exc)})
    if n == 3:
        cu, cv = classify_three_qubit(eu), classify_three_qubit(ev)
        return SloccVerdict(three_qubit_reachable(cu.label, cv.label), Method.THREE_QUBIT,
                            {"class_source": cu.to_dict(), "class_target": cv.to_dict()})
    if np.array_equal(u.matrix, v.matrix):
        return SloccVerdict(True, Method.FOUR_QUBIT, {"reason": "identical gates"})
    try:
        ru, rv = four_qubit_invariant_ratio(eu), four_qubit_invariant_ratio(ev)
    except UndefinedInvariantError as exc:
        return SloccVerdict(None, Method.UNDECIDABLE, {"reason": str(exc)})
    witness = {"ratio_source": ru, "ratio_target": rv, "separation": abs(ru - rv)}
    # a target with full local ranks can only be reached by invertible local maps
    if abs(ru - rv) > ratio_tol and _full_local_ranks(ev, tol):
        return SloccVerdict(False, Method.FOUR_QUBIT, witness)
    witness["reason"] = "invariant ratios agree or target is locally degenerate; inconclusive"
    return SloccVerdict(None, Method.UNDECIDABLE, witness)


def can_simulate_multicopy(u: GateDescriptor, n: int, v: GateDescriptor, m: int, tol: float = RANK_TOL) -> SloccVerdict:
    """Whether ``u^{(x)n}`` can implement ``v^{(x)m}`` under SLOCC (bipartite gates)."""
    _same_structure(u, v)
    ru, rv = multicopy_schmidt_number(u, n, tol), multicopy_schmidt_number(v, m, tol)
    return SloccVerdict(ru >= rv, Method.BIPARTITE,
                        {"copies_source": n, "copies_target": m, "schmidt_number_source": ru, "schmidt_number_target": rv})


def can_generate(u: GateDescriptor, psi: PureState, tol: float = RANK_TOL) -> SloccVerdict:
    """Whether ``u`` acting on a product input plus SLOCC can produce ``psi``.

    ``psi`` must have one party per party of ``u``; its local dimensions may
    differ since local ancillas are free.
    """
    if psi.structure.num_parties != u.num_parties:
        raise ValueError(f"state has {psi.structure.num_parties} parties, gate has {u.num_parties}")
    if u.num_parties == 2:
        nu = choi_schmidt_number(u, tol)
        npsi = schmidt_number(psi, [psi.structure.parties[0]], tol)
        return SloccVerdict(npsi <= nu, Method.BIPARTITE, {"schmidt_number_gate": nu, "schmidt_number_state": npsi})
    su = choi_state(u)
    cuts_u = [schmidt_number(su, [p], tol) for p in u.structure.parties]
    cuts_psi = [schmidt_number(psi, [p], tol) for p in psi.structure.parties]
    cuts = {"cut_ranks_gate": cuts_u, "cut_ranks_state": cuts_psi}
    if any(b > a for a, b in zip(cuts_u, cuts_psi)):
        return SloccVerdict(False, Method.BIPARTITE, cuts)
    if all(b == 1 for b in cuts_psi):
        return SloccVerdict(True, Method.BIPARTITE, cuts)
    if u.num_parties == 3 and set(u.local_dims) == {2} and psi.structure.dims == (2, 2, 2):
        try:
            eu = effective_qubit_state(su)
        except ValueError as exc:
            return SloccVerdict(None, Method.UNDECIDABLE, {"reason": str(exc)})
        cu, cp = classify_three_qubit(eu), classify_three_qubit(psi)
        return SloccVerdict(three_qubit_reachable(cu.label, cp.label), Method.THREE_QUBIT,
                            {"class_gate": cu.to_dict(), "class_state": cp.to_dict()})
    return SloccVerdict(None, Method.UNDECIDABLE, {"reason": "no criterion for this party structure", **cuts})


def operator_class(op: GateDescriptor, tol: float = RANK_TOL) -> int:
    """SLOCC class of a bipartite operator: its Choi Schmidt number, 1 .. d^2."""
    if op.num_parties != 2:
        raise ValueError("operator classes are defined here for bipartite operators")
    if not np.any(op.matrix):
        raise ValueError("the zero operator has no class")
    return choi_schmidt_number(op, tol)


def operator_of_choi_rank(rank: int, d: int = 2, seed=None) -> GateDescriptor:
    """A general operator whose Choi state has Schmidt number ``rank`` across the parties."""
    if not 1 <= rank <= d * d:
        raise ValueError(f"rank must lie in 1..{d * d}")
    rng = np.random.default_rng(seed)
    lam = rng.uniform(0.5, 1.5, rank)
    lam = lam / lam.sum()
    left = haar_random_unitary(d * d, rng)[:, :rank]
    right = haar_random_unitary(d * d, rng)[:, :rank]
    vec = np.einsum("i,ai,bi->ab", np.sqrt(lam), left, right).reshape(-1)
    state = PureState(vec, PartyStructure(("A", "B"), ((d, d), (d, d))))
    return operator_from_choi(state, unitary=False, name=f"choi-rank-{rank}")
