"""Operator <-> state isomorphism and gate teleportation through Choi states.

Wiring used throughout (shown for two parties; more parties repeat the
pattern)::

    A1 ──┐                        A1 ── output slot of party A
         U   applied to |Phi>_{A1A2} |Phi>_{B1B2}
    B1 ──┘
    A2 ═══ <Phi| ═══ A3           A3 carries party A's input
    B2 ═══ <Phi| ═══ B3           B3 carries party B's input

The Choi vector is stored with slot order ``A1 A2 B1 B2 ...``. The input
operator lives on ``A3 B3 ...``. Projecting each pair ``(X2, X3)`` onto the
maximally entangled state leaves the gate applied to the input on
``A1 B1 ...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import PAULIS, PartyStructure, is_unitary, kron

UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class PureState:
    """A (possibly unnormalized) vector over a party structure."""

    vector: np.ndarray
    structure: PartyStructure

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=complex).reshape(-1)
        if vec.size != self.structure.total_dim:
            raise ValueError(
                f"vector has {vec.size} entries but the structure needs {self.structure.total_dim}"
            )
        vec.setflags(write=False)
        object.__setattr__(self, "vector", vec)

    @classmethod
    def from_vector(cls, vector, dims=None, parties=None) -> "PureState":
        """Build from a flat vector; ``dims`` gives one local dimension per party (or per-party tuples)."""
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        if dims is None:
            n = int(round(np.log2(vector.size)))
            dims = (2,) * n
        if parties is None:
            parties = tuple(chr(ord("A") + k) for k in range(len(dims)))
        return cls(vector, PartyStructure(tuple(parties), tuple(dims)))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def normalized(self) -> "PureState":
        n = self.norm
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return PureState(self.vector / n, self.structure)

    def tensor(self) -> np.ndarray:
        return self.vector.reshape(self.structure.dims)

    def apply_local(self, ops) -> "PureState":
        """Apply one operator per slot (in slot order)."""
        return PureState(kron(*ops) @ self.vector, self.structure)


@dataclass(frozen=True)
class GateDescriptor:
    """An operator acting on one d-level slot per party."""

    matrix: np.ndarray
    structure: PartyStructure
    unitary: bool = True
    name: str = field(default="", compare=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dim = self.structure.total_dim
        if m.shape != (dim, dim):
            raise ValueError(f"matrix shape {m.shape} does not match structure dimension {dim}")
        if any(len(d) != 1 for d in self.structure.local_dims):
            raise ValueError("a gate acts on exactly one slot per party")
        if self.unitary and not is_unitary(m, UNITARITY_TOL):
            raise ValueError("matrix flagged unitary but ||U^dag U - I||_max >= 1e-10")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix, n_parties: int | None = None, d: int = 2, unitary: bool | None = None, name: str = ""):
        matrix = np.asarray(matrix, dtype=complex)
        if n_parties is None:
            n_parties = int(round(np.log(matrix.shape[0]) / np.log(d)))
        if unitary is None:
            unitary = is_unitary(matrix, UNITARITY_TOL)
        return cls(matrix, PartyStructure.uniform(n_parties, d), unitary, name)

    @property
    def local_dims(self) -> tuple[int, ...]:
        return self.structure.dims

    @property
    def num_parties(self) -> int:
        return self.structure.num_parties

    def choi_structure(self) -> PartyStructure:
        return PartyStructure(self.structure.parties, tuple((d, d) for d in self.local_dims))


def mes(d: int) -> PureState:
    """``(1/sqrt d) sum_i |i>|i>`` on the two slots of a single party."""
    if d < 2:
        raise ValueError("maximally entangled state needs d >= 2")
    return PureState(np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d), PartyStructure(("A",), ((d, d),)))


def bell_state(i: int) -> PureState:
    """``(sigma_i (x) 1)|Phi>`` with sigma_0 the identity."""
    if i not in (0, 1, 2, 3):
        raise ValueError(f"Bell index must be 0..3, got {i}")
    phi = mes(2)
    return PureState(np.kron(PAULIS[i], np.eye(2)) @ phi.vector, phi.structure)


def bell_basis() -> np.ndarray:
    """Columns are the four Bell vectors ``|Phi_0> .. |Phi_3>``."""
    return np.stack([bell_state(i).vector for i in range(4)], axis=1)


def choi_state(gate: GateDescriptor) -> PureState:
    """Apply the gate to slots ``A1, B1, ...`` of ``|Phi>_{A1A2} |Phi>_{B1B2} ...``.

    The result is not renormalized; for a general operator the norm is
    ``||O||_F / sqrt(D)``.
    """
    dims = gate.local_dims
    n = len(dims)
    # U acting on A1..Z1 of prod|Phi> gives Psi[a1, a2, b1, b2, ...] = U[(a1 b1 ..), (a2 b2 ..)] / sqrt(D)
    psi = gate.matrix.reshape(dims + dims) / np.sqrt(np.prod(dims))
    order = [k for p in range(n) for k in (p, n + p)]
    vec = np.transpose(psi, order).reshape(-1)
    return PureState(vec, gate.choi_structure())


def choi_state_by_application(gate: GateDescriptor) -> PureState:
    """Same as :func:`choi_state` but built literally as ``(U (x) 1)`` on a product of MES.

    Kept as an independent route for cross-checks.
    """
    dims = gate.local_dims
    n = len(dims)
    product = kron(*[np.eye(d).reshape(-1) / np.sqrt(d) for d in dims])  # slots A1 A2 B1 B2 ...
    # move to (A1 B1 .. | A2 B2 ..), apply U (x) 1, move back
    t = product.reshape([d for d in dims for _ in range(2)])
    to_split = [2 * p for p in range(n)] + [2 * p + 1 for p in range(n)]
    t = np.transpose(t, to_split).reshape(np.prod(dims), -1)
    t = (gate.matrix @ t).reshape(dims + dims)
    back = [k for p in range(n) for k in (p, n + p)]
    return PureState(np.transpose(t, back).reshape(-1), gate.choi_structure())


def operator_from_choi(state: PureState, unitary: bool | None = None, name: str = "") -> GateDescriptor:
    """Inverse of :func:`choi_state`: any vector over slots ``X1 X2`` per party gives an operator."""
    local = state.structure.local_dims
    if any(len(d) != 2 or d[0] != d[1] for d in local):
        raise ValueError("Choi structure needs two equal-dimension slots per party")
    dims = tuple(d[0] for d in local)
    n = len(dims)
    t = state.vector.reshape([x for d in dims for x in (d, d)])
    t = np.transpose(t, [2 * p for p in range(n)] + [2 * p + 1 for p in range(n)])
    D = int(np.prod(dims))
    matrix = t.reshape(D, D) * np.sqrt(D)
    if unitary is None:
        unitary = is_unitary(matrix, UNITARITY_TOL)
    return GateDescriptor(matrix, PartyStructure(state.structure.parties, dims), unitary, name)


def check_density_matrix(rho: np.ndarray, dim: int, atol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise ValueError(f"density matrix must be {dim}x{dim}, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise ValueError(f"density matrix trace {np.trace(rho).real:.3g} differs from 1")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0] < -atol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def implement_via_state(state: PureState, rho: np.ndarray) -> tuple[np.ndarray, float]:
    """Apply the encoded operator to ``rho`` by projecting each ``(X2, X3)`` pair on ``|Phi>``.

    The contraction is exact. Returns the normalized output operator on
    ``A1 B1 ...`` and the success probability. For a unitary source the
    output is ``U rho U^dag`` and the probability is ``1/d^{2N}``.
    """
    local = state.structure.local_dims
    if any(len(d) != 2 or d[0] != d[1] for d in local):
        raise ValueError("resource state needs two equal-dimension slots per party")
    dims = [d[0] for d in local]
    n = len(dims)
    D = int(np.prod(dims))
    rho = check_density_matrix(rho, D)

    # K[x1.., x3..] = sum_{x2} Psi[x1, x2, ...] * prod_x conj(Phi[x2, x3])
    # labels: slot 1 of party p -> p, slot 2 -> n + p, slot 3 -> 2n + p
    operands: list = [state.vector.reshape([x for d in dims for x in (d, d)]),
                      [lab for p in range(n) for lab in (p, n + p)]]
    for p, d in enumerate(dims):
        operands += [mes(d).vector.reshape(d, d).conj(), [n + p, 2 * n + p]]
    k = np.einsum(*operands, list(range(n)) + list(range(2 * n, 3 * n))).reshape(D, D)
    out = k @ rho @ k.conj().T
    p_success = float(np.trace(out).real)
    if p_success <= 0:
        raise ValueError("projection succeeds with probability zero for this input")
    return out / p_success, p_success
