"""Dense complex linear algebra over small multipartite index structures.

Index convention
----------------
Every state vector or operator is a numpy ``complex128`` array flattened in
row-major (C) order. Parties appear in the declared order; inside a party the
slots appear in their numbered order, so a Choi state over two parties is laid
out as ``A1 A2 B1 B2``. An operator on slots ``s_0 ... s_{n-1}`` is a
``(D, D)`` matrix whose row and column multi-indices both follow that order.
All reshapes and permutations in this package refer to this single layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from string import ascii_uppercase
from typing import Iterable, NamedTuple, Sequence

import numpy as np

RANK_TOL = 1e-8
RECONSTRUCTION_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, SX, SY, SZ)


@dataclass(frozen=True)
class PartyStructure:
    """Ordered parties, each holding one or more subsystem slots.

    ``local_dims[p]`` lists the dimensions of the slots held by party ``p``.
    Slots are numbered globally in party-major order.
    """

    parties: tuple[str, ...]
    local_dims: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        parties = tuple(self.parties)
        dims = tuple(
            (int(d),) if np.ndim(d) == 0 else tuple(int(x) for x in d)
            for d in self.local_dims
        )
        object.__setattr__(self, "parties", parties)
        object.__setattr__(self, "local_dims", dims)
        if len(parties) != len(dims):
            raise ValueError("one dimension entry is needed per party")
        if len(set(parties)) != len(parties):
            raise ValueError(f"duplicate party labels in {parties}")
        if not parties:
            raise ValueError("at least one party is required")
        for d in dims:
            if not d or min(d) < 1:
                raise ValueError(f"slot dimensions must be positive, got {dims}")

    @classmethod
    def uniform(cls, n_parties: int, d: int, slots: int = 1) -> "PartyStructure":
        """``n_parties`` parties labelled A, B, ... each holding ``slots`` d-level systems."""
        return cls(tuple(ascii_uppercase[:n_parties]), tuple((d,) * slots for _ in range(n_parties)))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for party in self.local_dims for d in party)

    @property
    def num_slots(self) -> int:
        return len(self.dims)

    @property
    def num_parties(self) -> int:
        return len(self.parties)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def party_dim(self, party: int | str) -> int:
        idx = self.parties.index(party) if isinstance(party, str) else party
        return int(np.prod(self.local_dims[idx]))

    def slots(self, party: int | str) -> tuple[int, ...]:
        idx = self.parties.index(party) if isinstance(party, str) else party
        start = sum(len(d) for d in self.local_dims[:idx])
        return tuple(range(start, start + len(self.local_dims[idx])))

    def resolve(self, subset: Iterable[int | str]) -> tuple[int, ...]:
        """Turn a mix of slot indices and party labels into sorted slot indices."""
        out: set[int] = set()
        for item in subset:
            if isinstance(item, str):
                out.update(self.slots(item))
            else:
                item = int(item)
                if not 0 <= item < self.num_slots:
                    raise ValueError(f"slot {item} out of range for {self.num_slots} slots")
                out.add(item)
        return tuple(sorted(out))

    def with_slots_per_party(self, dims_per_party: Sequence[Sequence[int]]) -> "PartyStructure":
        return PartyStructure(self.parties, tuple(tuple(d) for d in dims_per_party))


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors), left factor slowest."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, (np.asarray(op, dtype=complex) for op in ops))


def _check_square(rho: np.ndarray, dim: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} operator, got shape {rho.shape}")
    return rho


def partial_trace(rho: np.ndarray, keep: Iterable[int | str], structure: PartyStructure) -> np.ndarray:
    """Reduced operator on the ``keep`` slots, tracing out everything else.

    The kept slots stay in their original relative order.
    """
    keep = structure.resolve(keep)
    if not keep:
        raise ValueError("keep must name at least one slot")
    dims = structure.dims
    n = len(dims)
    rho = _check_square(rho, structure.total_dim).reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # einsum labels: row slot k -> k, column slot k -> n + k (or k when traced)
    row = list(range(n))
    col = [k if k in traced else n + k for k in range(n)]
    out = [k for k in keep] + [n + k for k in keep]
    dk = int(np.prod([dims[k] for k in keep]))
    return np.einsum(rho, row + col, out).reshape(dk, dk)


def reduced_density_matrix(vector: np.ndarray, keep: Iterable[int | str], structure: PartyStructure) -> np.ndarray:
    """``tr_rest |v><v|`` computed without forming the full projector."""
    keep = structure.resolve(keep)
    if not keep:
        raise ValueError("keep must name at least one slot")
    dims = structure.dims
    rest = [k for k in range(len(dims)) if k not in keep]
    psi = np.asarray(vector, dtype=complex).reshape(dims)
    psi = np.transpose(psi, list(keep) + rest)
    dk = int(np.prod([dims[k] for k in keep]))
    m = psi.reshape(dk, -1)
    return m @ m.conj().T


def bipartite_matrix(vector: np.ndarray, left: Iterable[int | str], structure: PartyStructure) -> np.ndarray:
    """Coefficient matrix of a vector with rows on ``left`` slots and columns on the rest."""
    left = structure.resolve(left)
    dims = structure.dims
    right = [k for k in range(len(dims)) if k not in left]
    if not left or not right:
        raise ValueError("bipartition must split the slots into two nonempty sets")
    psi = np.asarray(vector, dtype=complex).reshape(dims)
    psi = np.transpose(psi, list(left) + right)
    dl = int(np.prod([dims[k] for k in left]))
    return psi.reshape(dl, -1)


def reshuffle_operator(op: np.ndarray, structure: PartyStructure) -> np.ndarray:
    """Rearrange a bipartite operator so its SVD is the operator-Schmidt decomposition.

    ``R[(a, a'), (b, b')] = O[(a, b), (a', b')]`` where ``a, a'`` index party A's
    output and input and ``b, b'`` party B's. ``A (x) B`` maps to
    ``vec(A) vec(B)^T``.
    """
    if structure.num_parties != 2:
        raise ValueError(f"reshuffle needs exactly two parties, got {structure.num_parties}")
    da, db = structure.party_dim(0), structure.party_dim(1)
    op = _check_square(op, da * db)
    return op.reshape(da, db, da, db).transpose(0, 2, 1, 3).reshape(da * da, db * db)


class SVD(NamedTuple):
    values: np.ndarray
    left: np.ndarray
    right_h: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.values) @ self.right_h


def svd(m: np.ndarray) -> SVD:
    """Thin SVD ``m = left @ diag(values) @ right_h`` with descending values."""
    u, s, vh = np.linalg.svd(np.asarray(m, dtype=complex), full_matrices=False)
    return SVD(s, u, vh)


def numerical_rank(values: np.ndarray, tol: float = RANK_TOL) -> int:
    """Count singular values above ``tol`` times the largest one."""
    values = np.asarray(values, dtype=float)
    if values.size == 0 or values[0] == 0:
        return 0
    return int(np.count_nonzero(values > tol * values[0]))


def haar_random_unitary(dim: int, seed: int | np.random.Generator | None = None, special: bool = False) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a Ginibre matrix.

    The phases of ``diag(R)`` are pushed into ``Q`` so the result is exactly
    Haar. With ``special=True`` the determinant is rotated to 1.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))
    if special:
        q = q / np.linalg.det(q) ** (1.0 / dim)
    return q


def random_density_matrix(dim: int, seed: int | np.random.Generator | None = None, rank: int | None = None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    k = dim if rank is None else rank
    g = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_state_vector(dim: int, seed: int | np.random.Generator | None = None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def is_unitary(m: np.ndarray, atol: float = 1e-10) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) < atol)


def psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``."""
    sr = psd_sqrt(rho)
    w = np.linalg.eigvalsh(sr @ sigma @ sr)
    return float(np.sum(np.sqrt(np.clip(w, 0, None))) ** 2)
