"""Bipartite Schmidt data for states and the operator-Schmidt rank of gates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .choi import GateDescriptor, PureState, choi_state
from .tensor import RANK_TOL, PartyStructure, bipartite_matrix, numerical_rank, reshuffle_operator, svd


@dataclass(frozen=True)
class SchmidtData:
    """Schmidt coefficients ``lambda_i`` (squared singular values), bases and rank.

    Only the first ``rank`` coefficients and basis vectors are kept.
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    rank: int
    tolerance_used: float

    def reconstruct(self) -> np.ndarray:
        amps = np.sqrt(self.coefficients)
        return np.einsum("i,ai,bi->ab", amps, self.left_basis, self.right_basis).reshape(-1)


def schmidt_decompose(state: PureState, bipartition: Iterable[int | str], tol: float = RANK_TOL) -> SchmidtData:
    """Schmidt decomposition across ``bipartition | rest``.

    Coefficients are counted when ``sqrt(lambda_i) > tol * sqrt(lambda_1)``.
    The reconstruction follows the slot order ``bipartition + rest``.
    """
    m = bipartite_matrix(state.vector, bipartition, state.structure)
    res = svd(m)
    r = numerical_rank(res.values, tol)
    if r == 0:
        raise ValueError("zero vector has no Schmidt decomposition")
    return SchmidtData(res.values[:r] ** 2, res.left[:, :r], res.right_h[:r].T, r, tol)


def schmidt_number(state: PureState, bipartition: Iterable[int | str], tol: float = RANK_TOL) -> int:
    m = bipartite_matrix(state.vector, bipartition, state.structure)
    return numerical_rank(np.linalg.svd(m, compute_uv=False), tol)


def entanglement_entropy(state: PureState, bipartition: Iterable[int | str]) -> float:
    """Von Neumann entropy of either reduced state, in bits."""
    m = bipartite_matrix(state.vector, bipartition, state.structure)
    lam = np.linalg.svd(m, compute_uv=False) ** 2
    lam = lam / lam.sum()
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def _require_bipartite(gate: GateDescriptor):
    if gate.num_parties != 2:
        raise ValueError(f"expected a bipartite gate, got {gate.num_parties} parties")


def operator_schmidt_values(gate: GateDescriptor) -> np.ndarray:
    _require_bipartite(gate)
    return np.linalg.svd(reshuffle_operator(gate.matrix, gate.structure), compute_uv=False)


def operator_schmidt_rank(gate: GateDescriptor, tol: float = RANK_TOL) -> int:
    """Rank of the reshuffled operator, equal to the Choi-state Schmidt number."""
    return numerical_rank(operator_schmidt_values(gate), tol)


def choi_schmidt_number(gate: GateDescriptor, tol: float = RANK_TOL) -> int:
    """Schmidt number of the Choi state across party A's slots versus the rest."""
    _require_bipartite(gate)
    return schmidt_number(choi_state(gate), [gate.structure.parties[0]], tol)


def gate_tensor_power(gate: GateDescriptor, copies: int) -> GateDescriptor:
    """``gate^{(x) copies}`` regrouped so each party holds all of its copies as one slot."""
    if copies < 1:
        raise ValueError("copies must be at least 1")
    dims = gate.local_dims
    n = len(dims)
    big = gate.matrix
    for _ in range(copies - 1):
        big = np.kron(big, gate.matrix)
    # axes are (copy c, party p) in c-major order for rows and for columns
    t = big.reshape(dims * copies * 2)
    perm = [c * n + p for p in range(n) for c in range(copies)]
    half = n * copies
    t = np.transpose(t, perm + [half + k for k in perm])
    new_dims = tuple(d**copies for d in dims)
    D = int(np.prod(new_dims))
    return GateDescriptor(
        t.reshape(D, D),
        PartyStructure(gate.structure.parties, new_dims),
        gate.unitary,
        f"{gate.name}^{copies}" if gate.name else "",
    )


def multicopy_schmidt_number(gate: GateDescriptor, copies: int, tol: float = RANK_TOL) -> int:
    """Schmidt number of the Choi state of ``copies`` parallel uses of ``gate``.

    Computed as ``rank ** copies``; for ``copies <= 2`` the tensor power is
    also built explicitly and the two must agree.
    """
    if copies < 1:
        raise ValueError("copies must be at least 1")
    rank = operator_schmidt_rank(gate, tol)
    value = rank**copies
    if copies <= 2:
        explicit = choi_schmidt_number(gate_tensor_power(gate, copies), tol)
        if explicit != value:
            raise ArithmeticError(f"explicit {copies}-copy rank {explicit} != {rank}**{copies}")
    return value
