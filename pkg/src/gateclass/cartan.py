"""Two-qubit canonical form ``U = g (V (x) W) exp(-i sum_k mu_k s_k (x) s_k) (V' (x) W')``.

The angles are brought into the chamber ``pi/4 >= mu_1 >= mu_2 >= |mu_3| >= 0``.
Extraction goes through the magic basis, where local gates become real
orthogonal matrices and the nonlocal core becomes diagonal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .choi import GateDescriptor
from .schmidt import operator_schmidt_rank
from .tensor import I2, RANK_TOL, SX, SY, SZ, PartyStructure, is_unitary, kron, reshuffle_operator

MAGIC = np.array([[1, 0, 0, 1j],
                  [0, 1j, 1, 0],
                  [0, 1j, -1, 0],
                  [1, 0, 0, -1j]]) / np.sqrt(2)
MAGIC_DAG = MAGIC.conj().T

_SIGMA = (SX, SY, SZ)
_PP = tuple(np.kron(s, s) for s in _SIGMA)
# sign of s_k (x) s_k on each magic basis vector, rows = basis vectors
SIGNS = np.real(np.stack([np.diag(MAGIC_DAG @ p @ MAGIC) for p in _PP], axis=1))

_S = np.diag([1, 1j])
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_RX = (I2 - 1j * SX) / np.sqrt(2)
# local Cliffords exchanging two Pauli axes (up to sign) and fixing the third
_AXIS_SWAP = {(0, 1): _S, (0, 2): _H, (1, 2): _RX}

_MIX = (0.6180339887498949, 1.4142135623730951, 0.3183098861837907, 2.718281828459045, -0.5772156649015329)
_EDGE = 1e-9
_I4 = np.eye(4, dtype=complex)


class TwoQubitClass(str, enum.Enum):
    LOCAL = "Local"
    CNOT = "CnotClass"
    SWAP = "SwapClass"


class RankThreeError(ArithmeticError):
    """A unitary reported operator-Schmidt rank 3, which cannot happen exactly."""


@dataclass(frozen=True)
class CartanParams:
    mu: tuple[float, float, float]
    locals: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    global_phase: complex

    def core(self) -> np.ndarray:
        return canonical_unitary(self.mu)

    def reconstruct(self) -> np.ndarray:
        v, w, vt, wt = self.locals
        return self.global_phase * kron(v, w) @ self.core() @ kron(vt, wt)


def canonical_unitary(mu) -> np.ndarray:
    """``exp(-i sum_k mu_k s_k (x) s_k)``, diagonal in the magic basis."""
    return MAGIC @ np.diag(np.exp(-1j * (SIGNS @ np.asarray(mu, dtype=float)))) @ MAGIC_DAG


def _as_matrix(u) -> np.ndarray:
    m = u.matrix if isinstance(u, GateDescriptor) else np.asarray(u, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"two-qubit gate must be 4x4, got {m.shape}")
    if not is_unitary(m, 1e-10):
        raise ValueError("two-qubit canonical form needs a unitary input")
    return m


def _half_phases(eigs: np.ndarray) -> np.ndarray:
    """Angles theta with exp(2i theta) = eigs, folded to (-pi/2, pi/2] and summing to exactly 0."""
    theta = np.angle(eigs) / 2
    total = theta.sum()  # a multiple of pi up to rounding
    if int(np.round(total / np.pi)) % 2:
        # determinant of the square root would be -1; move one root to the other branch
        theta[0] += np.pi
        total += np.pi
    theta[0] -= 2 * np.pi * np.round(total / (2 * np.pi))
    return theta


def _angles_from_phases(theta: np.ndarray) -> np.ndarray:
    # canonical_unitary(c) has magic-basis phases -SIGNS @ c; SIGNS^T SIGNS = 4
    return -(SIGNS.T @ theta) / 4


class _Tracker:
    """Keeps ``E(c_in) = phase * left @ E(c) @ right`` while c is moved around."""

    def __init__(self, c, track: bool):
        self.c = np.array(c, dtype=float)
        self.track = track
        self.phase = 1 + 0j
        self.left = _I4.copy()
        self.right = _I4.copy()

    def shift(self, k: int, n: int):
        if n == 0:
            return
        self.c[k] -= n * np.pi / 2
        if self.track:
            self.right = np.linalg.matrix_power(_PP[k], n % 2) @ self.right
            self.phase *= (-1j) ** n

    def flip(self, k: int):
        """Negate the two angles other than ``k``."""
        for j in range(3):
            if j != k:
                self.c[j] = -self.c[j]
        if self.track:
            f = np.kron(_SIGMA[k], I2)
            self.left = self.left @ f
            self.right = f @ self.right

    def swap(self, j: int, k: int):
        j, k = min(j, k), max(j, k)
        self.c[[j, k]] = self.c[[k, j]]
        if self.track:
            q = np.kron(_AXIS_SWAP[(j, k)], _AXIS_SWAP[(j, k)])
            self.left = self.left @ q.conj().T
            self.right = q @ self.right


def _canonicalize(c, track: bool = True) -> _Tracker:
    t = _Tracker(c, track)
    for k in range(3):
        t.shift(k, int(np.round(t.c[k] / (np.pi / 2))))
    # sort by magnitude, largest first
    for i in range(3):
        for j in range(2 - i):
            if abs(t.c[j]) < abs(t.c[j + 1]):
                t.swap(j, j + 1)
    if t.c[0] < 0 and t.c[1] < 0:
        t.flip(2)
    elif t.c[0] < 0:
        t.flip(1)
    elif t.c[1] < 0:
        t.flip(0)
    # on the mu_1 = pi/4 face, mu_3 and -mu_3 are locally equivalent
    if t.c[2] < 0 and abs(t.c[0] - np.pi / 4) < _EDGE:
        t.shift(0, 1)
        t.flip(1)
    return t


def _real_orthogonal_eigenbasis(m: np.ndarray) -> np.ndarray:
    """Real orthogonal O with O^T m O diagonal for a complex-symmetric unitary m.

    Real and imaginary parts commute, so one fixed real combination of them
    is diagonalized; several fixed mixing weights are tried and the best kept.
    """
    m = (m + m.T) / 2
    best, best_err = None, np.inf
    for kappa in _MIX:
        _, o = np.linalg.eigh(m.real + kappa * m.imag)
        d = o.T @ m @ o
        err = np.max(np.abs(d - np.diag(np.diag(d))))
        if err < best_err:
            best, best_err = o, err
        if err < 1e-13:
            break
    if np.linalg.det(best) < 0:
        best = best.copy()
        best[:, 0] = -best[:, 0]
    return best


def kron_factor(m: np.ndarray) -> tuple[complex, np.ndarray, np.ndarray]:
    """Split a 4x4 product of unitaries into ``phase * kron(a, b)`` with ``a, b`` in SU(2)."""
    r = reshuffle_operator(m, PartyStructure.uniform(2, 2))
    u, s, vh = np.linalg.svd(r)
    a = (u[:, 0] * np.sqrt(s[0])).reshape(2, 2)
    b = (vh[0] * np.sqrt(s[0])).reshape(2, 2)
    da, db = np.sqrt(np.linalg.det(a)), np.sqrt(np.linalg.det(b))
    return complex(da * db), a / da, b / db


def cartan_decompose(u) -> CartanParams:
    """Canonical angles, SU(2) local factors and a global phase for a two-qubit unitary."""
    m = _as_matrix(u)
    det = np.linalg.det(m)
    g = det ** 0.25
    um = MAGIC_DAG @ (m / g) @ MAGIC
    o = _real_orthogonal_eigenbasis(um.T @ um)
    theta = _half_phases(np.diag(o.T @ um.T @ um @ o))
    o1 = um @ o @ np.diag(np.exp(-1j * theta))
    if np.max(np.abs(o1.imag)) > 1e-6:
        raise ArithmeticError("magic-basis factor is not real; eigenbasis extraction failed")
    k1 = MAGIC @ o1.real @ MAGIC_DAG
    k2 = MAGIC @ o.T @ MAGIC_DAG

    t = _canonicalize(_angles_from_phases(theta))
    p1, v, w = kron_factor(k1 @ t.left)
    p2, vt, wt = kron_factor(t.right @ k2)
    mu = tuple(float(x) for x in t.c)
    return CartanParams(mu, (v, w, vt, wt), complex(g * t.phase * p1 * p2))


def mu_invariants(u) -> tuple[float, float, float]:
    """Canonical angles only, from the spectrum of ``U_m^T U_m`` in the magic basis."""
    m = _as_matrix(u)
    um = MAGIC_DAG @ (m / np.linalg.det(m) ** 0.25) @ MAGIC
    theta = _half_phases(np.linalg.eigvals(um.T @ um))
    t = _canonicalize(_angles_from_phases(theta), track=False)
    return tuple(float(x) for x in t.c)


def choi_coefficients(mu) -> np.ndarray:
    """Amplitudes ``a_k`` of ``sum_k a_k |Phi_k>|Phi_k>`` for the canonical core.

    Accepts a single triple or an array of shape ``(..., 3)``.
    """
    mu = np.asarray(mu, dtype=float)
    c, s = np.cos(mu), np.sin(mu)
    c1, c2, c3 = c[..., 0], c[..., 1], c[..., 2]
    s1, s2, s3 = s[..., 0], s[..., 1], s[..., 2]
    return np.stack([
        c1 * c2 * c3 - 1j * s1 * s2 * s3,
        c1 * s2 * s3 - 1j * s1 * c2 * c3,
        s1 * c2 * s3 - 1j * c1 * s2 * c3,
        s1 * s2 * c3 - 1j * c1 * c2 * s3,
    ], axis=-1)


def rank_from_mu(mu, tol: float = RANK_TOL):
    """Number of Choi coefficients with ``|a_k| > tol * max|a|``.

    Vectorized over leading axes. Exact arithmetic never gives 3, but angles
    whose sine products fall near ``tol`` can, so callers decide what to do.
    """
    a = np.abs(choi_coefficients(mu))
    counts = np.count_nonzero(a > tol * a.max(axis=-1, keepdims=True), axis=-1)
    return int(counts) if counts.ndim == 0 else counts


_CLASS_BY_RANK = {1: TwoQubitClass.LOCAL, 2: TwoQubitClass.CNOT, 4: TwoQubitClass.SWAP}


def two_qubit_class(u, tol: float = RANK_TOL) -> TwoQubitClass:
    gate = u if isinstance(u, GateDescriptor) else GateDescriptor.from_matrix(_as_matrix(u))
    _as_matrix(gate)
    rank = operator_schmidt_rank(gate, tol)
    if rank not in _CLASS_BY_RANK:
        raise RankThreeError(f"operator-Schmidt rank {rank} at tol {tol}; tolerance too tight or too loose")
    return _CLASS_BY_RANK[rank]
