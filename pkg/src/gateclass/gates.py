"""Named gates used in examples, tests and the CLI."""

from __future__ import annotations

import re

import numpy as np

from .choi import GateDescriptor
from .tensor import I2, SX, SY, SZ, PartyStructure, haar_random_unitary, kron

W_VECTOR = np.zeros(8, dtype=complex)
W_VECTOR[[1, 2, 4]] = 1 / np.sqrt(3)
GHZ_VECTOR = np.zeros(8, dtype=complex)
GHZ_VECTOR[[0, 7]] = 1 / np.sqrt(2)

_PAULI_BY_LETTER = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def _qubit_gate(matrix, name, n=None):
    matrix = np.asarray(matrix, dtype=complex)
    if n is None:
        n = int(round(np.log2(matrix.shape[0])))
    return GateDescriptor(matrix, PartyStructure.uniform(n, 2), True, name)


def pauli_string(letters: str) -> np.ndarray:
    return kron(*[_PAULI_BY_LETTER[c] for c in letters])


def pauli_exp(t: float, letters: str) -> np.ndarray:
    """``exp(-i t P)`` for a Pauli string ``P`` (which squares to one)."""
    p = pauli_string(letters)
    return np.cos(t) * np.eye(p.shape[0]) - 1j * np.sin(t) * p


def hamiltonian_gate(h: np.ndarray, t: float) -> np.ndarray:
    """``exp(-i t H)`` for Hermitian ``H`` through its eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def identity(n_parties: int = 2, d: int = 2) -> GateDescriptor:
    return GateDescriptor(np.eye(d**n_parties), PartyStructure.uniform(n_parties, d), True, "identity")


def cnot() -> GateDescriptor:
    m = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    return _qubit_gate(m, "cnot")


def swap() -> GateDescriptor:
    m = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    return _qubit_gate(m, "swap")


def xx(t: float) -> GateDescriptor:
    return _qubit_gate(pauli_exp(t, "XX"), f"xx({t!r})")


def xy(t: float) -> GateDescriptor:
    """``exp(-i t (XX + YY))``; the two terms commute."""
    return _qubit_gate(pauli_exp(t, "XX") @ pauli_exp(t, "YY"), f"xy({t!r})")


def canonical_gate(mu) -> GateDescriptor:
    """``exp(-i sum_k mu_k sigma_k (x) sigma_k)`` as a product of commuting factors."""
    m = pauli_exp(mu[0], "XX") @ pauli_exp(mu[1], "YY") @ pauli_exp(mu[2], "ZZ")
    return _qubit_gate(m, f"canonical({mu[0]!r}, {mu[1]!r}, {mu[2]!r})")


def xxx(t: float) -> GateDescriptor:
    return _qubit_gate(pauli_exp(t, "XXX"), f"xxx({t!r})")


def w_projector() -> np.ndarray:
    return np.outer(W_VECTOR, W_VECTOR.conj())


def uw_gamma(t: float) -> complex:
    """Sum of the exponential series without its constant term, ``e^{-it} - 1``."""
    return complex(np.expm1(-1j * t))


def uw(t: float) -> GateDescriptor:
    """``exp(-i t |W><W|) = 1 + gamma(t) |W><W|``."""
    return _qubit_gate(np.eye(8) + uw_gamma(t) * w_projector(), f"uw({t!r})")


def four_qubit_hamiltonian() -> np.ndarray:
    """``XXXX + IIXX + XXII``."""
    return pauli_string("XXXX") + pauli_string("IIXX") + pauli_string("XXII")


def four_qubit_gate(t: float) -> GateDescriptor:
    return _qubit_gate(hamiltonian_gate(four_qubit_hamiltonian(), t), f"four({t!r})")


def random_two_qubit(seed) -> GateDescriptor:
    return _qubit_gate(haar_random_unitary(4, seed, special=True), f"haar(seed={seed})" if isinstance(seed, int) else "haar")


_NAMED = {
    "identity": lambda: identity(),
    "cnot": cnot,
    "swap": swap,
}
_PARAMETRIC = {
    "xx": xx,
    "xy": xy,
    "xxx": xxx,
    "uw": uw,
    "four": four_qubit_gate,
}
_PATTERN = re.compile(r"^\s*([a-z]+)\s*(?:\(\s*([^)]*)\s*\))?\s*$")


def builtin_gate(spec: str, seed: int | None = None) -> GateDescriptor:
    """Parse names such as ``cnot``, ``xx(0.3)`` or ``haar`` (uses ``seed``)."""
    m = _PATTERN.match(spec.lower())
    if not m:
        raise KeyError(spec)
    name, arg = m.group(1), m.group(2)
    if name in _NAMED and not arg:
        return _NAMED[name]()
    if name in _PARAMETRIC and arg:
        return _PARAMETRIC[name](float(arg))
    if name == "haar":
        return random_two_qubit(int(arg) if arg else (0 if seed is None else seed))
    raise KeyError(spec)


BUILTIN_NAMES = tuple(_NAMED) + tuple(f"{k}(t)" for k in _PARAMETRIC) + ("haar",)
