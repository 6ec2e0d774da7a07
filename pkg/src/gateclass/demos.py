"""Self-checking experiments behind ``gateclass demo``.

Each function returns a JSON-ready dict with a boolean ``passed`` entry.
"""

from __future__ import annotations

import time

import numpy as np

from . import gates
from .cartan import rank_from_mu
from .choi import GateDescriptor, choi_state, implement_via_state
from .slocc import (
    ThreeQubitLabel,
    four_qubit_alpha_beta,
    four_qubit_family,
    four_qubit_invariant_ratio,
    uw_generation_demo,
)
from .tensor import RANK_TOL, PartyStructure, fidelity, haar_random_unitary, random_density_matrix

TELEPORT_P_TOL = 1e-10
TELEPORT_FIDELITY_TOL = 1e-9
SEPARATION_TOL = 1e-6


def teleport(samples: int = 100, seed: int = 0) -> dict:
    """Gate teleportation through Choi states of random two-qubit unitaries."""
    rng = np.random.default_rng(seed)
    structure = PartyStructure.uniform(2, 2)
    p_err, worst_fid = 0.0, 1.0
    for _ in range(samples):
        u = haar_random_unitary(4, rng)
        rho = random_density_matrix(4, rng)
        out, p = implement_via_state(choi_state(GateDescriptor(u, structure)), rho)
        p_err = max(p_err, abs(p - 1 / 16))
        worst_fid = min(worst_fid, fidelity(out, u @ rho @ u.conj().T))
    return {
        "samples": samples,
        "expected_probability": 1 / 16,
        "max_probability_error": p_err,
        "min_fidelity": worst_fid,
        "passed": bool(p_err < TELEPORT_P_TOL and worst_fid >= 1 - TELEPORT_FIDELITY_TOL),
    }


def canonical_unitaries(mu: np.ndarray) -> np.ndarray:
    """Batch of ``exp(-i sum mu_k s_k s_k)`` built as products of commuting factors."""
    out = np.broadcast_to(np.eye(4, dtype=complex), mu.shape[:-1] + (4, 4))
    for k, letters in enumerate(("XX", "YY", "ZZ")):
        p = gates.pauli_string(letters)
        factor = np.cos(mu[..., k])[..., None, None] * np.eye(4) - 1j * np.sin(mu[..., k])[..., None, None] * p
        out = out @ factor
    return out


def batched_operator_schmidt_ranks(us: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    r = us.reshape(-1, 2, 2, 2, 2).transpose(0, 1, 3, 2, 4).reshape(-1, 4, 4)
    s = np.linalg.svd(r, compute_uv=False)
    return np.count_nonzero(s > tol * s[:, :1], axis=1)


def no_rank_three(samples: int = 1000, grid: int = 50, seed: int = 0, tol: float = RANK_TOL) -> dict:
    """Operator-Schmidt ranks of Haar-random gates and of a grid of canonical angles."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    haar = np.stack([haar_random_unitary(4, rng, special=True) for _ in range(samples)])
    haar_ranks = batched_operator_schmidt_ranks(haar, tol)

    axis = np.linspace(0, np.pi / 4, grid)
    mu = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
    grid_ranks = batched_operator_schmidt_ranks(canonical_unitaries(mu), tol)
    coeff_ranks = rank_from_mu(mu, tol)

    def histogram(r):
        values, counts = np.unique(r, return_counts=True)
        return {str(int(v)): int(c) for v, c in zip(values, counts)}

    allowed = {1, 2, 4}
    ok = all(set(np.unique(r).tolist()) <= allowed for r in (haar_ranks, grid_ranks, coeff_ranks))
    ok = ok and bool(np.array_equal(grid_ranks, coeff_ranks))
    return {
        "haar_samples": samples,
        "grid_points": int(mu.shape[0]),
        "haar_ranks": histogram(haar_ranks),
        "grid_ranks": histogram(grid_ranks),
        "coefficient_ranks": histogram(coeff_ranks),
        "rank_three_count": int(np.sum(haar_ranks == 3) + np.sum(grid_ranks == 3) + np.sum(coeff_ranks == 3)),
        "runtime_s": time.perf_counter() - start,
        "passed": bool(ok),
    }


def four_qubit_family_scan(grid: int = 10, lo: float = 0.05, hi: float = 0.75) -> dict:
    """Structure checks on ``H`` and pairwise separation of the invariant ratio."""
    h = gates.four_qubit_hamiltonian()
    h_err = float(np.max(np.abs(h @ h - 2 * h - 3 * np.eye(16))))
    series_err = 0.0
    for t in np.linspace(lo, hi, 20):
        alpha, beta = four_qubit_alpha_beta(t)
        series_err = max(series_err, float(np.max(np.abs(gates.hamiltonian_gate(h, t) - (alpha * np.eye(16) + beta * h)))))
    ts = np.linspace(lo, hi, grid)
    ratios = np.array([four_qubit_invariant_ratio(four_qubit_family(t)) for t in ts])
    sep = np.abs(ratios[:, None] - ratios[None, :])
    np.fill_diagonal(sep, np.inf)
    min_sep = float(sep.min()) if grid > 1 else float("inf")
    return {
        "h_square_error": h_err,
        "series_error": series_err,
        "ts": ts.tolist(),
        "ratios": [[float(r.real), float(r.imag)] for r in ratios],
        "min_separation": min_sep,
        "inequivalent_gates": grid if min_sep > SEPARATION_TOL else None,
        "passed": bool(h_err < 1e-12 and series_err < 1e-12 and min_sep > SEPARATION_TOL),
    }


def uw_generation(t: float = 0.3) -> dict:
    first, second = uw_generation_demo(t)
    return {
        "t": t,
        "gamma": [gates.uw_gamma(t).real, gates.uw_gamma(t).imag],
        "state_001": first.to_dict(),
        "state_0(0+1)1": second.to_dict(),
        "passed": bool(first.label == ThreeQubitLabel.W and second.label == ThreeQubitLabel.GHZ),
    }


DEMOS = {
    "teleport": teleport,
    "no-rank3": no_rank_three,
    "four-qubit-family": four_qubit_family_scan,
    "uw-generation": uw_generation,
}
