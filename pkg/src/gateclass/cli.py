"""Command-line front end.

Gates are given either as JSON files or as built-in names: ``identity``,
``cnot``, ``swap``, ``xx(t)``, ``xy(t)``, ``xxx(t)``, ``uw(t)``, ``four(t)``
and ``haar`` (seeded by ``--seed``).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import demos, gates
from .cartan import RankThreeError, cartan_decompose, two_qubit_class
from .choi import GateDescriptor, PureState, choi_state
from .jsonio import gate_from_dict, gate_to_dict, load_json, state_from_dict, state_to_dict, tensor_to_dict
from .schmidt import entanglement_entropy, operator_schmidt_rank, schmidt_decompose, schmidt_number
from .slocc import (
    UndefinedInvariantError,
    can_generate,
    can_simulate,
    can_simulate_multicopy,
    classify_three_qubit,
    effective_qubit_state,
    four_qubit_invariant_ratio,
    operator_class,
)
from .tensor import RANK_TOL, PartyStructure

SCHEMA_PATH = os.path.join(os.path.dirname(__file__), "schemas", "report.schema.json")


class InputError(Exception):
    pass


def _sig(x: float) -> float:
    """Round to 12 significant digits for diffable output."""
    return float(f"{x:.12g}") + 0.0


def load_gate(arg: str, seed: int | None) -> GateDescriptor:
    if os.path.exists(arg):
        try:
            return gate_from_dict(load_json(arg))
        except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
            raise InputError(f"{arg}: malformed gate file ({exc})") from None
    try:
        return gates.builtin_gate(arg, seed)
    except (KeyError, ValueError):
        raise InputError(f"{arg}: no such file or built-in gate (built-ins: {', '.join(gates.BUILTIN_NAMES)})") from None


def _builtin_state(name: str) -> PureState:
    name = name.lower().strip()
    if name == "ghz":
        return PureState.from_vector(gates.GHZ_VECTOR)
    if name == "w":
        return PureState.from_vector(gates.W_VECTOR)
    if name == "bell":
        return PureState.from_vector(np.array([1, 0, 0, 1]) / np.sqrt(2))
    if name == "product":
        return PureState.from_vector(np.array([1, 0, 0, 0]))
    if name.startswith("rank(") and name.endswith(")"):
        k = int(name[5:-1])
        if not 1 <= k <= 4:
            raise ValueError("rank(k) needs 1 <= k <= 4")
        m = np.zeros((4, 4), dtype=complex)
        m[range(k), range(k)] = 1 / np.sqrt(k)
        return PureState(m.reshape(-1), PartyStructure(("A", "B"), (4, 4)))
    raise KeyError(name)


def load_state(arg: str) -> PureState:
    if os.path.exists(arg):
        try:
            return state_from_dict(load_json(arg))
        except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
            raise InputError(f"{arg}: malformed state file ({exc})") from None
    try:
        return _builtin_state(arg)
    except (KeyError, ValueError):
        raise InputError(f"{arg}: no such file or built-in state (ghz, w, bell, product, rank(k))") from None


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def _classify(gate: GateDescriptor, tol: float) -> dict:
    out: dict = {"parties": list(gate.structure.parties), "local_dims": list(gate.local_dims), "unitary": gate.unitary}
    psi = choi_state(gate)
    out["choi_norm"] = _sig(psi.norm)
    if gate.num_parties == 2:
        data = schmidt_decompose(psi, [gate.structure.parties[0]], tol)
        out["schmidt_coefficients"] = [_sig(x) for x in data.coefficients]
        out["schmidt_number"] = data.rank
        out["operator_schmidt_rank"] = operator_schmidt_rank(gate, tol)
        if gate.unitary and gate.local_dims == (2, 2):
            out["label"] = two_qubit_class(gate, tol).value
            out["mu"] = [_sig(x) for x in cartan_decompose(gate).mu]
            out["entanglement_entropy_bits"] = _sig(entanglement_entropy(psi, ["A"]))
        elif not gate.unitary:
            out["operator_class"] = operator_class(gate, tol)
            out["class_count"] = gate.local_dims[0] * gate.local_dims[1]
        else:
            out["label"] = f"rank-{data.rank}"
        return out
    out["single_party_schmidt_numbers"] = {p: schmidt_number(psi, [p], tol) for p in gate.structure.parties}
    if set(gate.local_dims) == {2} and gate.num_parties in (3, 4):
        try:
            eff = effective_qubit_state(psi)
        except ValueError as exc:
            out["effective_qubit"] = {"available": False, "reason": str(exc)}
            return out
        if gate.num_parties == 3:
            out["effective_qubit"] = {"available": True, **classify_three_qubit(eff).to_dict()}
        else:
            try:
                r = four_qubit_invariant_ratio(eff)
                out["effective_qubit"] = {"available": True, "invariant_ratio": [_sig(r.real), _sig(r.imag)]}
            except UndefinedInvariantError as exc:
                out["effective_qubit"] = {"available": True, "invariant_ratio": None, "reason": str(exc)}
    return out


def _decompose(gate: GateDescriptor) -> dict:
    if gate.local_dims != (2, 2):
        raise InputError("decompose needs a two-qubit gate")
    p = cartan_decompose(gate)
    return {
        "mu": [_sig(x) for x in p.mu],
        "locals": {k: tensor_to_dict(m) for k, m in zip(("V", "W", "V_tilde", "W_tilde"), p.locals)},
        "global_phase": [_sig(p.global_phase.real), _sig(p.global_phase.imag)],
        "reconstruction_error": float(np.max(np.abs(p.reconstruct() - gate.matrix))),
    }


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=RANK_TOL, help="relative rank tolerance (default 1e-8)")
    common.add_argument("--seed", type=int, default=None, help="seed for random gates and demos")
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    parser = argparse.ArgumentParser(prog="gateclass", description="SLOCC classes of nonlocal gates")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="class, canonical angles and Schmidt data of a gate")
    p.add_argument("gate")
    p = sub.add_parser("simulate", parents=[common], help="can gate A simulate gate B under SLOCC")
    p.add_argument("gate_a")
    p.add_argument("gate_b")
    p.add_argument("--copies", nargs=2, type=int, metavar=("N", "M"), default=None)
    p = sub.add_parser("generate", parents=[common], help="can a gate generate a state under SLOCC")
    p.add_argument("gate")
    p.add_argument("state")
    p = sub.add_parser("choi", parents=[common], help="Choi state of a gate")
    p.add_argument("gate")
    p = sub.add_parser("decompose", parents=[common], help="two-qubit canonical form")
    p.add_argument("gate")
    p = sub.add_parser("demo", parents=[common], help="run a self-checking experiment")
    p.add_argument("name", choices=sorted(demos.DEMOS))
    p.add_argument("--grid", type=int, default=None, help="grid size (no-rank3: per axis, four-qubit-family: points)")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--t", type=float, default=0.3, help="interaction time for uw-generation")
    return parser


def run(args) -> tuple[dict, dict, bool | None]:
    """Return (inputs, result, passed) for parsed arguments."""
    cmd = args.command
    if cmd == "classify":
        g = load_gate(args.gate, args.seed)
        return {"gate": gate_to_dict(g)}, _classify(g, args.tol), None
    if cmd == "simulate":
        a, b = load_gate(args.gate_a, args.seed), load_gate(args.gate_b, args.seed)
        inputs = {"gate_a": gate_to_dict(a), "gate_b": gate_to_dict(b), "copies": args.copies}
        try:
            if args.copies:
                verdict = can_simulate_multicopy(a, args.copies[0], b, args.copies[1], args.tol)
            else:
                verdict = can_simulate(a, b, args.tol)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        return inputs, verdict.to_dict(), None
    if cmd == "generate":
        g, s = load_gate(args.gate, args.seed), load_state(args.state)
        try:
            verdict = can_generate(g, s, args.tol)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        return {"gate": gate_to_dict(g), "state": state_to_dict(s)}, verdict.to_dict(), None
    if cmd == "choi":
        g = load_gate(args.gate, args.seed)
        psi = choi_state(g)
        return {"gate": gate_to_dict(g)}, {"state": state_to_dict(psi), "norm": psi.norm}, None
    if cmd == "decompose":
        g = load_gate(args.gate, args.seed)
        return {"gate": gate_to_dict(g)}, _decompose(g), None
    if cmd == "demo":
        seed = 0 if args.seed is None else args.seed
        kwargs: dict = {}
        if args.name == "teleport":
            kwargs = {"seed": seed, **({"samples": args.samples} if args.samples else {})}
        elif args.name == "no-rank3":
            kwargs = {"seed": seed, "tol": args.tol}
            if args.samples:
                kwargs["samples"] = args.samples
            if args.grid:
                kwargs["grid"] = args.grid
        elif args.name == "four-qubit-family":
            kwargs = {"grid": args.grid} if args.grid else {}
        elif args.name == "uw-generation":
            kwargs = {"t": args.t}
        result = demos.DEMOS[args.name](**kwargs)
        return {"demo": args.name, **kwargs}, result, result["passed"]
    raise InputError(f"unknown command {cmd}")


def _print_human(report: dict):
    print(f"command: {report['command']}")
    for key, value in report["result"].items():
        if isinstance(value, (dict, list)) and len(json.dumps(value)) > 200:
            value = "<large; use --json>"
        print(f"{key}: {json.dumps(value) if not isinstance(value, str) else value}")
    if report["passed"] is not None:
        print("PASS" if report["passed"] else "FAIL")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        inputs, result, passed = run(args)
    except (InputError, RankThreeError) as exc:
        print(f"gateclass: error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": " ".join(["gateclass"] + (list(argv) if argv is not None else sys.argv[1:])),
        "inputs_digest": _digest(inputs),
        "result": result,
        "tolerances": {"rank": args.tol},
        "seed": args.seed,
        "wall_time": time.perf_counter() - start,
        "passed": passed,
    }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        _print_human(report)
    return 0 if passed in (None, True) else 1


if __name__ == "__main__":
    sys.exit(main())
