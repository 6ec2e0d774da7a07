"""JSON interchange: ``{"shape": [...], "entries": [[re, im], ...]}`` in row-major order.

Gates and states add ``"parties"`` and ``"local_dims"``; a local dimension is
an integer for a single slot or a list for several slots. Gates may also carry
``"unitary"`` and ``"name"``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .choi import UNITARITY_TOL, GateDescriptor, PureState
from .tensor import PartyStructure, is_unitary


def tensor_to_dict(a) -> dict:
    a = np.asarray(a, dtype=complex)
    flat = a.reshape(-1)
    return {"shape": list(a.shape), "entries": [[float(z.real), float(z.imag)] for z in flat]}


def tensor_from_dict(obj: dict) -> np.ndarray:
    try:
        shape = [int(s) for s in obj["shape"]]
        entries = np.asarray(obj["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed tensor object: {exc}") from None
    if entries.ndim != 2 or entries.shape[1] != 2:
        raise ValueError("entries must be a list of [re, im] pairs")
    if entries.shape[0] != int(np.prod(shape)):
        raise ValueError(f"{entries.shape[0]} entries do not fill shape {shape}")
    return (entries[:, 0] + 1j * entries[:, 1]).reshape(shape)


def _structure_to_dict(s: PartyStructure) -> dict:
    return {"parties": list(s.parties), "local_dims": [d[0] if len(d) == 1 else list(d) for d in s.local_dims]}


def _structure_from_dict(obj: dict, total: int, default_slots: int = 1) -> PartyStructure:
    if "local_dims" in obj:
        dims = obj["local_dims"]
        parties = obj.get("parties") or [chr(ord("A") + k) for k in range(len(dims))]
        return PartyStructure(tuple(parties), tuple(dims))
    n = int(round(np.log2(total)))
    if 2**n != total or n % default_slots:
        raise ValueError("local_dims missing and dimension is not a qubit register")
    return PartyStructure.uniform(n // default_slots, 2, default_slots)


def gate_to_dict(g: GateDescriptor) -> dict:
    out = tensor_to_dict(g.matrix)
    out.update(_structure_to_dict(g.structure))
    out["unitary"] = bool(g.unitary)
    if g.name:
        out["name"] = g.name
    return out


def gate_from_dict(obj: dict) -> GateDescriptor:
    m = tensor_from_dict(obj)
    if m.ndim != 2:
        raise ValueError("a gate needs a two-dimensional shape")
    structure = _structure_from_dict(obj, m.shape[0])
    unitary = obj.get("unitary")
    if unitary is None:
        unitary = is_unitary(m, UNITARITY_TOL)
    return GateDescriptor(m, structure, bool(unitary), obj.get("name", ""))


def state_to_dict(s: PureState) -> dict:
    out = tensor_to_dict(s.vector)
    out.update(_structure_to_dict(s.structure))
    return out


def state_from_dict(obj: dict) -> PureState:
    v = tensor_from_dict(obj).reshape(-1)
    return PureState(v, _structure_from_dict(obj, v.size))


def load_json(path) -> dict:
    with open(Path(path)) as fh:
        return json.load(fh)
