"""Gate mnemonics and their kernel opcodes."""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import ParseError

# name -> (opcode, number of qudit arguments, takes (a, b) params)
GATE_TABLE = {
    "I": (kernels.OP_I, 1, False),
    "X": (kernels.OP_X, 1, False),
    "Z": (kernels.OP_Z, 1, False),
    "Y": (kernels.OP_Y, 1, False),
    "W": (kernels.OP_W, 1, True),
    "H": (kernels.OP_H, 1, False),
    "S": (kernels.OP_S, 1, False),
    "CNOT": (kernels.OP_CNOT, 2, False),
    "CZ": (kernels.OP_CZ, 2, False),
    "SWAP": (kernels.OP_SWAP, 2, False),
}

ALIASES = {"CX": "CNOT"}

TWO_QUDIT = {"CNOT", "CZ", "SWAP"}


def split_mnemonic(mnemonic: str) -> tuple[str, bool]:
    """'HDAG' -> ('H', True); accepts the CX alias; raises ValueError."""
    name = mnemonic.upper()
    dagger = False
    if name.endswith("DAG"):
        name = name[:-3]
        dagger = True
    name = ALIASES.get(name, name)
    if name not in GATE_TABLE:
        raise ValueError(f"unknown gate {mnemonic!r}")
    return name, dagger


def pack_op(gate: str, qudits, params=(), dagger=False) -> np.ndarray:
    """One packed kernel row [code, dag, q0, q1, a, b]."""
    code, arity, takes_params = GATE_TABLE[gate]
    q0 = qudits[0]
    q1 = qudits[1] if arity == 2 else -1
    a, b = params if takes_params else (0, 0)
    return np.array([code, int(dagger), q0, q1, a, b], dtype=np.int64)


def mnemonic(gate: str, dagger: bool) -> str:
    return gate + ("DAG" if dagger else "")


__all__ = ["GATE_TABLE", "ALIASES", "TWO_QUDIT", "split_mnemonic", "pack_op", "mnemonic", "ParseError"]
