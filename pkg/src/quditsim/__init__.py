"""quditsim: stabilizer simulation of noisy qudit Clifford circuits.

Tableau-based weak and strong simulation for any local dimension d >= 2:
CHP-style measurement with post-measurement tableaus for prime d, Smith
normal form outcome sampling for composite d, Weyl noise via direct
application, error frames, or end-of-circuit phase pushing, and dense
statevector / density-matrix reference backends.
"""

from . import composite, dense, errors, modular, noise, weyl
from .circuit import Circuit, GateOp, MeasureOp, NoiseOp, parse, render_ascii
from .models import NoiseModel, custom, depolarizing, dephasing, dit_flip
from .noise import (
    PauliFrame,
    PushPlan,
    build_push_plan,
    direct_run,
    fidelity_frames,
    fidelity_push,
    mirror_circuit,
    pauli_frame_run,
    push_sample,
)
from .tableau import AffineSampler, MeasurementRecord, Tableau, new_tableau
from .weyl import PauliRow, compose, dense_row, row_power, symplectic_product

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "GateOp",
    "NoiseOp",
    "MeasureOp",
    "parse",
    "render_ascii",
    "NoiseModel",
    "depolarizing",
    "dephasing",
    "dit_flip",
    "custom",
    "Tableau",
    "new_tableau",
    "AffineSampler",
    "MeasurementRecord",
    "PauliRow",
    "compose",
    "row_power",
    "symplectic_product",
    "dense_row",
    "PauliFrame",
    "PushPlan",
    "build_push_plan",
    "push_sample",
    "pauli_frame_run",
    "direct_run",
    "fidelity_push",
    "fidelity_frames",
    "mirror_circuit",
    "composite",
    "dense",
    "noise",
    "modular",
    "weyl",
    "errors",
]
