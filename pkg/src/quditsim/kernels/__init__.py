"""Hot-kernel backend selection.

Prefers the compiled Cython extension; falls back to the pure-numpy
implementation when the extension is missing or QUDITSIM_PURE=1 is set.
Both expose the same functions and the same op encoding.
"""

import os

from . import _fallback

if os.environ.get("QUDITSIM_PURE") == "1":
    _impl = _fallback
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _fallback

OP_I = _fallback.OP_I
OP_X = _fallback.OP_X
OP_Z = _fallback.OP_Z
OP_Y = _fallback.OP_Y
OP_W = _fallback.OP_W
OP_H = _fallback.OP_H
OP_S = _fallback.OP_S
OP_CNOT = _fallback.OP_CNOT
OP_CZ = _fallback.OP_CZ
OP_SWAP = _fallback.OP_SWAP

IS_COMPILED = _impl.IS_COMPILED
BACKEND_NAME = "compiled" if IS_COMPILED else "numpy"

apply_ops = _impl.apply_ops
frame_apply_ops = _impl.frame_apply_ops
measure_qudits = _impl.measure_qudits
