"""Pure-numpy implementations of the hot kernels.

Used when the compiled extension is unavailable (or disabled via
QUDITSIM_PURE=1).  Semantics are identical to quditsim.kernels._core;
the test suite runs both against each other.

Op encoding: int64 array of shape (G, 6), one row per gate:
    [code, dagger, q0, q1, a, b]
with q1 = -1 for single-qudit gates and (a, b) used only by W.
"""

from __future__ import annotations

import numpy as np

OP_I = 0
OP_X = 1
OP_Z = 2
OP_Y = 3
OP_W = 4
OP_H = 5
OP_S = 6
OP_CNOT = 7
OP_CZ = 8
OP_SWAP = 9

IS_COMPILED = False


def apply_ops(x: np.ndarray, z: np.ndarray, r: np.ndarray, ops: np.ndarray, d: int) -> None:
    """Apply a packed gate sequence to tableau arrays in place.

    x, z: (rows, n) int64 exponents; r: (rows,) int64 tau exponents.
    All right-hand sides read pre-gate values; the phase term of H uses the
    post-update product (equivalently r -= 2*x*z on pre-values), which is the
    reading fixed by conjugating dense matrices.
    """
    d2 = 2 * d
    for code, dag, q0, q1, a, b in ops:
        sgn = -1 if dag else 1
        if code == OP_I:
            continue
        elif code == OP_X:
            r -= sgn * 2 * z[:, q0]
        elif code == OP_Z:
            r += sgn * 2 * x[:, q0]
        elif code == OP_Y:
            r += sgn * 2 * (x[:, q0] - z[:, q0])
        elif code == OP_W:
            r += sgn * 2 * (b * x[:, q0] - a * z[:, q0])
        elif code == OP_H:
            xq = x[:, q0].copy()
            zq = z[:, q0].copy()
            if not dag:
                x[:, q0] = (-zq) % d
                z[:, q0] = xq
            else:
                x[:, q0] = zq
                z[:, q0] = (-xq) % d
            r += 2 * x[:, q0] * z[:, q0]
        elif code == OP_S:
            xq = x[:, q0]
            if d % 2 == 0:
                delta = xq * xq
            else:
                delta = xq * (xq - 1)
            r += sgn * delta
            z[:, q0] = (z[:, q0] + sgn * xq) % d
        elif code == OP_CNOT:
            x[:, q1] = (x[:, q1] + sgn * x[:, q0]) % d
            z[:, q0] = (z[:, q0] - sgn * z[:, q1]) % d
        elif code == OP_CZ:
            r += sgn * 2 * x[:, q0] * x[:, q1]
            zc = (z[:, q0] + sgn * x[:, q1]) % d
            zt = (z[:, q1] + sgn * x[:, q0]) % d
            z[:, q0] = zc
            z[:, q1] = zt
        elif code == OP_SWAP:
            x[:, [q0, q1]] = x[:, [q1, q0]]
            z[:, [q0, q1]] = z[:, [q1, q0]]
        else:
            raise ValueError(f"unknown opcode {code}")
        r %= d2


def frame_apply_ops(fa: np.ndarray, fb: np.ndarray, ops: np.ndarray, d: int) -> None:
    """Conjugate a batch of Weyl frames through a packed gate sequence.

    fa, fb: (shots, n) int64 X/Z exponent vectors.  Same symplectic maps as
    apply_ops; frames carry no phase.
    """
    for code, dag, q0, q1, a, b in ops:
        sgn = -1 if dag else 1
        if code in (OP_I, OP_X, OP_Z, OP_Y, OP_W):
            continue
        elif code == OP_H:
            aq = fa[:, q0].copy()
            bq = fb[:, q0].copy()
            if not dag:
                fa[:, q0] = (-bq) % d
                fb[:, q0] = aq
            else:
                fa[:, q0] = bq
                fb[:, q0] = (-aq) % d
        elif code == OP_S:
            fb[:, q0] = (fb[:, q0] + sgn * fa[:, q0]) % d
        elif code == OP_CNOT:
            fa[:, q1] = (fa[:, q1] + sgn * fa[:, q0]) % d
            fb[:, q0] = (fb[:, q0] - sgn * fb[:, q1]) % d
        elif code == OP_CZ:
            bc = (fb[:, q0] + sgn * fa[:, q1]) % d
            bt = (fb[:, q1] + sgn * fa[:, q0]) % d
            fb[:, q0] = bc
            fb[:, q1] = bt
        elif code == OP_SWAP:
            fa[:, [q0, q1]] = fa[:, [q1, q0]]
            fb[:, [q0, q1]] = fb[:, [q1, q0]]
        else:
            raise ValueError(f"unknown opcode {code}")


def _row_mul_power(x, z, r, dst, src, e, d):
    # g_dst <- g_dst * g_src^e
    e = int(e) % d
    if e == 0:
        return
    d2 = 2 * d
    zx = int(z[src] @ x[src]) % d2
    cross = int(z[dst] @ x[src]) % d2
    r[dst] = (r[dst] + e * r[src] + e * (e - 1) * zx + 2 * e * cross) % d2
    x[dst] = (x[dst] + e * x[src]) % d
    z[dst] = (z[dst] + e * z[src]) % d


def _row_self_power(x, z, r, idx, e, d):
    # g_idx <- g_idx^e
    e = int(e) % d
    d2 = 2 * d
    zx = int(z[idx] @ x[idx]) % d2
    r[idx] = (e * r[idx] + e * (e - 1) * zx) % d2
    x[idx] = (e * x[idx]) % d
    z[idx] = (e * z[idx]) % d


def measure_qudits(
    x: np.ndarray,
    z: np.ndarray,
    r: np.ndarray,
    d: int,
    qudits: np.ndarray,
    draws: np.ndarray,
    forced: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """CHP measurement of the listed qudits on a full tableau, in place.

    d must be prime.  draws[j] is consumed only when qudit j's outcome is
    random; forced[j] >= 0 overrides it.  Returns (outcomes, pivots) where
    pivots[j] is the replaced stabilizer row for a random outcome and -1
    for a deterministic one.  A deterministic outcome of -1 signals an
    invalid tableau (odd phase or missing Z component).
    """
    n = x.shape[1]
    d2 = 2 * d
    m = len(qudits)
    outcomes = np.full(m, -1, dtype=np.int64)
    pivots = np.full(m, -1, dtype=np.int64)

    for j in range(m):
        i = int(qudits[j])
        stab_col = x[n:, i]
        hit = np.nonzero(stab_col)[0]
        if hit.size:
            p = int(hit[0]) + n
            # normalize the pivot so x[p, i] == 1
            inv = pow(int(x[p, i]), -1, d)
            _row_self_power(x, z, r, p, inv, d)
            # eliminate every other row with a nonzero X entry at column i
            zx = int(z[p] @ x[p]) % d2
            for q in range(2 * n):
                if q != p and x[q, i] != 0:
                    e = (d - int(x[q, i])) % d
                    cross = int(z[q] @ x[p]) % d2
                    r[q] = (r[q] + e * r[p] + e * (e - 1) * zx + 2 * e * cross) % d2
                    x[q] = (x[q] + e * x[p]) % d
                    z[q] = (z[q] + e * z[p]) % d
            k = int(forced[j]) if forced[j] >= 0 else int(draws[j])
            # destabilizer slot inherits the pivot; pivot becomes tau^{-2k} Z_i
            x[p - n] = x[p]
            z[p - n] = z[p]
            r[p - n] = r[p]
            x[p] = 0
            z[p] = 0
            z[p, i] = 1
            r[p] = (-2 * k) % d2
            outcomes[j] = k
            pivots[j] = p
        else:
            # deterministic: combine stabilizers weighted by destabilizer X entries
            gx = np.zeros(n, dtype=np.int64)
            gz = np.zeros(n, dtype=np.int64)
            gr = 0
            for q in range(n):
                e = int(x[q, i])
                if e == 0:
                    continue
                s = q + n
                zx = int(z[s] @ x[s]) % d2
                px = (e * x[s]) % d
                pz = (e * z[s]) % d
                pr = (e * r[s] + e * (e - 1) * zx) % d2
                cross = int(gz @ px) % d2
                gr = (gr + pr + 2 * cross) % d2
                gx = (gx + px) % d
                gz = (gz + pz) % d
            v = int(gz[i])
            if gr % 2 == 1 or v == 0 or gx.any():
                outcomes[j] = -1
                continue
            outcomes[j] = (-(gr // 2) * pow(v, -1, d)) % d
    return outcomes, pivots
