# cython: language_level=3
"""Compiled implementations of the hot kernels.

Must stay behaviour-identical to quditsim.kernels._fallback; the test
suite drives both with the same inputs and compares results.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

IS_COMPILED = True

cdef long long OP_I = 0
cdef long long OP_X = 1
cdef long long OP_Z = 2
cdef long long OP_Y = 3
cdef long long OP_W = 4
cdef long long OP_H = 5
cdef long long OP_S = 6
cdef long long OP_CNOT = 7
cdef long long OP_CZ = 8
cdef long long OP_SWAP = 9


cdef inline long long pymod(long long v, long long m) nogil:
    cdef long long r = v % m
    if r < 0:
        r += m
    return r


cdef long long mod_inv(long long a, long long d) nogil:
    # extended Euclid; caller guarantees gcd(a, d) == 1
    cdef long long t = 0, newt = 1
    cdef long long r = d, newr = a
    cdef long long q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    return pymod(t, d)


def apply_ops(
    cnp.int64_t[:, ::1] x,
    cnp.int64_t[:, ::1] z,
    cnp.int64_t[::1] r,
    cnp.int64_t[:, ::1] ops,
    long long d,
):
    cdef long long d2 = 2 * d
    cdef Py_ssize_t rows = x.shape[0]
    cdef Py_ssize_t G = ops.shape[0]
    cdef Py_ssize_t g, i
    cdef long long code, dag, q0, q1, a, b, sgn
    cdef long long xq, zq, delta
    with nogil:
        for g in range(G):
            code = ops[g, 0]
            dag = ops[g, 1]
            q0 = ops[g, 2]
            q1 = ops[g, 3]
            a = ops[g, 4]
            b = ops[g, 5]
            sgn = -1 if dag else 1
            if code == OP_I:
                continue
            for i in range(rows):
                if code == OP_X:
                    r[i] = pymod(r[i] - sgn * 2 * z[i, q0], d2)
                elif code == OP_Z:
                    r[i] = pymod(r[i] + sgn * 2 * x[i, q0], d2)
                elif code == OP_Y:
                    r[i] = pymod(r[i] + sgn * 2 * (x[i, q0] - z[i, q0]), d2)
                elif code == OP_W:
                    r[i] = pymod(r[i] + sgn * 2 * (b * x[i, q0] - a * z[i, q0]), d2)
                elif code == OP_H:
                    xq = x[i, q0]
                    zq = z[i, q0]
                    if dag == 0:
                        x[i, q0] = pymod(-zq, d)
                        z[i, q0] = xq
                    else:
                        x[i, q0] = zq
                        z[i, q0] = pymod(-xq, d)
                    r[i] = pymod(r[i] + 2 * x[i, q0] * z[i, q0], d2)
                elif code == OP_S:
                    xq = x[i, q0]
                    if d % 2 == 0:
                        delta = xq * xq
                    else:
                        delta = xq * (xq - 1)
                    r[i] = pymod(r[i] + sgn * delta, d2)
                    z[i, q0] = pymod(z[i, q0] + sgn * xq, d)
                elif code == OP_CNOT:
                    x[i, q1] = pymod(x[i, q1] + sgn * x[i, q0], d)
                    z[i, q0] = pymod(z[i, q0] - sgn * z[i, q1], d)
                elif code == OP_CZ:
                    r[i] = pymod(r[i] + sgn * 2 * x[i, q0] * x[i, q1], d2)
                    xq = pymod(z[i, q0] + sgn * x[i, q1], d)
                    zq = pymod(z[i, q1] + sgn * x[i, q0], d)
                    z[i, q0] = xq
                    z[i, q1] = zq
                elif code == OP_SWAP:
                    xq = x[i, q0]
                    x[i, q0] = x[i, q1]
                    x[i, q1] = xq
                    zq = z[i, q0]
                    z[i, q0] = z[i, q1]
                    z[i, q1] = zq


def frame_apply_ops(
    cnp.int64_t[:, ::1] fa,
    cnp.int64_t[:, ::1] fb,
    cnp.int64_t[:, ::1] ops,
    long long d,
):
    cdef Py_ssize_t shots = fa.shape[0]
    cdef Py_ssize_t G = ops.shape[0]
    cdef Py_ssize_t g, s
    cdef long long code, dag, q0, q1, sgn
    cdef long long aq, bq
    with nogil:
        for g in range(G):
            code = ops[g, 0]
            dag = ops[g, 1]
            q0 = ops[g, 2]
            q1 = ops[g, 3]
            sgn = -1 if dag else 1
            if code <= OP_W:
                continue
            for s in range(shots):
                if code == OP_H:
                    aq = fa[s, q0]
                    bq = fb[s, q0]
                    if dag == 0:
                        fa[s, q0] = pymod(-bq, d)
                        fb[s, q0] = aq
                    else:
                        fa[s, q0] = bq
                        fb[s, q0] = pymod(-aq, d)
                elif code == OP_S:
                    fb[s, q0] = pymod(fb[s, q0] + sgn * fa[s, q0], d)
                elif code == OP_CNOT:
                    fa[s, q1] = pymod(fa[s, q1] + sgn * fa[s, q0], d)
                    fb[s, q0] = pymod(fb[s, q0] - sgn * fb[s, q1], d)
                elif code == OP_CZ:
                    aq = pymod(fb[s, q0] + sgn * fa[s, q1], d)
                    bq = pymod(fb[s, q1] + sgn * fa[s, q0], d)
                    fb[s, q0] = aq
                    fb[s, q1] = bq
                elif code == OP_SWAP:
                    aq = fa[s, q0]
                    fa[s, q0] = fa[s, q1]
                    fa[s, q1] = aq
                    bq = fb[s, q0]
                    fb[s, q0] = fb[s, q1]
                    fb[s, q1] = bq


cdef void row_mul_power(
    cnp.int64_t[:, ::1] x,
    cnp.int64_t[:, ::1] z,
    cnp.int64_t[::1] r,
    Py_ssize_t dst,
    Py_ssize_t src,
    long long e,
    long long d,
) nogil:
    # g_dst <- g_dst * g_src^e
    cdef long long d2 = 2 * d
    cdef Py_ssize_t n = x.shape[1]
    cdef Py_ssize_t j
    cdef long long zx = 0, cross = 0
    e = pymod(e, d)
    if e == 0:
        return
    for j in range(n):
        zx = (zx + z[src, j] * x[src, j]) % d2
        cross = (cross + z[dst, j] * x[src, j]) % d2
    r[dst] = pymod(r[dst] + e * r[src] + e * (e - 1) * zx + 2 * e * cross, d2)
    for j in range(n):
        x[dst, j] = pymod(x[dst, j] + e * x[src, j], d)
        z[dst, j] = pymod(z[dst, j] + e * z[src, j], d)


def measure_qudits(
    cnp.int64_t[:, ::1] x,
    cnp.int64_t[:, ::1] z,
    cnp.int64_t[::1] r,
    long long d,
    cnp.int64_t[::1] qudits,
    cnp.int64_t[::1] draws,
    cnp.int64_t[::1] forced,
):
    cdef Py_ssize_t n = x.shape[1]
    cdef long long d2 = 2 * d
    cdef Py_ssize_t m = qudits.shape[0]
    outcomes_arr = np.full(m, -1, dtype=np.int64)
    pivots_arr = np.full(m, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] outcomes = outcomes_arr
    cdef cnp.int64_t[::1] pivots = pivots_arr
    gx_arr = np.zeros(n, dtype=np.int64)
    gz_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] gx = gx_arr
    cdef cnp.int64_t[::1] gz = gz_arr
    cdef Py_ssize_t j, q, t, i, p
    cdef long long inv, e, k, gr, zx, cross, pr, v, bad
    with nogil:
        for j in range(m):
            i = qudits[j]
            p = -1
            for q in range(n, 2 * n):
                if x[q, i] != 0:
                    p = q
                    break
            if p >= 0:
                # random outcome: normalize pivot to x[p, i] == 1
                inv = mod_inv(x[p, i], d)
                zx = 0
                for t in range(n):
                    zx = (zx + z[p, t] * x[p, t]) % d2
                r[p] = pymod(inv * r[p] + inv * (inv - 1) * zx, d2)
                for t in range(n):
                    x[p, t] = pymod(inv * x[p, t], d)
                    z[p, t] = pymod(inv * z[p, t], d)
                for q in range(2 * n):
                    if q != p and x[q, i] != 0:
                        row_mul_power(x, z, r, q, p, d - x[q, i], d)
                k = forced[j] if forced[j] >= 0 else draws[j]
                for t in range(n):
                    x[p - n, t] = x[p, t]
                    z[p - n, t] = z[p, t]
                r[p - n] = r[p]
                for t in range(n):
                    x[p, t] = 0
                    z[p, t] = 0
                z[p, i] = 1
                r[p] = pymod(-2 * k, d2)
                outcomes[j] = k
                pivots[j] = p
            else:
                # deterministic outcome
                for t in range(n):
                    gx[t] = 0
                    gz[t] = 0
                gr = 0
                bad = 0
                for q in range(n):
                    e = x[q, i]
                    if e == 0:
                        continue
                    zx = 0
                    cross = 0
                    for t in range(n):
                        zx = (zx + z[q + n, t] * x[q + n, t]) % d2
                        cross = (cross + gz[t] * pymod(e * x[q + n, t], d)) % d2
                    pr = pymod(e * r[q + n] + e * (e - 1) * zx, d2)
                    gr = pymod(gr + pr + 2 * cross, d2)
                    for t in range(n):
                        gx[t] = pymod(gx[t] + e * x[q + n, t], d)
                        gz[t] = pymod(gz[t] + e * z[q + n, t], d)
                v = gz[i]
                for t in range(n):
                    if gx[t] != 0:
                        bad = 1
                if gr % 2 == 1 or v == 0 or bad:
                    outcomes[j] = -1
                else:
                    outcomes[j] = pymod(-(gr / 2) * mod_inv(v, d), d)
    return outcomes_arr, pivots_arr
