"""Exact integer linear algebra modulo small d.

Matrices are plain lists of lists of Python ints, so Smith-normal-form
intermediates never overflow.  Residues are plain ints kept in [0, d);
moduli up to 2**15 are supported.
"""

from __future__ import annotations

from math import gcd

from .errors import NotInvertibleError, UnsolvableError

MAX_MODULUS = 1 << 15


def mod_inverse(a: int, d: int) -> int:
    """Inverse of a modulo d.  Raises NotInvertibleError if gcd(a, d) != 1."""
    a %= d
    if gcd(a, d) != 1:
        raise NotInvertibleError(f"{a} is not invertible mod {d}")
    return pow(a, -1, d)


def is_prime(d: int) -> bool:
    if d < 2:
        return False
    if d < 4:
        return True
    if d % 2 == 0:
        return False
    i = 3
    while i * i <= d:
        if d % i == 0:
            return False
        i += 2
    return True


def rref_mod_p(rows: list[list[int]], p: int) -> tuple[list[list[int]], int, list[int]]:
    """Reduced row echelon form over the field Z_p.

    Returns (R, rank, pivot_columns).  R has the same shape as the input;
    the first `rank` rows are the canonical basis of the row span, the rest
    are zero.  Primality of p is the caller's contract.
    """
    R = [[v % p for v in row] for row in rows]
    m = len(R)
    ncols = len(R[0]) if m else 0
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, m) if R[r][col] != 0), None)
        if pivot is None:
            continue
        R[rank], R[pivot] = R[pivot], R[rank]
        inv = pow(R[rank][col], -1, p)
        R[rank] = [(v * inv) % p for v in R[rank]]
        for r in range(m):
            if r != rank and R[r][col] != 0:
                f = R[r][col]
                R[r] = [(x - f * y) % p for x, y in zip(R[r], R[rank])]
        pivots.append(col)
        rank += 1
        if rank == m:
            break
    return R, rank, pivots


def _eye(k: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def _swap_rows(M, i, j):
    M[i], M[j] = M[j], M[i]


def _swap_cols(M, i, j):
    for row in M:
        row[i], row[j] = row[j], row[i]


def _add_row(M, dst, src, f):
    # row dst += f * row src
    M[dst] = [x + f * y for x, y in zip(M[dst], M[src])]


def _add_col(M, dst, src, f):
    for row in M:
        row[dst] += f * row[src]


def _negate_row(M, i):
    M[i] = [-x for x in M[i]]


def _negate_col(M, i):
    for row in M:
        row[i] = -row[i]


def smith_normal_form(
    A: list[list[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form D = U * A * V over the integers.

    U and V are unimodular; D is diagonal with d_i | d_{i+1} and d_i >= 0.
    Kannan-Bachem-style elimination: after each pivot, off-diagonal entries
    are reduced against it, which keeps intermediate entries polynomial.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[int(v) for v in row] for row in A]
    U = _eye(m)
    V = _eye(n)

    def eliminate(t: int) -> None:
        # Clear row t and column t outside the diagonal, restarting whenever
        # a smaller remainder lands on the pivot.
        while True:
            # move a nonzero entry onto the pivot if the pivot is zero
            if D[t][t] == 0:
                found = False
                for i in range(t, m):
                    for j in range(t, n):
                        if D[i][j] != 0:
                            if i != t:
                                _swap_rows(D, t, i)
                                _swap_rows(U, t, i)
                            if j != t:
                                _swap_cols(D, t, j)
                                _swap_cols(V, t, j)
                            found = True
                            break
                    if found:
                        break
                if not found:
                    return
            restart = False
            for i in range(t + 1, m):
                if D[i][t] != 0:
                    q = D[i][t] // D[t][t]
                    _add_row(D, i, t, -q)
                    _add_row(U, i, t, -q)
                    if D[i][t] != 0:
                        # remainder is smaller than the pivot: swap it up
                        _swap_rows(D, t, i)
                        _swap_rows(U, t, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, n):
                if D[t][j] != 0:
                    q = D[t][j] // D[t][t]
                    _add_col(D, j, t, -q)
                    _add_col(V, j, t, -q)
                    if D[t][j] != 0:
                        _swap_cols(D, t, j)
                        _swap_cols(V, t, j)
                        restart = True
                        break
            if restart:
                continue
            return

    r = min(m, n)
    for t in range(r):
        eliminate(t)
        if D[t][t] == 0:
            break

    # enforce the divisibility chain d_t | d_{t+1}
    t = 0
    while t < r - 1:
        if D[t][t] != 0 and D[t + 1][t + 1] % D[t][t] != 0:
            # fold d_{t+1} into column t and re-eliminate from t
            _add_col(D, t, t + 1, 1)
            _add_col(V, t, t + 1, 1)
            eliminate(t)
            t = max(t - 1, 0)
        else:
            t += 1

    for t in range(r):
        if D[t][t] < 0:
            _negate_row(D, t)
            _negate_row(U, t)
    return D, U, V


def kernel_mod_d(A: list[list[int]], d: int) -> list[list[int]]:
    """Generators of {u : A u == 0 (mod d)} as a Z_d-module.

    Built from the SNF of A: column j of V scaled by d / gcd(D_jj, d)
    solves the diagonalized system; zero generators are dropped.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        return []
    if m == 0:
        return _eye(n)
    D, _, V = smith_normal_form(A)
    gens = []
    for j in range(n):
        dj = D[j][j] if j < min(m, n) else 0
        scale = d // gcd(dj, d)
        if scale % d == 0:
            continue
        gen = [(V[i][j] * scale) % d for i in range(n)]
        if any(gen):
            gens.append(gen)
    return gens


def solve_congruence(s: int, c: int, d: int) -> tuple[int, int, int]:
    """Solve s*y == c (mod d) for y.

    Returns (y0, step, count): the solution set is {y0 + step*t : 0 <= t < count}.
    Raises UnsolvableError when gcd(s, d) does not divide c.
    """
    s %= d
    c %= d
    g = gcd(s, d)
    if g == 0:
        g = d  # s == 0 and d == 0 cannot happen for d >= 2
    if c % g != 0:
        raise UnsolvableError(f"{s}*y = {c} (mod {d}) has no solution")
    if s == 0:
        return 0, 1, d
    dg = d // g
    y0 = ((c // g) * pow(s // g, -1, dg)) % dg
    return y0, dg, g
