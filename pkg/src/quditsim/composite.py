"""Exact measurement sampling for composite d via Smith normal form.

Works for any d >= 2 (prime d reduces to the same distribution as the
affine sampler).  Only sampling is provided: no post-measurement tableau
exists on this path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import modular
from .errors import InconsistentSystemError

_DEBUG_CHECK = False


@dataclass
class SnfSampler:
    """Outcome sampler built from the diagonal subgroup of the stabilizers.

    Solves B m == c (mod d) through D = U B V; y-coordinates are sampled
    independently (free coordinates uniformly, gcd classes uniformly among
    their solutions) and mapped back with m = V y.
    """

    d: int
    n: int
    kernel_gens: np.ndarray  # (r, n) coefficient vectors of diagonal products
    B: np.ndarray  # (r, n) Z-exponents of the diagonal products
    c_base: np.ndarray  # (r,) phase constraints
    U: np.ndarray  # (r, r) mod d
    V: np.ndarray  # (n, n) mod d
    diag: np.ndarray  # (n,) diagonal of D mod d (0 for free coordinates)
    extra_rows: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def _solve(self, rhs: np.ndarray, rng) -> np.ndarray:
        """rhs: (shots, r) right-hand sides U c; returns outcomes (shots, n)."""
        d = self.d
        shots = rhs.shape[0]
        r = self.B.shape[0]
        y = np.zeros((shots, self.n), dtype=np.int64)
        for j in range(self.n):
            if j >= r:
                y[:, j] = rng.integers(0, d, size=shots, dtype=np.int64)
                continue
            s = int(self.diag[j])
            g = gcd(s, d)  # s == 0 gives g == d: rhs must vanish, y_j is free
            rj = rhs[:, j]
            if (rj % g).any():
                raise InconsistentSystemError(
                    f"congruence {s}*y = c (mod {d}) unsolvable; invalid tableau"
                )
            step = d // g
            inv = pow(s // g, -1, step) if step > 1 else 0
            y0 = ((rj // g) * inv) % step if step > 1 else np.zeros(shots, dtype=np.int64)
            if g > 1:
                y[:, j] = y0 + step * rng.integers(0, g, size=shots, dtype=np.int64)
            else:
                y[:, j] = y0
        # rows of D beyond the y coordinates are all zero: pure consistency checks
        for j in self.extra_rows:
            if (rhs[:, j] % d).any():
                raise InconsistentSystemError("over-determined constraint fails; invalid tableau")
        return (y @ self.V.T) % d

    def sample(self, shots: int, rng) -> np.ndarray:
        rhs = np.tile((self.U @ self.c_base) % self.d, (shots, 1))
        m = self._solve(rhs, rng)
        if _DEBUG_CHECK and self.B.shape[0]:
            assert not (((m @ self.B.T) - self.c_base) % self.d).any()
        return m

    def sample_with_phase_shifts(self, stab_phase_shifts: np.ndarray, rng) -> np.ndarray:
        """Sample one outcome per row of `stab_phase_shifts`.

        Each row holds the (even) additive tau-exponent shifts of the n
        stabilizer rows, as produced by noise pushing; the constraint vector
        moves by -(gens . shift)/2 mod d.
        """
        shifts = (self.kernel_gens @ stab_phase_shifts.T).T  # (shots, r)
        if (shifts % 2).any():
            raise InconsistentSystemError("odd phase shift; invalid tableau")
        c = (self.c_base - shifts // 2) % self.d
        rhs = (c @ self.U.T) % self.d
        m = self._solve(rhs, rng)
        if _DEBUG_CHECK and self.B.shape[0]:
            assert not (((m @ self.B.T) - c) % self.d).any()
        return m


def build_snf_sampler(tableau) -> SnfSampler:
    """Construct the sampler from the tableau's stabilizer rows (any d)."""
    d, n = tableau.d, tableau.n
    o = tableau.stab_offset
    sx = tableau.x[o : o + n]
    sz = tableau.z[o : o + n]
    sr = tableau.r[o : o + n]

    gens = modular.kernel_mod_d(sx.T.tolist(), d)
    rows = []
    cs = []
    for u in gens:
        uv = np.array(u, dtype=np.int64)
        # compose prod_j s_j^{u_j}; phases add with the usual cross terms
        gx = np.zeros(n, dtype=np.int64)
        gz = np.zeros(n, dtype=np.int64)
        gr = 0
        d2 = 2 * d
        for j in range(n):
            e = int(uv[j])
            if e == 0:
                continue
            zx = int(sz[j] @ sx[j]) % d2
            px = (e * sx[j]) % d
            pz = (e * sz[j]) % d
            pr = (e * int(sr[j]) + e * (e - 1) * zx) % d2
            gr = (gr + pr + 2 * (int(gz @ px) % d2)) % d2
            gx = (gx + px) % d
            gz = (gz + pz) % d
        if gx.any():
            raise InconsistentSystemError("kernel vector does not cancel the X block")
        if gr % 2 == 1:
            raise InconsistentSystemError("diagonal stabilizer with odd phase exponent")
        rows.append(gz)
        cs.append((-(gr // 2)) % d)

    r = len(rows)
    B = np.array(rows, dtype=np.int64).reshape(r, n)
    c_base = np.array(cs, dtype=np.int64).reshape(r)
    if r == 0:
        return SnfSampler(
            d=d,
            n=n,
            kernel_gens=np.zeros((0, n), dtype=np.int64),
            B=B,
            c_base=c_base,
            U=np.zeros((0, 0), dtype=np.int64),
            V=np.eye(n, dtype=np.int64),
            diag=np.zeros(n, dtype=np.int64),
        )
    D, U, V = modular.smith_normal_form(B.tolist())
    diag = np.array([D[j][j] % d if j < min(r, n) else 0 for j in range(n)], dtype=np.int64)
    return SnfSampler(
        d=d,
        n=n,
        kernel_gens=np.array(gens, dtype=np.int64).reshape(r, n),
        B=B,
        c_base=c_base,
        U=np.array(U, dtype=np.int64) % d,
        V=np.array(V, dtype=np.int64) % d,
        diag=diag,
        extra_rows=np.arange(n, r, dtype=np.int64),
    )


def snf_sample(sampler: SnfSampler, shots: int, rng) -> np.ndarray:
    return sampler.sample(shots, rng)
