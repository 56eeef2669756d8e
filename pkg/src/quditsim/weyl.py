"""Weyl-operator algebra on exponent vectors.

A row (x | z | r) stands for the n-qudit operator

    tau^r * (X^x0 Z^z0) (x) ... (x) (X^x_{n-1} Z^z_{n-1})

with x, z reduced mod d and the phase exponent r mod 2d, where
tau = exp(i*pi*(d^2+1)/d) and tau^2 = omega = exp(2i*pi/d).  With this
monomial convention row products reduce exactly to exponent arithmetic:
no phase corrections appear when X or Z powers wrap past d.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, TooLargeError

DENSE_MATRIX_CUTOFF = 4096


def tau_power(k: int, d: int) -> complex:
    """tau^k for tau = exp(i*pi*(d^2+1)/d); exponent arithmetic is exact mod 2d."""
    m = ((d * d + 1) * k) % (2 * d)
    return np.exp(1j * np.pi * m / d)


def omega_power(k: int, d: int) -> complex:
    return np.exp(2j * np.pi * (k % d) / d)


@dataclass
class PauliRow:
    """One Weyl generator: X-exponents, Z-exponents, and the tau-phase exponent."""

    x: np.ndarray
    z: np.ndarray
    r: int
    d: int

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.int64) % self.d
        self.z = np.asarray(self.z, dtype=np.int64) % self.d
        if self.x.shape != self.z.shape or self.x.ndim != 1:
            raise DimensionMismatchError("x and z must be 1-d vectors of equal length")
        self.r = int(self.r) % (2 * self.d)

    @property
    def n(self) -> int:
        return len(self.x)

    def copy(self) -> "PauliRow":
        return PauliRow(self.x.copy(), self.z.copy(), self.r, self.d)

    def is_identity(self) -> bool:
        return not self.x.any() and not self.z.any() and self.r == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliRow):
            return NotImplemented
        return (
            self.d == other.d
            and self.r == other.r
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __str__(self) -> str:
        return row_to_text(self)


def identity_row(n: int, d: int) -> PauliRow:
    return PauliRow(np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64), 0, d)


def x_row(n: int, d: int, i: int) -> PauliRow:
    g = identity_row(n, d)
    g.x[i] = 1
    return g


def z_row(n: int, d: int, i: int) -> PauliRow:
    g = identity_row(n, d)
    g.z[i] = 1
    return g


def weyl_row(n: int, d: int, i: int, a: int, b: int) -> PauliRow:
    """Row realizing W(a, b) = tau^{-ab} X^a Z^b on qudit i.

    For odd d the exponent is shifted by d (tau^d = 1) so that it stays even.
    """
    g = identity_row(n, d)
    g.x[i] = a % d
    g.z[i] = b % d
    r = (-a * b) % (2 * d)
    if d % 2 == 1 and r % 2 == 1:
        r = (r + d) % (2 * d)
    g.r = r
    return g


def _check_compatible(g_a: PauliRow, g_b: PauliRow) -> None:
    if g_a.d != g_b.d or g_a.n != g_b.n:
        raise DimensionMismatchError(
            f"rows on {g_a.n} qudits (d={g_a.d}) vs {g_b.n} qudits (d={g_b.d})"
        )


def compose(g_a: PauliRow, g_b: PauliRow) -> PauliRow:
    """Row for the operator product g_a * g_b.

    Phase rule: r = r_a + r_b + 2 * (z_a . x_b)  (mod 2d).
    """
    _check_compatible(g_a, g_b)
    d = g_a.d
    x = (g_a.x + g_b.x) % d
    z = (g_a.z + g_b.z) % d
    r = (g_a.r + g_b.r + 2 * int(g_a.z @ g_b.x)) % (2 * d)
    return PauliRow(x, z, r, d)


def row_power(g: PauliRow, k: int) -> PauliRow:
    """g composed with itself k times (k >= 0); k = 0 gives the identity row.

    Closed form of the iterated phase rule:
    r_k = k*r + k*(k-1)*(z . x)  (mod 2d).
    """
    if k < 0:
        raise ValueError("exponent must be non-negative")
    d = g.d
    zx = int(g.z @ g.x)
    r = (k * g.r + k * (k - 1) * zx) % (2 * d)
    return PauliRow((k * g.x) % d, (k * g.z) % d, r, d)


def symplectic_product(g_a: PauliRow, g_b: PauliRow) -> int:
    """x_a . z_b - x_b . z_a (mod d); zero exactly when the operators commute."""
    _check_compatible(g_a, g_b)
    return int(g_a.x @ g_b.z - g_b.x @ g_a.z) % g_a.d


def single_weyl_matrix(a: int, b: int, d: int) -> np.ndarray:
    """W(a, b) = tau^{-ab} X^a Z^b as a d x d complex matrix.

    One root-of-unity evaluation per entry, from exact integer exponents:
    entry (j+a, j) is tau^{-ab} omega^{bj} = tau^{-ab + 2bj}.
    """
    a %= d
    b %= d
    m = np.zeros((d, d), dtype=complex)
    for j in range(d):
        m[(j + a) % d, j] = tau_power(-a * b + 2 * b * j, d)
    return m


def _monomial_matrix(a: int, b: int, d: int) -> np.ndarray:
    """X^a Z^b as a d x d complex matrix."""
    a %= d
    b %= d
    m = np.zeros((d, d), dtype=complex)
    for j in range(d):
        m[(j + a) % d, j] = omega_power(b * j, d)
    return m


def dense_row(g: PauliRow, cutoff: int = DENSE_MATRIX_CUTOFF) -> np.ndarray:
    """Complex matrix of the operator the row stands for."""
    d = g.d
    if d ** g.n > cutoff:
        raise TooLargeError(f"d^n = {d ** g.n} exceeds dense cutoff {cutoff}")
    out = np.array([[tau_power(g.r, d)]])
    for xi, zi in zip(g.x, g.z):
        out = np.kron(out, _monomial_matrix(int(xi), int(zi), d))
    return out


def row_to_text(g: PauliRow) -> str:
    """Operator form, e.g. 'tau^4 XZ2 (x) I (x) Z'."""

    def factor(a: int, b: int) -> str:
        if a == 0 and b == 0:
            return "I"
        s = ""
        if a:
            s += "X" if a == 1 else f"X{a}"
        if b:
            s += "Z" if b == 1 else f"Z{b}"
        return s

    body = " (x) ".join(factor(int(a), int(b)) for a, b in zip(g.x, g.z))
    if g.r == 0:
        return body
    return f"tau^{g.r} {body}"
