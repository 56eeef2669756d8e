"""Shared test helpers: oracles, distribution math, random inputs."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from quditsim import dense
from quditsim.circuit import Circuit, random_clifford_circuit


def tv_distance(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def empirical_distribution(outcomes: np.ndarray, d: int) -> np.ndarray:
    """Outcome rows (base-d digit vectors, first digit most significant) -> probs."""
    outcomes = np.asarray(outcomes)
    k = outcomes.shape[1]
    idx = np.zeros(len(outcomes), dtype=np.int64)
    for j in range(k):
        idx = idx * d + outcomes[:, j]
    return np.bincount(idx, minlength=d**k) / len(outcomes)


def exact_det(mat) -> int:
    """Bareiss fraction-free determinant over exact integers."""
    m = [[Fraction(v) for v in row] for row in mat]
    k = len(m)
    sign = 1
    for col in range(k):
        pivot = next((r for r in range(col, k) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        for r in range(col + 1, k):
            f = m[r][col] / m[col][col]
            m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    out = Fraction(sign)
    for i in range(k):
        out *= m[i][i]
    assert out.denominator == 1
    return int(out)


def mat_mul_mod(A, B, d):
    return [[sum(a * b for a, b in zip(row, col)) % d for col in zip(*B)] for row in A]


def ghz_circuit(n: int = 3, d: int = 3) -> Circuit:
    qc = Circuit(n, d)
    qc.H(0)
    for i in range(n - 1):
        qc.CNOT(i, i + 1)
    return qc


def born_of_circuit(qc: Circuit, qudits=None) -> np.ndarray:
    if qc.noise_ops():
        return dense.circuit_density(qc).born_distribution(qudits)
    return dense.circuit_state(qc).born_distribution(qudits)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def random_circuits(count, n_choices, d_choices, gates, seed=7, p_two=0.35):
    """Deterministic stream of (circuit, rng) pairs for fuzz loops."""
    master = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(master.choice(n_choices))
        d = int(master.choice(d_choices))
        out.append(random_clifford_circuit(n, d, gates, master, p_two=p_two))
    return out
