"""Brute-force statevector and density-matrix backends.

Reference implementations for small systems; every tableau-side result is
checked against these in the test suite.  Basis index convention: qudit 0
is the most significant base-d digit, so |q0 q1 q2> maps to
q0*d^2 + q1*d + q2.
"""

from __future__ import annotations

import numpy as np

from . import weyl
from .errors import NoMeasurementError, TooLargeError

STATE_CUTOFF = 1 << 20
MATRIX_CUTOFF = 1 << 11


def _check_cutoff(dim: int, cutoff: int) -> None:
    if dim > cutoff:
        raise TooLargeError(f"dimension {dim} exceeds cutoff {cutoff}")


def gate_matrix(gate: str, d: int, params=(), dagger: bool = False) -> np.ndarray:
    """Unitary of a named gate on its own qudits (d x d or d^2 x d^2)."""
    if gate == "I":
        m = np.eye(d, dtype=complex)
    elif gate == "X":
        m = weyl.single_weyl_matrix(1, 0, d)
    elif gate == "Z":
        m = weyl.single_weyl_matrix(0, 1, d)
    elif gate == "Y":
        m = weyl.single_weyl_matrix(1, 1, d)
    elif gate == "W":
        a, b = params
        m = weyl.single_weyl_matrix(a, b, d)
    elif gate == "H":
        j = np.arange(d)
        m = np.array([[weyl.omega_power(int(jj * kk), d) for kk in j] for jj in j]) / np.sqrt(d)
    elif gate == "S":
        if d % 2 == 0:
            m = np.diag([weyl.tau_power(j * j, d) for j in range(d)])
        else:
            m = np.diag([weyl.omega_power(j * (j - 1) // 2, d) for j in range(d)])
    elif gate == "CNOT":
        m = np.zeros((d * d, d * d), dtype=complex)
        for c in range(d):
            for t in range(d):
                m[c * d + (t + c) % d, c * d + t] = 1.0
    elif gate == "CZ":
        m = np.diag([weyl.omega_power(c * t, d) for c in range(d) for t in range(d)])
    elif gate == "SWAP":
        m = np.zeros((d * d, d * d), dtype=complex)
        for c in range(d):
            for t in range(d):
                m[t * d + c, c * d + t] = 1.0
    else:
        raise ValueError(f"unknown gate {gate!r}")
    return m.conj().T if dagger else m


def canonical_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first sizeable amplitude is real positive."""
    nz = np.nonzero(np.abs(vec) > 1e-9)[0]
    if nz.size == 0:
        return vec
    return vec * (np.abs(vec[nz[0]]) / vec[nz[0]])


class DenseState:
    """Complex amplitude vector over n qudits of dimension d."""

    def __init__(self, n: int, d: int, cutoff: int = STATE_CUTOFF):
        _check_cutoff(d**n, cutoff)
        self.n = n
        self.d = d
        self.amps = np.zeros(d**n, dtype=complex)
        self.amps[0] = 1.0

    @classmethod
    def from_amplitudes(cls, n: int, d: int, amps) -> "DenseState":
        st = cls(n, d)
        st.amps = np.asarray(amps, dtype=complex).reshape(d**n)
        return st

    def copy(self) -> "DenseState":
        return DenseState.from_amplitudes(self.n, self.d, self.amps.copy())

    def apply_gate(self, gate: str, qudits, params=(), dagger: bool = False) -> None:
        d, n = self.d, self.n
        m = gate_matrix(gate, d, params, dagger)
        axes = list(qudits)
        k = len(axes)
        grid = self.amps.reshape((d,) * n)
        tensor = m.reshape((d,) * (2 * k))
        grid = np.tensordot(tensor, grid, axes=(list(range(k, 2 * k)), axes))
        # tensordot puts the gate's output axes first; restore qudit order
        order: list = [None] * n
        for pos, ax in enumerate(axes):
            order[ax] = pos
        spare = iter(range(k, n))
        for q in range(n):
            if order[q] is None:
                order[q] = next(spare)
        self.amps = grid.transpose(order).ravel()

    def apply_circuit(self, circuit) -> None:
        for op in circuit.ops:
            if op.kind == "gate":
                self.apply_gate(op.gate, op.qudits, op.params, op.dagger)
            elif op.kind == "noise":
                raise ValueError("statevector backend cannot apply noise channels")
            # measurement ops carry no evolution here; sampling reads born_distribution

    def born_distribution(self, qudits=None) -> np.ndarray:
        """Exact computational-basis marginal over the listed qudits (ascending index order of the output digits follows the listed order)."""
        probs = np.abs(self.amps) ** 2
        return _marginal(probs, self.n, self.d, qudits)

    def overlap(self, other: "DenseState") -> float:
        return float(np.abs(self.amps.conj() @ other.amps))


class DensityMatrix:
    """Complex d^n x d^n density operator."""

    def __init__(self, n: int, d: int, cutoff: int = MATRIX_CUTOFF):
        _check_cutoff(d**n, cutoff)
        self.n = n
        self.d = d
        dim = d**n
        self.mat = np.zeros((dim, dim), dtype=complex)
        self.mat[0, 0] = 1.0

    @classmethod
    def from_state(cls, state: DenseState) -> "DensityMatrix":
        rho = cls(state.n, state.d)
        rho.mat = np.outer(state.amps, state.amps.conj())
        return rho

    def copy(self) -> "DensityMatrix":
        rho = DensityMatrix(self.n, self.d)
        rho.mat = self.mat.copy()
        return rho

    def _lift(self, m: np.ndarray, qudits) -> np.ndarray:
        """Expand a gate matrix to the full register (small n only)."""
        d, n = self.d, self.n
        k = len(qudits)
        full = np.zeros((d**n, d**n), dtype=complex)
        tensor = m.reshape((d,) * (2 * k))
        digits = np.array(
            [np.unravel_index(i, (d,) * n) for i in range(d**n)], dtype=np.int64
        )
        rest = [q for q in range(n) if q not in qudits]
        for i in range(d**n):
            for j in range(d**n):
                if any(digits[i][q] != digits[j][q] for q in rest):
                    continue
                idx = tuple(digits[i][q] for q in qudits) + tuple(digits[j][q] for q in qudits)
                full[i, j] = tensor[idx]
        return full

    def apply_gate(self, gate: str, qudits, params=(), dagger: bool = False) -> None:
        u = self._lift(gate_matrix(gate, self.d, params, dagger), list(qudits))
        self.mat = u @ self.mat @ u.conj().T

    def apply_channel(self, model, qudit: int) -> None:
        """Exact Kraus mixture of Weyl operators from a NoiseModel."""
        out = np.zeros_like(self.mat)
        for (a, b), p in zip(model.pairs, model.probs):
            if p == 0.0:
                continue
            w = self._lift(weyl.single_weyl_matrix(a, b, self.d), [qudit])
            out += p * (w @ self.mat @ w.conj().T)
        self.mat = out

    def apply_circuit(self, circuit) -> None:
        for op in circuit.ops:
            if op.kind == "gate":
                self.apply_gate(op.gate, op.qudits, op.params, op.dagger)
            elif op.kind == "noise":
                self.apply_channel(circuit.models[op.model_id], op.qudit)

    def born_distribution(self, qudits=None) -> np.ndarray:
        probs = np.real(np.diag(self.mat)).copy()
        return _marginal(probs, self.n, self.d, qudits)

    def fidelity(self, state: DenseState) -> float:
        """<psi| rho |psi>, clipped to [0, 1]."""
        val = np.real(state.amps.conj() @ self.mat @ state.amps)
        return float(min(max(val, 0.0), 1.0))


def _marginal(probs: np.ndarray, n: int, d: int, qudits) -> np.ndarray:
    if qudits is None:
        qudits = list(range(n))
    qudits = list(qudits)
    grid = probs.reshape((d,) * n)
    rest = tuple(q for q in range(n) if q not in qudits)
    if rest:
        grid = grid.sum(axis=rest)
    kept = [q for q in range(n) if q in qudits]
    order = [kept.index(q) for q in qudits]
    return grid.transpose(order).ravel()


def circuit_state(circuit) -> DenseState:
    """|0...0> evolved through a noiseless circuit."""
    st = DenseState(circuit.n, circuit.d)
    st.apply_circuit(circuit)
    return st


def circuit_density(circuit) -> DensityMatrix:
    """|0...0><0...0| evolved through gates and noise channels."""
    rho = DensityMatrix(circuit.n, circuit.d)
    rho.apply_circuit(circuit)
    return rho


def sample_distribution(dist: np.ndarray, n_digits: int, d: int, shots: int, rng) -> np.ndarray:
    """Draw outcome digit-vectors from an exact distribution (oracle sampler)."""
    if dist.size == 0:
        raise NoMeasurementError("empty distribution")
    idx = rng.choice(dist.size, p=dist / dist.sum(), size=shots)
    digits = np.array(np.unravel_index(idx, (d,) * n_digits), dtype=np.int64).T
    return digits
