"""Noisy-circuit simulation strategies and fidelity estimation.

Three samplers share one distribution:
  * direct  - per shot, replay the circuit with freshly drawn Weyl errors,
  * frames  - propagate error frames through the gates, one reference shot,
  * push    - accumulate each site's phase contribution into a single
              end-of-circuit shift (delta tau) on the clean tableau.

Noise only ever touches the tableau's phase column; the X/Z blocks of the
clean run are reused everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import composite, gates, kernels, modular
from .circuit import Circuit
from .errors import DimensionMismatchError, NoMeasurementError
from .models import NoiseModel, custom, depolarizing, dephasing, dit_flip, weylmix_from_values
from .tableau import Tableau

__all__ = [
    "NoiseModel",
    "depolarizing",
    "dephasing",
    "dit_flip",
    "custom",
    "weylmix_from_values",
    "PauliFrame",
    "frame_conjugate",
    "apply_noise_direct",
    "direct_run",
    "pauli_frame_run",
    "PushPlan",
    "build_push_plan",
    "push_sample",
    "fidelity_push",
    "fidelity_frames",
    "mirror_circuit",
]


# -- direct strategy ------------------------------------------------------------


def apply_noise_direct(tab: Tableau, model: NoiseModel, qudit: int, rng) -> None:
    """Sample one Weyl error and fold it into the phase column."""
    if model.d != tab.d:
        raise DimensionMismatchError(f"model d={model.d} vs tableau d={tab.d}")
    a, b = model.sample_one(rng)
    if a or b:
        tab.apply_gate("W", (qudit,), params=(a, b))


def _measured(circuit: Circuit) -> tuple:
    measured = circuit.measured_qudits()
    if not measured:
        raise NoMeasurementError("circuit has no measurement ops")
    if not circuit.measurements_terminal():
        raise NoMeasurementError("sampling requires all measurements at the end")
    return measured


def direct_run(circuit: Circuit, shots: int, rng) -> np.ndarray:
    """Stochastic baseline: full tableau simulation per shot."""
    measured = _measured(circuit)
    prime = modular.is_prime(circuit.d)
    out = np.empty((shots, len(measured)), dtype=np.int64)
    for s in range(shots):
        tab = Tableau(circuit.n, circuit.d, full=True)
        if prime:
            res = tab.apply_circuit(circuit, rng=rng)
            out[s] = np.concatenate(res)
        else:
            tab.apply_circuit(_strip_measures(circuit), rng=rng)
            sampler = composite.build_snf_sampler(tab)
            out[s] = sampler.sample(1, rng)[0][list(measured)]
    return out


def _strip_measures(circuit: Circuit) -> Circuit:
    c = circuit.copy()
    c.ops = [op for op in circuit.ops if op.kind != "measure"]
    return c


# -- Pauli / Weyl frames -----------------------------------------------------------


@dataclass
class PauliFrame:
    """Accumulated Weyl error, as X/Z exponent vectors mod d."""

    a: np.ndarray
    b: np.ndarray
    d: int

    @classmethod
    def zero(cls, n: int, d: int) -> "PauliFrame":
        return cls(np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64), d)


def frame_conjugate(frame: PauliFrame, gate: str, qudits, params=(), dagger: bool = False) -> None:
    """Push the frame through one Clifford gate (phases are irrelevant here)."""
    name, dag2 = gates.split_mnemonic(gate)
    ops = gates.pack_op(name, qudits, params, dagger ^ dag2).reshape(1, 6)
    fa = frame.a.reshape(1, -1)
    fb = frame.b.reshape(1, -1)
    kernels.frame_apply_ops(fa, fb, ops, frame.d)
    frame.a = fa[0]
    frame.b = fb[0]


def _clean_reference(circuit: Circuit, rng, measured) -> tuple[Tableau, np.ndarray]:
    """Noiseless tableau plus one reference outcome over the measured qudits."""
    tab = Tableau(circuit.n, circuit.d, full=True)
    tab.apply_circuit(_strip_measures(circuit), rng=rng, skip_noise=True)
    if modular.is_prime(circuit.d):
        ref = tab.copy().measure_subset(measured, rng)
    else:
        ref = composite.build_snf_sampler(tab).sample(1, rng)[0][list(measured)]
    return tab, ref


def _frame_batches(circuit: Circuit, shots: int, rng, fa, fb) -> None:
    """Propagate (shots, n) frame arrays through the circuit in place."""
    pending = []

    def flush():
        if pending:
            kernels.frame_apply_ops(fa, fb, np.stack(pending), circuit.d)
            pending.clear()

    for op in circuit.ops:
        if op.kind == "gate":
            pending.append(gates.pack_op(op.gate, op.qudits, op.params, op.dagger))
        elif op.kind == "noise":
            flush()
            alpha, beta = circuit.models[op.model_id].sample_batch(rng, shots)
            fa[:, op.qudit] = (fa[:, op.qudit] + alpha) % circuit.d
            fb[:, op.qudit] = (fb[:, op.qudit] + beta) % circuit.d
    flush()


def pauli_frame_run(circuit: Circuit, shots: int, rng, b_init: str = "random") -> np.ndarray:
    """Frame-based sampler: one clean run, then per-shot frame propagation.

    b_init="random" initializes the Z exponents uniformly (the X part stays
    zero), which re-randomizes the reference outcome within its valid class
    and makes shots independent draws; b_init="zero" reuses the reference
    outcome verbatim, so shots are i.i.d. only conditionally on it.
    """
    measured = _measured(circuit)
    n, d = circuit.n, circuit.d
    _, ref = _clean_reference(circuit, rng, measured)
    fa = np.zeros((shots, n), dtype=np.int64)
    if b_init == "random":
        fb = rng.integers(0, d, size=(shots, n), dtype=np.int64)
    elif b_init == "zero":
        fb = np.zeros((shots, n), dtype=np.int64)
    else:
        raise ValueError("b_init must be 'random' or 'zero'")
    _frame_batches(circuit, shots, rng, fa, fb)
    return (ref + fa[:, list(measured)]) % d


# -- noise pushing -----------------------------------------------------------------


@dataclass
class PushPlan:
    """Column snapshots per noise site plus the final clean tableau."""

    circuit: Circuit
    t_clean: Tableau
    site_models: list
    x_cols: np.ndarray  # (N, 2n) snapshot of column x_{i_k} before site k
    z_cols: np.ndarray  # (N, 2n)
    measured: tuple

    @property
    def n_sites(self) -> int:
        return len(self.site_models)


def build_push_plan(circuit: Circuit) -> PushPlan:
    """One noiseless pass, snapshotting the touched tableau columns per site."""
    n, d = circuit.n, circuit.d
    tab = Tableau(n, d, full=True)
    site_models = []
    xs, zs = [], []
    pending = []

    def flush():
        if pending:
            tab.apply_packed(np.stack(pending))
            pending.clear()

    for op in circuit.ops:
        if op.kind == "gate":
            pending.append(gates.pack_op(op.gate, op.qudits, op.params, op.dagger))
        elif op.kind == "noise":
            flush()
            site_models.append(circuit.models[op.model_id])
            xs.append(tab.x[:, op.qudit].copy())
            zs.append(tab.z[:, op.qudit].copy())
    flush()
    N = len(site_models)
    return PushPlan(
        circuit=circuit,
        t_clean=tab,
        site_models=site_models,
        x_cols=np.array(xs, dtype=np.int64).reshape(N, 2 * n),
        z_cols=np.array(zs, dtype=np.int64).reshape(N, 2 * n),
        measured=circuit.measured_qudits(),
    )


def sample_site_draws(plan: PushPlan, shots: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """(shots, N) alpha and beta exponents, sites in circuit order."""
    N = plan.n_sites
    alphas = np.zeros((shots, N), dtype=np.int64)
    betas = np.zeros((shots, N), dtype=np.int64)
    for k, model in enumerate(plan.site_models):
        alphas[:, k], betas[:, k] = model.sample_batch(rng, shots)
    return alphas, betas


def delta_tau(plan: PushPlan, alphas: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """(shots, 2n) accumulated phase shifts: sum_k 2(beta_k x_k - alpha_k z_k)."""
    d2 = 2 * plan.circuit.d
    return (2 * (betas @ plan.x_cols - alphas @ plan.z_cols)) % d2


def push_sample(plan: PushPlan, shots: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """Per-shot delta-tau vectors and sampled outcomes from the shifted tableau."""
    if not plan.measured:
        raise NoMeasurementError("push plan has no measured qudits")
    n, d = plan.circuit.n, plan.circuit.d
    alphas, betas = sample_site_draws(plan, shots, rng)
    dtau = delta_tau(plan, alphas, betas)
    measured = list(plan.measured)
    out = np.empty((shots, len(measured)), dtype=np.int64)
    if modular.is_prime(d):
        for s in range(shots):
            noisy = plan.t_clean.copy()
            noisy.r = (noisy.r + dtau[s]) % (2 * d)
            out[s] = noisy.measure_subset(measured, rng)
    else:
        sampler = composite.build_snf_sampler(plan.t_clean)
        full = sampler.sample_with_phase_shifts(dtau[:, n:], rng)
        out = full[:, measured]
    return dtau, out


# -- fidelity ----------------------------------------------------------------------


def mirror_circuit(circuit: Circuit) -> Circuit:
    """circuit followed by its inverse; noiseless, it fixes |0...0>."""
    return circuit.compose(circuit.inverse())


def fidelity_push(circuit: Circuit, shots: int, rng) -> float:
    """Fraction of noise realizations whose stabilizer-row delta tau vanishes.

    Exactly the survival probability <psi_ideal| rho |psi_ideal> of the noisy
    circuit on |0...0>: a realization leaves the state fixed iff its pushed
    Weyl error commutes with every output stabilizer.
    """
    n = circuit.n
    plan = build_push_plan(_strip_measures(circuit))
    alphas, betas = sample_site_draws(plan, shots, rng)
    dtau = delta_tau(plan, alphas, betas)
    success = ~dtau[:, n:].any(axis=1)
    return float(success.mean())


def fidelity_frames(circuit: Circuit, shots: int, rng) -> float:
    """Fraction of shots whose final frame is trivial: (a, b) = (0, 0).

    A single surviving-but-nontrivial Weyl error (one that happens to
    stabilize the state) counts as failure here, so this estimator is the
    noise process's identity fraction pushed through the circuit.
    """
    n, d = circuit.n, circuit.d
    clean = _strip_measures(circuit)
    fa = np.zeros((shots, n), dtype=np.int64)
    fb = np.zeros((shots, n), dtype=np.int64)
    _frame_batches(clean, shots, rng, fa, fb)
    success = ~(fa.any(axis=1) | fb.any(axis=1))
    return float(success.mean())


def fidelity_dense(circuit: Circuit) -> float:
    """Oracle: exact <psi_ideal| rho_noisy |psi_ideal> at desk scale."""
    from . import dense

    clean = _strip_measures(circuit)
    rho = dense.circuit_density(clean)
    psi = dense.circuit_state(_strip_noise(clean))
    return rho.fidelity(psi)


def _strip_noise(circuit: Circuit) -> Circuit:
    c = circuit.copy()
    c.ops = [op for op in circuit.ops if op.kind != "noise"]
    return c
