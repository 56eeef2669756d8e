"""Relative-trend benchmarks: sampling scalings and kernel backend comparison.

Numbers here are for scaling ratios on one machine, not absolute
cross-simulator comparisons.
"""

from __future__ import annotations

import time

import numpy as np

from . import kernels
from .kernels import _fallback
from .circuit import Circuit
from .noise import build_push_plan, delta_tau, sample_site_draws
from .models import depolarizing
from .tableau import AffineSampler


def _best_of(fn, repeats: int = 3) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_affine(n_values, k: int = 8, d: int = 3, shots: int = 2000, repeats: int = 3) -> dict:
    """Seconds per shot of affine sampling at fixed rank k, varying n."""
    rng = np.random.default_rng(0)
    out = {}
    for n in n_values:
        basis = rng.integers(0, d, size=(k, n), dtype=np.int64)
        sampler = AffineSampler(v0=rng.integers(0, d, size=n, dtype=np.int64), basis=basis, d=d)
        t = _best_of(lambda: sampler.sample(shots, np.random.default_rng(1)), repeats)
        out[n] = t / shots
    return out


def bench_push_sites(site_counts, n: int = 24, d: int = 3, shots: int = 2000, repeats: int = 3) -> dict:
    """Seconds per shot of the delta-tau accumulation, varying noise sites N.

    Measurement is excluded: only the per-shot phase-update vector is timed.
    """
    out = {}
    for N in site_counts:
        qc = Circuit(n, d)
        model = depolarizing(0.5, d)
        rng = np.random.default_rng(2)
        for k in range(N):
            q = int(rng.integers(0, n))
            qc.H(q)
            qc.noise(model, q)
        qc.measure_all()
        plan = build_push_plan(qc)

        def run():
            r = np.random.default_rng(3)
            alphas, betas = sample_site_draws(plan, shots, r)
            delta_tau(plan, alphas, betas)

        out[N] = _best_of(run, repeats) / shots
    return out


def bench_kernels(n: int = 64, d: int = 3, n_gates: int = 4000, repeats: int = 3) -> dict:
    """Gate-loop seconds for the compiled core vs the numpy fallback."""
    rng = np.random.default_rng(4)
    ops = np.zeros((n_gates, 6), dtype=np.int64)
    codes = [kernels.OP_X, kernels.OP_Z, kernels.OP_H, kernels.OP_S, kernels.OP_CNOT, kernels.OP_CZ, kernels.OP_SWAP]
    for i in range(n_gates):
        ops[i, 0] = codes[int(rng.integers(0, len(codes)))]
        ops[i, 1] = int(rng.integers(0, 2))
        q0, q1 = rng.choice(n, size=2, replace=False)
        ops[i, 2], ops[i, 3] = q0, q1

    def run(impl):
        x = np.zeros((2 * n, n), dtype=np.int64)
        z = np.zeros((2 * n, n), dtype=np.int64)
        x[:n] = np.eye(n, dtype=np.int64)
        z[n:] = np.eye(n, dtype=np.int64)
        r = np.zeros(2 * n, dtype=np.int64)
        impl.apply_ops(x, z, r, ops, d)
        return x, z, r

    result = {"numpy": _best_of(lambda: run(_fallback), repeats)}
    if kernels.IS_COMPILED:
        result["compiled"] = _best_of(lambda: run(kernels._impl), repeats)
    return result


def scaling_report() -> list[dict]:
    """Rows for the CLI bench command."""
    rows = []
    aff = bench_affine([512, 1024, 2048])
    for n, sec in aff.items():
        rows.append({"sweep": "affine_qudits", "param": n, "seconds_per_shot": sec})
    push = bench_push_sites([32, 64, 128])
    for N, sec in push.items():
        rows.append({"sweep": "push_sites", "param": N, "seconds_per_shot": sec})
    for backend, sec in bench_kernels().items():
        rows.append({"sweep": "gate_kernel", "param": backend, "seconds_per_shot": sec})
    return rows
