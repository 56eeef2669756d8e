"""Command-line front end.

Commands:
    run       single-shot execution: final tableau plus measurement results
    sample    multi-shot outcome sampling with a chosen backend/strategy
    fidelity  Monte Carlo circuit-fidelity estimation (delta-tau or frames)
    bench     scaling trends and kernel backend comparison

Exit codes: 0 success, 2 parse error, 3 unsupported backend/dimension
combination (or oversized dense request).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import bench as bench_mod
from . import composite, dense, modular, noise
from .circuit import Circuit, parse
from .errors import NoMeasurementError, ParseError, QuditSimError, TooLargeError
from .models import depolarizing
from .tableau import Tableau

EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3


def _load_circuit(path: str) -> Circuit:
    with open(path) as fh:
        return parse(fh.read())


def _seed(args) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QQ_SEED")
    return int(env) if env else None


def _rng(args):
    return np.random.default_rng(_seed(args))


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _outcome_line(vals) -> str:
    return "Measurement result: [" + " ".join(str(int(v)) for v in vals) + "]"


def cmd_run(args) -> int:
    qc = _load_circuit(args.input)
    rng = _rng(args)
    replay = [int(v) for v in args.replay.split(",")] if args.replay else None
    lines = []
    if args.draw:
        lines.append(qc.render_ascii())
        lines.append("")
    prime = modular.is_prime(qc.d)

    if args.backend == "dense":
        if qc.noise_ops():
            rho = dense.circuit_density(qc)
            dist = rho.born_distribution(qc.measured_qudits() or None)
        else:
            st = dense.circuit_state(qc)
            for idx in np.nonzero(np.abs(st.amps) > 1e-9)[0]:
                digits = np.unravel_index(idx, (qc.d,) * qc.n)
                ket = "".join(str(v) for v in digits)
                lines.append(f"|{ket}>  {st.amps[idx]:.6f}")
            dist = st.born_distribution(qc.measured_qudits() or None)
        measured = qc.measured_qudits()
        if measured:
            out = dense.sample_distribution(dist, len(measured), qc.d, 1, rng)[0]
            lines.append(_outcome_line(out))
        _emit("\n".join(lines) + "\n", args.out)
        return 0

    if args.reduce and not prime:
        print(f"error: --reduce needs post-measurement tableaus, unavailable for composite d={qc.d}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    if replay and not prime:
        print(f"error: --replay needs the CHP engine, unavailable for composite d={qc.d}", file=sys.stderr)
        return EXIT_UNSUPPORTED

    tab = Tableau(qc.n, qc.d, full=True)
    if prime:
        results = tab.apply_circuit(qc, rng=rng, replay=replay)
        outcome = np.concatenate(results) if results else None
        if args.reduce:
            # re-run measuring qudit by qudit, reducing after each
            tab = Tableau(qc.n, qc.d, full=True)
            gate_only = qc.copy()
            gate_only.ops = [op for op in qc.ops if op.kind != "measure"]
            tab.apply_circuit(gate_only, rng=_rng(args))
            outs = []
            measured = sorted(qc.measured_qudits(), reverse=True)
            for q in measured:
                rec = tab.measure_qudit_record(q, rng=rng)
                outs.append(rec.outcome)
                if tab.n > 1:
                    tab = tab.reduce_after_measurement(rec)
            outcome = np.array(list(reversed(outs)))
    else:
        gate_only = qc.copy()
        gate_only.ops = [op for op in qc.ops if op.kind != "measure"]
        tab.apply_circuit(gate_only, rng=rng)
        measured = qc.measured_qudits()
        outcome = None
        if measured:
            sampler = composite.build_snf_sampler(tab)
            outcome = sampler.sample(1, rng)[0][list(measured)]

    lines.append("Final tableau" if not qc.measured_qudits() else "Post-measurement tableau")
    lines.append(tab.to_text())
    if outcome is not None and len(outcome):
        lines.append("")
        lines.append(_outcome_line(outcome))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _direct_chunk(payload):
    text, shots, entropy = payload
    qc = parse(text)
    return noise.direct_run(qc, shots, np.random.default_rng(entropy))


def _sample_outcomes(qc: Circuit, args, rng) -> np.ndarray:
    shots = args.shots
    measured = qc.measured_qudits()
    if not measured:
        raise NoMeasurementError("circuit has no measurement ops")
    if args.backend == "dense":
        if qc.noise_ops():
            dist = dense.circuit_density(qc).born_distribution(measured)
        else:
            dist = dense.circuit_state(qc).born_distribution(measured)
        return dense.sample_distribution(dist, len(measured), qc.d, shots, rng)

    strategy = args.strategy
    if strategy == "auto":
        strategy = "direct" if qc.noise_ops() else "clean"

    if strategy == "clean" or not qc.noise_ops():
        tab = Tableau(qc.n, qc.d, full=True)
        stripped = qc.copy()
        stripped.ops = [op for op in qc.ops if op.kind == "gate"]
        tab.apply_circuit(stripped, rng=rng)
        if modular.is_prime(qc.d):
            sampler = tab.build_affine_sampler(rng)
            return sampler.sample(shots, rng)[:, list(measured)]
        sampler = composite.build_snf_sampler(tab)
        return sampler.sample(shots, rng)[:, list(measured)]
    if strategy == "direct":
        if args.workers > 1:
            seed = _seed(args) or 0
            chunk = (shots + args.workers - 1) // args.workers
            payloads = []
            start = 0
            while start < shots:
                take = min(chunk, shots - start)
                payloads.append((qc.serialize(), take, [seed, start]))
                start += take
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                parts = list(pool.map(_direct_chunk, payloads))
            return np.vstack(parts)
        return noise.direct_run(qc, shots, rng)
    if strategy == "frames":
        return noise.pauli_frame_run(qc, shots, rng)
    if strategy == "push":
        plan = noise.build_push_plan(qc)
        _, out = noise.push_sample(plan, shots, rng)
        return out
    raise QuditSimError(f"unknown strategy {strategy!r}")


def cmd_sample(args) -> int:
    qc = _load_circuit(args.input)
    rng = _rng(args)
    out = _sample_outcomes(qc, args, rng)
    measured = qc.measured_qudits()
    if args.format == "csv":
        lines = [",".join(f"q{q}" for q in measured)]
        lines += [",".join(str(int(v)) for v in row) for row in out]
        text = "\n".join(lines) + "\n"
    elif args.format == "json":
        text = json.dumps(
            {"qudits": list(measured), "shots": len(out), "outcomes": out.tolist()},
            separators=(",", ":"),
        ) + "\n"
    else:
        text = "\n".join("[" + " ".join(str(int(v)) for v in row) + "]" for row in out) + "\n"
    _emit(text, args.out)
    return 0


def cmd_fidelity(args) -> int:
    qc = _load_circuit(args.input)
    shots = args.shots
    method = args.method
    seed = _seed(args)

    def estimate(circ, idx):
        rng = np.random.default_rng([seed or 0, idx])
        if method == "frames":
            est = noise.fidelity_frames(circ, shots, rng)
        else:
            est = noise.fidelity_push(circ, shots, rng)
        stderr = float(np.sqrt(max(est * (1 - est), 0.0) / shots))
        return est, stderr

    results = []
    if args.sweep:
        p0, p1, steps = args.sweep.split(":")
        ps = np.linspace(float(p0), float(p1), int(steps))
        for idx, p in enumerate(ps):
            swept = qc.copy()
            model = depolarizing(float(p), qc.d)
            swept.models = {mid: model for mid in qc.models}
            est, stderr = estimate(swept, idx)
            results.append({"p": float(p), "estimate": est, "stderr": stderr, "shots": shots})
    else:
        est, stderr = estimate(qc, 0)
        results.append({"estimate": est, "stderr": stderr, "shots": shots})
    _emit(json.dumps({"method": method, "results": results}, indent=2) + "\n", args.out)
    return 0


def cmd_bench(args) -> int:
    rows = bench_mod.scaling_report()
    lines = ["sweep,param,seconds_per_shot"]
    lines += [f"{r['sweep']},{r['param']},{r['seconds_per_shot']:.3e}" for r in rows]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quditsim", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="circuit file (QQC 1 text format)")
        p.add_argument("--seed", type=int, default=None, help="rng seed (QQ_SEED env as fallback)")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("run", help="single-shot run; prints the final tableau")
    common(p)
    p.add_argument("--backend", choices=["tableau", "dense"], default="tableau")
    p.add_argument("--draw", action="store_true", help="print the circuit before running")
    p.add_argument("--replay", default=None, help="forced outcomes k0,k1,... for measured qudits")
    p.add_argument("--reduce", action="store_true", help="drop measured qudits from the tableau")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("sample", help="multi-shot sampling")
    common(p)
    p.add_argument("--backend", choices=["tableau", "dense"], default="tableau")
    p.add_argument(
        "--strategy",
        choices=["auto", "clean", "direct", "frames", "push"],
        default="auto",
        help="noise strategy (auto: clean sampler without noise, direct with)",
    )
    p.add_argument("--shots", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json", "text"], default="csv")
    p.add_argument("--workers", type=int, default=1, help="process pool size for direct sampling")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("fidelity", help="Monte Carlo circuit fidelity")
    common(p)
    p.add_argument("--method", choices=["push", "frames"], default="push")
    p.add_argument("--shots", type=int, default=10000)
    p.add_argument("--sweep", default=None, help="p0:p1:steps depolarizing sweep over the noise sites")
    p.set_defaults(fn=cmd_fidelity)

    p = sub.add_parser("bench", help="scaling trends (relative, single machine)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (TooLargeError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except QuditSimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
