"""Circuit representation, construction API, text format, and ASCII rendering.

The text grammar (one op per line, '#' starts a comment):

    QQC 1
    dim <d>
    qudits <n>
    name <string>            # optional
    <MNEMONIC> <q> [<q2>]    # gates; W as "W(<a>,<b>) <q>"; DAG suffix daggers
    NOISE <MODEL>(<params>) <q>
    M <q> [<q> ...]

Built-in noise spellings: DEPOL(p), DEPHASE(p), FLIP(p), and
WEYLMIX(p00:p01:...) listing all d^2 weights in lexicographic (a, b) order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import gates, models
from .errors import (
    ControlEqualsTargetError,
    IndexOutOfRangeError,
    InvalidProbabilityError,
    NotInvertibleError,
    ParseError,
)


@dataclass(frozen=True)
class GateOp:
    gate: str
    qudits: tuple
    params: tuple = ()
    dagger: bool = False
    kind = "gate"

    def mnemonic(self) -> str:
        if self.gate == "W":
            a, b = self.params
            return f"W({a},{b})" if not self.dagger else f"WDAG({a},{b})"
        return gates.mnemonic(self.gate, self.dagger)


@dataclass(frozen=True)
class NoiseOp:
    model_id: int
    qudit: int
    kind = "noise"


@dataclass(frozen=True)
class MeasureOp:
    qudits: tuple
    kind = "measure"


class Circuit:
    """Ordered list of gate / noise / measurement ops on n qudits of dimension d."""

    def __init__(self, n: int, d: int, name: str | None = None):
        if n < 1 or d < 2:
            raise IndexOutOfRangeError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
        self.n = n
        self.d = d
        self.name = name
        self.ops: list = []
        self.models: dict[int, models.NoiseModel] = {}
        self._model_ids: dict = {}

    # -- noise model registry -------------------------------------------------

    def add_model(self, model: models.NoiseModel) -> int:
        """Register a noise model, reusing the id of an identical one."""
        key = model.key()
        if key in self._model_ids:
            return self._model_ids[key]
        mid = len(self.models)
        self.models[mid] = model
        self._model_ids[key] = mid
        return mid

    # -- structural edits -------------------------------------------------------

    def _validate(self, op) -> None:
        if op.kind == "gate":
            for q in op.qudits:
                if not 0 <= q < self.n:
                    raise IndexOutOfRangeError(f"qudit {q} out of range for n={self.n}")
            if op.gate in gates.TWO_QUDIT and op.qudits[0] == op.qudits[1]:
                raise ControlEqualsTargetError(f"{op.gate} with control == target == {op.qudits[0]}")
        elif op.kind == "noise":
            if not 0 <= op.qudit < self.n:
                raise IndexOutOfRangeError(f"qudit {op.qudit} out of range for n={self.n}")
            if op.model_id not in self.models:
                raise IndexOutOfRangeError(f"noise model {op.model_id} not registered")
        else:
            for q in op.qudits:
                if not 0 <= q < self.n:
                    raise IndexOutOfRangeError(f"qudit {q} out of range for n={self.n}")

    def append(self, op) -> "Circuit":
        self._validate(op)
        self.ops.append(op)
        return self

    def insert_at(self, depth: int, op) -> "Circuit":
        if not 0 <= depth <= len(self.ops):
            raise IndexOutOfRangeError(f"depth {depth} out of range")
        self._validate(op)
        self.ops.insert(depth, op)
        return self

    def replace(self, idx: int, op) -> "Circuit":
        if not 0 <= idx < len(self.ops):
            raise IndexOutOfRangeError(f"op index {idx} out of range")
        self._validate(op)
        self.ops[idx] = op
        return self

    def remove(self, idx: int):
        if not 0 <= idx < len(self.ops):
            raise IndexOutOfRangeError(f"op index {idx} out of range")
        return self.ops.pop(idx)

    def copy(self) -> "Circuit":
        c = Circuit(self.n, self.d, self.name)
        c.ops = list(self.ops)
        c.models = dict(self.models)
        c._model_ids = dict(self._model_ids)
        return c

    def compose(self, other: "Circuit") -> "Circuit":
        """New circuit running self then other (same n and d)."""
        if (other.n, other.d) != (self.n, self.d):
            raise IndexOutOfRangeError("composed circuits must share n and d")
        out = self.copy()
        for op in other.ops:
            if op.kind == "noise":
                mid = out.add_model(other.models[op.model_id])
                out.append(NoiseOp(mid, op.qudit))
            else:
                out.append(op)
        return out

    def add_noise_after_each_gate(self, model: models.NoiseModel) -> "Circuit":
        """New circuit with one noise op after every gate, on its first qudit."""
        out = Circuit(self.n, self.d, self.name)
        out.models = dict(self.models)
        out._model_ids = dict(self._model_ids)
        mid = out.add_model(model)
        for op in self.ops:
            out.append(op)
            if op.kind == "gate":
                out.append(NoiseOp(mid, op.qudits[0]))
        return out

    def shift_noise_to_end(self) -> "Circuit":
        """New circuit with all noise ops moved after the gates (before measurement)."""
        out = self.copy()
        noise = [op for op in self.ops if op.kind == "noise"]
        rest = [op for op in self.ops if op.kind != "noise"]
        cut = next((i for i, op in enumerate(rest) if op.kind == "measure"), len(rest))
        out.ops = rest[:cut] + noise + rest[cut:]
        return out

    def realize_noise(self, rng) -> "Circuit":
        """Replace each noise op by a sampled W(a, b) gate; identity draws vanish."""
        out = Circuit(self.n, self.d, self.name)
        for op in self.ops:
            if op.kind == "noise":
                a, b = self.models[op.model_id].sample_one(rng)
                if a or b:
                    out.append(GateOp("W", (op.qudit,), (a, b)))
            else:
                out.append(op)
        return out

    def inverse(self) -> "Circuit":
        """Dagger of a gate-only circuit, ops reversed."""
        bad = [op for op in self.ops if op.kind != "gate"]
        if bad:
            raise NotInvertibleError("circuit with noise or measurement has no inverse")
        out = Circuit(self.n, self.d, self.name)
        for op in reversed(self.ops):
            if op.gate == "W":
                a, b = op.params
                params = ((-a) % self.d, (-b) % self.d) if not op.dagger else (a, b)
                out.append(GateOp("W", op.qudits, params, False))
            elif op.gate == "SWAP" or op.gate == "I":
                out.append(GateOp(op.gate, op.qudits))
            else:
                out.append(GateOp(op.gate, op.qudits, op.params, not op.dagger))
        return out

    # -- convenience builders ----------------------------------------------------

    def _gate(self, name, qudits, params=(), dagger=False):
        return self.append(GateOp(name, tuple(qudits), tuple(params), dagger))

    def I(self, q):  # noqa: E743
        return self._gate("I", (q,))

    def X(self, q):
        return self._gate("X", (q,))

    def Xdag(self, q):
        return self._gate("X", (q,), dagger=True)

    def Z(self, q):
        return self._gate("Z", (q,))

    def Zdag(self, q):
        return self._gate("Z", (q,), dagger=True)

    def Y(self, q):
        return self._gate("Y", (q,))

    def Ydag(self, q):
        return self._gate("Y", (q,), dagger=True)

    def W(self, a, b, q):
        return self._gate("W", (q,), (a % self.d, b % self.d))

    def Wdag(self, a, b, q):
        return self._gate("W", (q,), (a % self.d, b % self.d), dagger=True)

    def H(self, q):
        return self._gate("H", (q,))

    def Hdag(self, q):
        return self._gate("H", (q,), dagger=True)

    def S(self, q):
        return self._gate("S", (q,))

    def Sdag(self, q):
        return self._gate("S", (q,), dagger=True)

    def CNOT(self, c, t):
        return self._gate("CNOT", (c, t))

    CX = CNOT

    def CNOTdag(self, c, t):
        return self._gate("CNOT", (c, t), dagger=True)

    CXdag = CNOTdag

    def CZ(self, c, t):
        return self._gate("CZ", (c, t))

    def CZdag(self, c, t):
        return self._gate("CZ", (c, t), dagger=True)

    def SWAP(self, a, b):
        return self._gate("SWAP", (a, b))

    def noise(self, model: models.NoiseModel, q: int) -> "Circuit":
        return self.append(NoiseOp(self.add_model(model), q))

    def measure(self, *qudits) -> "Circuit":
        return self.append(MeasureOp(tuple(qudits)))

    def measure_all(self) -> "Circuit":
        return self.append(MeasureOp(tuple(range(self.n))))

    # -- queries -------------------------------------------------------------------

    def gate_ops(self):
        return [op for op in self.ops if op.kind == "gate"]

    def noise_ops(self):
        return [op for op in self.ops if op.kind == "noise"]

    def measured_qudits(self) -> tuple:
        out = []
        for op in self.ops:
            if op.kind == "measure":
                out.extend(op.qudits)
        return tuple(out)

    def measurements_terminal(self) -> bool:
        """True when no gate or noise op follows the first measurement."""
        seen = False
        for op in self.ops:
            if op.kind == "measure":
                seen = True
            elif seen:
                return False
        return True

    def __len__(self):
        return len(self.ops)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        if (self.n, self.d, self.name) != (other.n, other.d, other.name):
            return False
        if len(self.ops) != len(other.ops):
            return False
        for a, b in zip(self.ops, other.ops):
            if a.kind != b.kind:
                return False
            if a.kind == "noise":
                if a.qudit != b.qudit:
                    return False
                if self.models[a.model_id].key() != other.models[b.model_id].key():
                    return False
            elif a != b:
                return False
        return True

    def __repr__(self):
        return f"Circuit(n={self.n}, d={self.d}, name={self.name!r}, ops={len(self.ops)})"

    # -- text format ------------------------------------------------------------------

    def serialize(self) -> str:
        lines = ["QQC 1", f"dim {self.d}", f"qudits {self.n}"]
        if self.name is not None:
            lines.append(f"name {self.name}")
        for op in self.ops:
            if op.kind == "gate":
                lines.append(f"{op.mnemonic()} " + " ".join(str(q) for q in op.qudits))
            elif op.kind == "noise":
                lines.append(f"NOISE {self.models[op.model_id].tag} {op.qudit}")
            else:
                lines.append("M " + " ".join(str(q) for q in op.qudits))
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.serialize())

    @classmethod
    def load(cls, path) -> "Circuit":
        with open(path) as fh:
            return parse(fh.read())

    def render_ascii(self) -> str:
        return render_ascii(self)


_W_RE = re.compile(r"^(W|WDAG)\((-?\d+),(-?\d+)\)$", re.IGNORECASE)
_NOISE_RE = re.compile(r"^([A-Z]+)\(([^)]*)\)$", re.IGNORECASE)


def _parse_int(tok: str, line_no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(line_no, f"bad {what} {tok!r}") from None


def parse(text: str) -> Circuit:
    """Parse circuit text; raises ParseError with the offending line number."""
    entries = []
    for idx, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            entries.append((idx, line))
    if not entries or entries[0][1] != "QQC 1":
        raise ParseError(entries[0][0] if entries else 1, "missing 'QQC 1' header")
    if len(entries) < 3:
        raise ParseError(entries[-1][0], "missing 'dim' / 'qudits' header lines")

    no, line = entries[1]
    if not line.startswith("dim "):
        raise ParseError(no, "expected 'dim <d>'")
    d = _parse_int(line[4:].strip(), no, "dimension")
    if d < 2:
        raise ParseError(no, f"dimension must be >= 2, got {d}")

    no, line = entries[2]
    if not line.startswith("qudits "):
        raise ParseError(no, "expected 'qudits <n>'")
    n = _parse_int(line[7:].strip(), no, "qudit count")
    if n < 1:
        raise ParseError(no, f"qudit count must be >= 1, got {n}")

    body = entries[3:]
    name = None
    if body and body[0][1].startswith("name "):
        name = body[0][1][5:]
        body = body[1:]

    qc = Circuit(n, d, name)
    for no, line in body:
        toks = line.split()
        head = toks[0]
        try:
            if head.upper() == "M":
                if len(toks) < 2:
                    raise ParseError(no, "measurement needs at least one qudit")
                qs = [_parse_int(t, no, "qudit index") for t in toks[1:]]
                _check_range(qs, n, no)
                qc.append(MeasureOp(tuple(qs)))
                continue
            if head.upper() == "NOISE":
                if len(toks) != 3:
                    raise ParseError(no, "noise line must be 'NOISE MODEL(params) q'")
                model = _parse_noise_model(toks[1], d, no)
                q = _parse_int(toks[2], no, "qudit index")
                _check_range([q], n, no)
                qc.noise(model, q)
                continue
            m = _W_RE.match(head)
            if m:
                if len(toks) != 2:
                    raise ParseError(no, "W gate takes exactly one qudit")
                a = int(m.group(2)) % d
                b = int(m.group(3)) % d
                q = _parse_int(toks[1], no, "qudit index")
                _check_range([q], n, no)
                dag = m.group(1).upper() == "WDAG"
                qc.append(GateOp("W", (q,), (a, b), dag))
                continue
            try:
                base, dag = gates.split_mnemonic(head)
            except ValueError:
                raise ParseError(no, f"unknown gate {head!r}") from None
            arity = gates.GATE_TABLE[base][1]
            if len(toks) != 1 + arity:
                raise ParseError(no, f"{base} takes {arity} qudit argument(s)")
            qs = [_parse_int(t, no, "qudit index") for t in toks[1:]]
            _check_range(qs, n, no)
            qc.append(GateOp(base, tuple(qs), (), dag))
        except (ControlEqualsTargetError, IndexOutOfRangeError) as exc:
            raise ParseError(no, str(exc)) from None
    return qc


def _check_range(qs, n, line_no):
    for q in qs:
        if not 0 <= q < n:
            raise ParseError(line_no, f"qudit index {q} out of range (n={n})")


def _parse_noise_model(tok: str, d: int, line_no: int) -> models.NoiseModel:
    m = _NOISE_RE.match(tok)
    if not m:
        raise ParseError(line_no, f"bad noise model {tok!r}")
    kind = m.group(1).upper()
    body = m.group(2)
    try:
        if kind == "DEPOL":
            return models.depolarizing(float(body), d)
        if kind == "DEPHASE":
            return models.dephasing(float(body), d)
        if kind == "FLIP":
            return models.dit_flip(float(body), d)
        if kind == "WEYLMIX":
            return models.weylmix_from_values([float(v) for v in body.split(":")], d)
    except (ValueError, InvalidProbabilityError) as exc:
        raise ParseError(line_no, f"bad noise model {tok!r}: {exc}") from None
    raise ParseError(line_no, f"unknown noise model {kind!r}")


def random_clifford_circuit(n, d, n_gates, rng, p_two=0.35, name=None) -> Circuit:
    """Uniformly drawn gate sequence over the supported gate set (no noise)."""
    qc = Circuit(n, d, name)
    one_q = ["H", "S", "X", "Z", "Y", "W"]
    two_q = ["CNOT", "CZ", "SWAP"]
    for _ in range(n_gates):
        dagger = bool(rng.integers(0, 2))
        if n >= 2 and rng.random() < p_two:
            g = two_q[int(rng.integers(0, len(two_q)))]
            q0, q1 = rng.choice(n, size=2, replace=False)
            qc.append(GateOp(g, (int(q0), int(q1)), (), dagger))
        else:
            g = one_q[int(rng.integers(0, len(one_q)))]
            q = int(rng.integers(0, n))
            params = ()
            if g == "W":
                params = (int(rng.integers(0, d)), int(rng.integers(0, d)))
            qc.append(GateOp(g, (q,), params, dagger))
    return qc


def render_ascii(circuit: Circuit) -> str:
    """One wire row per qudit, one column per op; linked two-qudit columns.

    Noise cells show the model id (N0, N1, ...); a legend line per model
    carries its parameters.
    """
    n = circuit.n
    cols = []
    for op in circuit.ops:
        cells = {}
        if op.kind == "gate":
            if op.gate == "CNOT":
                cells[op.qudits[0]] = "*"
                cells[op.qudits[1]] = "(+)" if not op.dagger else "(-)"
            elif op.gate == "CZ":
                mark = "*" if not op.dagger else "*'"
                cells[op.qudits[0]] = mark
                cells[op.qudits[1]] = mark
            elif op.gate == "SWAP":
                cells[op.qudits[0]] = "x"
                cells[op.qudits[1]] = "x"
            else:
                label = op.gate
                if op.gate == "W":
                    label = f"W({op.params[0]},{op.params[1]})"
                if op.dagger:
                    label += "'"
                cells[op.qudits[0]] = label
            if len(op.qudits) == 2:
                lo, hi = sorted(op.qudits)
                for q in range(lo + 1, hi):
                    cells.setdefault(q, "|")
        elif op.kind == "noise":
            cells[op.qudit] = f"N{op.model_id}"
        else:
            for q in op.qudits:
                cells[q] = "M"
        cols.append(cells)

    lines = []
    label_w = len(f"q{n - 1}")
    for q in range(n):
        parts = [f"{f'q{q}':<{label_w}}:"]
        for cells in cols:
            width = max(len(v) for v in cells.values()) if cells else 1
            cell = cells.get(q, "")
            pad = width - len(cell)
            parts.append("-" + cell + "-" * (pad + 1) if cell else "-" * (width + 2))
        lines.append("".join(parts))
    for mid in sorted(circuit.models):
        lines.append(f"N{mid} = {circuit.models[mid].tag}")
    return "\n".join(lines)
