"""Stabilizer tableau engine for prime-dimension qudits.

A full tableau holds 2n generator rows (destabilizers first, then
stabilizers) over Z_d with tau-phase exponents mod 2d.  Gate updates work
for any d >= 2; measurement, affine sampling, reduction and statevector
extraction require prime d (composite d is served by quditsim.composite).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gates, kernels, modular, weyl
from .errors import (
    CompositeDimensionError,
    IndexOutOfRangeError,
    ControlEqualsTargetError,
    InvalidDimensionError,
    InvalidTableauError,
    NotFullTableauError,
    TooLargeError,
)

DENSE_STATE_CUTOFF = 1 << 20


@dataclass
class MeasurementRecord:
    """What a single-qudit measurement did, for later tableau reduction."""

    qudit: int
    outcome: int
    random: bool
    pivot: int  # replaced stabilizer row index (random case), else -1


@dataclass
class AffineSampler:
    """All measurement outcomes of a tableau as v0 + rowspan(basis) over Z_d."""

    v0: np.ndarray
    basis: np.ndarray  # (k, n)
    d: int

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    def sample(self, shots: int, rng) -> np.ndarray:
        """Uniform outcomes over the affine subspace, one row per shot; O(k*n) each."""
        k = self.rank
        if k == 0:
            return np.tile(self.v0, (shots, 1))
        c = rng.integers(0, self.d, size=(shots, k), dtype=np.int64)
        return (self.v0 + c @ self.basis) % self.d

    def orbit(self) -> np.ndarray:
        """Every outcome in the subspace, lexicographic in the coefficient vector."""
        k = self.rank
        n = len(self.v0)
        if k == 0:
            return self.v0.reshape(1, n)
        grids = np.meshgrid(*([np.arange(self.d)] * k), indexing="ij")
        coeffs = np.stack([g.ravel() for g in grids], axis=1)
        return (self.v0 + coeffs @ self.basis) % self.d


class Tableau:
    """Stabilizer (and optionally destabilizer) generators of an n-qudit state."""

    def __init__(self, n: int, d: int, full: bool = True):
        if d < 2:
            raise InvalidDimensionError(f"qudit dimension must be >= 2, got {d}")
        if d > modular.MAX_MODULUS:
            raise InvalidDimensionError(f"qudit dimension must be <= {modular.MAX_MODULUS}")
        if n < 1:
            raise InvalidDimensionError(f"need at least one qudit, got n={n}")
        self.n = n
        self.d = d
        self.full = full
        rows = 2 * n if full else n
        self.x = np.zeros((rows, n), dtype=np.int64)
        self.z = np.zeros((rows, n), dtype=np.int64)
        self.r = np.zeros(rows, dtype=np.int64)
        eye = np.eye(n, dtype=np.int64)
        if full:
            self.x[:n] = eye  # destabilizers X_i
            self.z[n:] = eye  # stabilizers Z_i fixing |0...0>
        else:
            self.z[:] = eye

    # -- construction / comparison ------------------------------------------

    @classmethod
    def from_arrays(cls, d: int, x, z, r, full: bool = True) -> "Tableau":
        x = np.asarray(x, dtype=np.int64)
        z = np.asarray(z, dtype=np.int64)
        r = np.asarray(r, dtype=np.int64)
        rows, n = x.shape
        t = cls.__new__(cls)
        t.n = n
        t.d = d
        t.full = full
        expected = 2 * n if full else n
        if rows != expected or z.shape != x.shape or r.shape != (rows,):
            raise InvalidTableauError("array shapes do not match n/full")
        t.x = x % d
        t.z = z % d
        t.r = r % (2 * d)
        return t

    def copy(self) -> "Tableau":
        t = Tableau.__new__(Tableau)
        t.n, t.d, t.full = self.n, self.d, self.full
        t.x = self.x.copy()
        t.z = self.z.copy()
        t.r = self.r.copy()
        return t

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tableau):
            return NotImplemented
        return (
            (self.n, self.d, self.full) == (other.n, other.d, other.full)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
            and np.array_equal(self.r, other.r)
        )

    @property
    def n_rows(self) -> int:
        return self.x.shape[0]

    @property
    def stab_offset(self) -> int:
        return self.n if self.full else 0

    def row(self, idx: int) -> weyl.PauliRow:
        return weyl.PauliRow(self.x[idx].copy(), self.z[idx].copy(), int(self.r[idx]), self.d)

    def stabilizer_rows(self) -> list[weyl.PauliRow]:
        o = self.stab_offset
        return [self.row(i) for i in range(o, o + self.n)]

    # -- gates ---------------------------------------------------------------

    def _check_qudits(self, gate: str, qudits) -> None:
        for q in qudits:
            if not 0 <= q < self.n:
                raise IndexOutOfRangeError(f"qudit {q} out of range for n={self.n}")
        if gate in gates.TWO_QUDIT and qudits[0] == qudits[1]:
            raise ControlEqualsTargetError(f"{gate} needs distinct qudits, got {qudits}")

    def apply_gate(self, gate: str, qudits, params=(), dagger: bool = False) -> None:
        """Apply one named gate; updates every row per its conjugation rule."""
        name, dag2 = gates.split_mnemonic(gate)
        self._check_qudits(name, qudits)
        ops = gates.pack_op(name, qudits, params, dagger ^ dag2).reshape(1, 6)
        kernels.apply_ops(self.x, self.z, self.r, ops, self.d)

    def apply_packed(self, ops: np.ndarray) -> None:
        if len(ops):
            kernels.apply_ops(self.x, self.z, self.r, ops, self.d)

    def apply_circuit(self, circuit, rng=None, skip_noise: bool = False, replay=None):
        """Run a circuit on this tableau.

        Gates are batched into kernel calls; noise ops draw from the circuit's
        registered models (phase-column updates only); measurement ops measure
        in the listed order.  Returns the list of outcome arrays, one per
        measurement op.  `replay` optionally supplies forced outcomes consumed
        across all measured qudits in order.
        """
        if circuit.n != self.n or circuit.d != self.d:
            raise IndexOutOfRangeError(
                f"circuit ({circuit.n}, d={circuit.d}) does not fit tableau ({self.n}, d={self.d})"
            )
        if rng is None:
            rng = np.random.default_rng()
        replay = list(replay) if replay is not None else []
        replay_pos = 0
        results = []
        pending: list[np.ndarray] = []

        def flush():
            if pending:
                self.apply_packed(np.stack(pending))
                pending.clear()

        for op in circuit.ops:
            if op.kind == "gate":
                pending.append(gates.pack_op(op.gate, op.qudits, op.params, op.dagger))
            elif op.kind == "noise":
                flush()
                if not skip_noise:
                    a, b = circuit.models[op.model_id].sample_one(rng)
                    if a or b:
                        self.apply_gate("W", (op.qudit,), params=(a, b))
            else:  # measure
                flush()
                forced = None
                if replay_pos < len(replay):
                    take = replay[replay_pos : replay_pos + len(op.qudits)]
                    forced = list(take) + [None] * (len(op.qudits) - len(take))
                    replay_pos += len(op.qudits)
                results.append(self.measure_subset(op.qudits, rng, forced=forced))
        flush()
        return results

    # -- measurement ----------------------------------------------------------

    def _require_full_prime(self):
        if not self.full:
            raise NotFullTableauError("measurement needs destabilizers (full=True)")
        if not modular.is_prime(self.d):
            raise CompositeDimensionError(
                f"d={self.d} is composite; use the SNF sampler (quditsim.composite)"
            )

    def measure_qudit(self, i: int, rng=None, forced: int | None = None) -> int:
        return self.measure_qudit_record(i, rng, forced).outcome

    def measure_qudit_record(self, i: int, rng=None, forced: int | None = None) -> MeasurementRecord:
        """Measure qudit i in the computational basis; mutates the tableau.

        Random outcomes draw from rng unless `forced` pins them (deterministic
        outcomes ignore `forced`).  Returns the record needed for reduction.
        """
        self._require_full_prime()
        if not 0 <= i < self.n:
            raise IndexOutOfRangeError(f"qudit {i} out of range for n={self.n}")
        if forced is None:
            draw = int(rng.integers(0, self.d)) if rng is not None else int(
                np.random.default_rng().integers(0, self.d)
            )
            f = -1
        else:
            draw = 0
            f = int(forced)
        outcomes, pivots = kernels.measure_qudits(
            self.x,
            self.z,
            self.r,
            self.d,
            np.array([i], dtype=np.int64),
            np.array([draw], dtype=np.int64),
            np.array([f], dtype=np.int64),
        )
        if outcomes[0] < 0:
            raise InvalidTableauError(f"deterministic outcome undefined at qudit {i}")
        return MeasurementRecord(
            qudit=i,
            outcome=int(outcomes[0]),
            random=pivots[0] >= 0,
            pivot=int(pivots[0]),
        )

    def measure_subset(self, indices, rng=None, forced=None) -> np.ndarray:
        """Measure the listed qudits in the given order; mutates the tableau.

        Random draws are pre-drawn positionally (one per listed qudit) so the
        result depends only on the rng state, not on which outcomes happen to
        be deterministic.
        """
        self._require_full_prime()
        indices = np.asarray(list(indices), dtype=np.int64)
        for q in indices:
            if not 0 <= q < self.n:
                raise IndexOutOfRangeError(f"qudit {q} out of range for n={self.n}")
        if rng is None:
            rng = np.random.default_rng()
        draws = rng.integers(0, self.d, size=len(indices), dtype=np.int64)
        fvec = np.full(len(indices), -1, dtype=np.int64)
        if forced is not None:
            for j, f in enumerate(forced):
                if f is not None:
                    fvec[j] = f
        outcomes, _ = kernels.measure_qudits(self.x, self.z, self.r, self.d, indices, draws, fvec)
        if (outcomes < 0).any():
            raise InvalidTableauError("deterministic outcome undefined")
        return outcomes

    def measure_all(self, rng=None, forced=None) -> np.ndarray:
        """Measure every qudit in ascending index order."""
        return self.measure_subset(range(self.n), rng, forced)

    # -- multi-shot sampling ---------------------------------------------------

    def build_affine_sampler(self, rng=None) -> AffineSampler:
        """One CHP pass for the offset, then O(k*n)-per-shot affine sampling."""
        self._require_full_prime()
        basis_rows, rank, _ = modular.rref_mod_p(self.x[self.n :].tolist(), self.d)
        v0 = self.copy().measure_all(rng)
        basis = np.array(basis_rows[:rank], dtype=np.int64).reshape(rank, self.n)
        return AffineSampler(v0=v0, basis=basis, d=self.d)

    # -- reduction ---------------------------------------------------------------

    def reduce_after_measurement(self, record: MeasurementRecord) -> "Tableau":
        """Drop the measured qudit, returning a valid (n-1)-qudit full tableau.

        Random case: the replaced stabilizer row is the measurement row; clear
        its Z column from the other stabilizers and remove the pair.
        Deterministic case: promote the measurement row over the first
        destabilizer with a nonzero X coefficient (one-step equivalent of
        eliminating the dependent stabilizer with dual destabilizer updates),
        then proceed as in the random case.
        """
        self._require_full_prime()
        if self.n < 2:
            raise InvalidTableauError("cannot reduce a single-qudit tableau")
        n, d = self.n, self.d
        i = record.qudit
        t = self.copy()

        if record.random:
            p = record.pivot
        else:
            # coefficients of Z_i over the stabilizers, read off the destabilizers
            coeffs = t.x[:n, i]
            hit = np.nonzero(coeffs)[0]
            if hit.size == 0:
                raise InvalidTableauError("no destabilizer witnesses the measured qudit")
            j = int(hit[0])
            p = n + j
            # d_j <- d_j^{c^-1} so it pairs with the measurement row
            inv = modular.mod_inverse(int(coeffs[j]), d)
            t._row_self_power(j, inv)
            # other destabilizers: clear their Z_i expansion coefficient
            for q in range(n):
                if q != j and t.x[q, i] != 0:
                    t._row_mul_power(q, j, d - int(t.x[q, i]))
            # the stabilizer slot becomes the measurement row
            t.x[p] = 0
            t.z[p] = 0
            t.z[p, i] = 1
            t.r[p] = (-2 * record.outcome) % (2 * d)

        # clear z_i from every other stabilizer row with the measurement row
        for q in range(n, 2 * n):
            if q != p and t.z[q, i] != 0:
                t._row_mul_power(q, p, d - int(t.z[q, i]))

        keep_rows = [q for q in range(2 * n) if q != p and q != p - n]
        keep_cols = [c for c in range(n) if c != i]
        out = Tableau.__new__(Tableau)
        out.n = n - 1
        out.d = d
        out.full = True
        out.x = t.x[np.ix_(keep_rows, keep_cols)].copy()
        out.z = t.z[np.ix_(keep_rows, keep_cols)].copy()
        out.r = t.r[keep_rows].copy()
        return out

    def _row_mul_power(self, dst: int, src: int, e: int) -> None:
        # g_dst <- g_dst * g_src^e
        d = self.d
        e = int(e) % d
        if e == 0:
            return
        d2 = 2 * d
        zx = int(self.z[src] @ self.x[src]) % d2
        cross = int(self.z[dst] @ self.x[src]) % d2
        self.r[dst] = (self.r[dst] + e * self.r[src] + e * (e - 1) * zx + 2 * e * cross) % d2
        self.x[dst] = (self.x[dst] + e * self.x[src]) % d
        self.z[dst] = (self.z[dst] + e * self.z[src]) % d

    def _row_self_power(self, idx: int, e: int) -> None:
        d = self.d
        e = int(e) % d
        d2 = 2 * d
        zx = int(self.z[idx] @ self.x[idx]) % d2
        self.r[idx] = (e * self.r[idx] + e * (e - 1) * zx) % d2
        self.x[idx] = (e * self.x[idx]) % d
        self.z[idx] = (e * self.z[idx]) % d

    # -- validity ------------------------------------------------------------------

    def validate(self) -> None:
        """Raise InvalidTableauError unless all tableau invariants hold."""
        d = self.d
        sym = (self.x @ self.z.T - self.z @ self.x.T) % d
        if self.full:
            n = self.n
            dd = sym[:n, :n]
            ss = sym[n:, n:]
            cross = sym[:n, n:]
            if dd.any():
                raise InvalidTableauError("destabilizers do not commute")
            if ss.any():
                raise InvalidTableauError("stabilizers do not commute")
            pair = np.diag(cross)
            if (pair == 0).any() or len(set(pair.tolist())) != 1:
                raise InvalidTableauError("paired rows must share one nonzero phase")
            off = cross - np.diag(pair)
            if off.any():
                raise InvalidTableauError("unpaired rows must commute")
        else:
            if sym.any():
                raise InvalidTableauError("stabilizers do not commute")
        if d % 2 == 1 and (self.r % 2).any():
            raise InvalidTableauError("odd d requires even phase exponents")

    # -- statevector -----------------------------------------------------------------

    def _row_action(self, xrow, zrow, rexp, vec: np.ndarray) -> np.ndarray:
        """Apply tau^r X^x Z^z to a dense vector laid out base-d, qudit 0 first."""
        d, n = self.d, self.n
        omegas = np.array([weyl.omega_power(k, d) for k in range(d)])
        grid = vec.reshape((d,) * n)
        digits = np.arange(d)
        for q in range(n):
            zq = int(zrow[q])
            if zq:
                shape = [1] * n
                shape[q] = d
                grid = grid * omegas[(zq * digits) % d].reshape(shape)
        for q in range(n):
            xq = int(xrow[q])
            if xq:
                grid = np.roll(grid, xq, axis=q)
        return (weyl.tau_power(int(rexp), d) * grid).ravel()

    def to_statevector(self, cutoff: int = DENSE_STATE_CUTOFF) -> np.ndarray:
        """The unique unit vector fixed by all stabilizer rows.

        Global phase is fixed by making the first sizeable amplitude real
        positive.  Raises InvalidTableauError when the stabilizer rows do not
        pin down a one-dimensional fixed space.
        """
        d, n = self.d, self.n
        dim = d**n
        if dim > cutoff:
            raise TooLargeError(f"d^n = {dim} exceeds cutoff {cutoff}")
        o = self.stab_offset
        if modular.is_prime(d):
            stacked = np.hstack([self.x[o : o + n], self.z[o : o + n]]).tolist()
            _, rank, _ = modular.rref_mod_p(stacked, d)
            if rank != n:
                raise InvalidTableauError("dependent stabilizer generators")

        def project(vec: np.ndarray) -> np.ndarray:
            for row in range(o, o + n):
                acc = vec.copy()
                cur = vec
                for _ in range(d - 1):
                    cur = self._row_action(self.x[row], self.z[row], self.r[row], cur)
                    acc = acc + cur
                vec = acc / d
            return vec

        psi = None
        for start in range(dim):
            vec = np.zeros(dim, dtype=complex)
            vec[start] = 1.0
            cand = project(vec)
            norm = np.linalg.norm(cand)
            if norm > 1e-8:
                psi = cand / norm
                break
        if psi is None:
            raise InvalidTableauError("stabilizer projector annihilates every basis state")
        # probe a fixed dense vector: a projector of rank > 1 maps it off span{psi}
        probe_rng = np.random.default_rng(0)
        probe = project(probe_rng.normal(size=dim) + 1j * probe_rng.normal(size=dim))
        resid = probe - psi * (psi.conj() @ probe)
        if np.linalg.norm(resid) > 1e-6 * max(np.linalg.norm(probe), 1.0):
            raise InvalidTableauError("stabilizer projector has rank > 1")
        for row in range(o, o + n):
            if np.linalg.norm(self._row_action(self.x[row], self.z[row], self.r[row], psi) - psi) > 1e-8:
                raise InvalidTableauError("projected vector is not fixed by all stabilizers")
        nz = np.nonzero(np.abs(psi) > 1e-9)[0]
        psi = psi * (np.abs(psi[nz[0]]) / psi[nz[0]])
        return psi

    # -- text and files -------------------------------------------------------------

    def to_text(self) -> str:
        """Block rendering: header, destabilizer rows, separator, stabilizer rows."""
        n = self.n
        labels = (
            [f"d{i}" for i in range(n)] + [f"s{i}" for i in range(n)]
            if self.full
            else [f"s{i}" for i in range(n)]
        )
        wl = max(2, max(len(s) for s in labels))
        wc = max(2, len(str(self.d - 1)), len(f"x{n - 1}"))
        lines = []
        header = (
            f"{'#':<{wl}} |"
            + "".join(f" {f'x{j}':>{wc}}" for j in range(n))
            + " |"
            + "".join(f" {f'z{j}':>{wc}}" for j in range(n))
            + " | tau"
        )
        sep = "-" * (8 * n)
        lines.append(header)
        lines.append(sep)
        for idx in range(self.n_rows):
            if self.full and idx == n:
                lines.append(sep)
            lines.append(
                f"{labels[idx]:<{wl}} |"
                + "".join(f" {int(v):>{wc}}" for v in self.x[idx])
                + " |"
                + "".join(f" {int(v):>{wc}}" for v in self.z[idx])
                + f" | {int(self.r[idx])}"
            )
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Tableau(n={self.n}, d={self.d}, full={self.full})"

    def save(self, path) -> None:
        """Versioned text container: header line, 'n d full', then the integer grid."""
        with open(path, "w") as fh:
            fh.write("QQT 1\n")
            fh.write(f"{self.n} {self.d} {int(self.full)}\n")
            for idx in range(self.n_rows):
                row = list(self.x[idx]) + list(self.z[idx]) + [self.r[idx]]
                fh.write(" ".join(str(int(v)) for v in row) + "\n")

    @classmethod
    def load(cls, path) -> "Tableau":
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        if not lines or lines[0] != "QQT 1":
            raise InvalidTableauError("not a QQT 1 tableau file")
        n, d, full = (int(v) for v in lines[1].split())
        rows = 2 * n if full else n
        if len(lines) != 2 + rows:
            raise InvalidTableauError(f"expected {rows} tableau rows, got {len(lines) - 2}")
        grid = np.array([[int(v) for v in ln.split()] for ln in lines[2:]], dtype=np.int64)
        if grid.shape != (rows, 2 * n + 1):
            raise InvalidTableauError("malformed tableau grid")
        return cls.from_arrays(d, grid[:, :n], grid[:, n : 2 * n], grid[:, 2 * n], full=bool(full))


def new_tableau(n: int, d: int, full: bool = True) -> Tableau:
    return Tableau(n, d, full)
