"""Weyl noise channels: normalized distributions over exponent pairs (a, b)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidProbabilityError

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class NoiseModel:
    """Probability table over single-qudit Weyl exponent pairs.

    `pairs` holds deduplicated (a, b) rows including the identity (0, 0);
    weights are non-negative and sum to one.  `tag` carries the textual
    construction form ("DEPOL(0.1)", ...) used by the circuit grammar.
    """

    d: int
    pairs: tuple
    probs: tuple
    tag: str = field(default="", compare=False)

    @property
    def error_probability(self) -> float:
        return float(sum(p for (a, b), p in zip(self.pairs, self.probs) if (a, b) != (0, 0)))

    def key(self):
        return (self.d, self.pairs, self.probs)

    def sample_one(self, rng) -> tuple[int, int]:
        idx = rng.choice(len(self.probs), p=self._parray())
        return self.pairs[idx]

    def sample_batch(self, rng, shots: int) -> tuple[np.ndarray, np.ndarray]:
        idx = rng.choice(len(self.probs), p=self._parray(), size=shots)
        table = np.array(self.pairs, dtype=np.int64)
        return table[idx, 0], table[idx, 1]

    def _parray(self) -> np.ndarray:
        return np.array(self.probs, dtype=float)

    def full_table(self) -> np.ndarray:
        """(d*d,) weights in lexicographic (a, b) order, zeros included."""
        out = np.zeros(self.d * self.d, dtype=float)
        for (a, b), p in zip(self.pairs, self.probs):
            out[a * self.d + b] = p
        return out


def _build(d: int, weights: dict, tag: str) -> NoiseModel:
    if d < 2:
        raise InvalidProbabilityError(f"dimension must be >= 2, got {d}")
    total = sum(weights.values())
    if any(p < -_NORM_TOL for p in weights.values()):
        raise InvalidProbabilityError("negative probability weight")
    if abs(total - 1.0) > _NORM_TOL:
        raise InvalidProbabilityError(f"weights sum to {total}, expected 1")
    pairs = sorted(weights)
    return NoiseModel(
        d=d,
        pairs=tuple(pairs),
        probs=tuple(max(weights[k], 0.0) for k in pairs),
        tag=tag,
    )


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise InvalidProbabilityError(f"error probability {p} outside [0, 1]")


def depolarizing(p: float, d: int) -> NoiseModel:
    """Identity with 1-p, each of the d^2 - 1 other pairs with p/(d^2-1)."""
    _check_p(p)
    w = {(a, b): p / (d * d - 1) for a in range(d) for b in range(d) if (a, b) != (0, 0)}
    w[(0, 0)] = 1.0 - p
    return _build(d, w, f"DEPOL({p!r})")


def dephasing(p: float, d: int) -> NoiseModel:
    """Z^b with p/(d-1) for b = 1..d-1."""
    _check_p(p)
    w = {(0, b): p / (d - 1) for b in range(1, d)}
    w[(0, 0)] = 1.0 - p
    return _build(d, w, f"DEPHASE({p!r})")


def dit_flip(p: float, d: int) -> NoiseModel:
    """X^a with p/(d-1) for a = 1..d-1."""
    _check_p(p)
    w = {(a, 0): p / (d - 1) for a in range(1, d)}
    w[(0, 0)] = 1.0 - p
    return _build(d, w, f"FLIP({p!r})")


def custom(table, d: int) -> NoiseModel:
    """Arbitrary mixture from ((a, b), weight) entries; duplicates are summed."""
    w: dict = {}
    for (a, b), p in table:
        key = (a % d, b % d)
        w[key] = w.get(key, 0.0) + float(p)
    w.setdefault((0, 0), 0.0)
    full = np.zeros(d * d)
    for (a, b), p in w.items():
        full[a * d + b] = p
    tag = "WEYLMIX(" + ":".join(repr(float(v)) for v in full) + ")"
    return _build(d, w, tag)


def weylmix_from_values(values, d: int) -> NoiseModel:
    """Model from d^2 weights in lexicographic (a, b) order."""
    values = list(values)
    if len(values) != d * d:
        raise InvalidProbabilityError(f"expected {d * d} weights, got {len(values)}")
    return custom(
        [((i // d, i % d), v) for i, v in enumerate(values)],
        d,
    )
