"""Finite probability vectors, measure flows and the half-L1 metric."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .numeric import NORM_TOL, RATIONAL, InputError, convert, fmt, is_exact


@dataclass(frozen=True)
class FiniteDist:
    """Probability vector over a finite, index-labeled support.

    Weights are either all rationals (exact mode) or floats. Equality and
    hashing use the weights only, so two flows built independently but with
    the same numbers are the same atom.
    """

    weights: tuple
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        w = tuple(self.weights)
        object.__setattr__(self, "weights", w)
        if not w:
            raise InputError("distribution needs a non-empty support")
        if any(x < 0 for x in w):
            raise InputError(f"negative weight in {self._short()}")
        total = sum(w)
        if is_exact(w):
            if total != 1:
                raise InputError(f"weights sum to {fmt(total)}, not 1, in {self._short()}")
        elif abs(float(total) - 1.0) > NORM_TOL:
            raise InputError(f"weights sum to {float(total)!r}, not 1, in {self._short()}")

    @classmethod
    def of(cls, weights, mode: str = RATIONAL, name: str | None = None) -> "FiniteDist":
        return cls(tuple(convert(x, mode) for x in weights), name)

    @classmethod
    def delta(cls, k: int, n: int, mode: str = RATIONAL) -> "FiniteDist":
        one, zero = convert(1, mode), convert(0, mode)
        return cls(tuple(one if i == k else zero for i in range(n)))

    @classmethod
    def uniform(cls, n: int, mode: str = RATIONAL) -> "FiniteDist":
        return cls(tuple(convert(Fraction(1, n), mode) for _ in range(n)))

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def exact(self) -> bool:
        return is_exact(self.weights)

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __iter__(self):
        return iter(self.weights)

    def to_float(self) -> "FiniteDist":
        return FiniteDist(tuple(float(x) for x in self.weights), self.name)

    def to_strings(self) -> list[str]:
        return [fmt(x) for x in self.weights]

    def label(self) -> str:
        return self.name or self._short()

    def _short(self) -> str:
        return "(" + ", ".join(fmt(x) for x in self.weights) + ")"


@dataclass(frozen=True)
class MeasureFlow:
    """Sequence m_0, ..., m_T of distributions over the state space."""

    entries: tuple
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise InputError("a measure flow needs at least one time step")
        sizes = {m.size for m in entries}
        if len(sizes) != 1:
            raise InputError(f"flow entries have different support sizes {sorted(sizes)}")

    @classmethod
    def of(cls, rows, mode: str = RATIONAL, name: str | None = None) -> "MeasureFlow":
        return cls(tuple(FiniteDist.of(r, mode) for r in rows), name)

    @property
    def horizon(self) -> int:
        return len(self.entries) - 1

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, t):
        return self.entries[t]

    def __iter__(self):
        return iter(self.entries)

    def prefix(self, t: int) -> tuple:
        """m^{(t)} = (m_0, ..., m_t)."""
        return self.entries[: t + 1]

    def label(self) -> str:
        return self.name or "[" + "; ".join(m._short() for m in self.entries) + "]"


def _check_same_support(a: FiniteDist, b: FiniteDist):
    if a.size != b.size:
        raise InputError(f"support mismatch: {a.size} vs {b.size} points")


def dist(a: FiniteDist, b: FiniteDist):
    """Half the L1 distance; total variation on a finite set."""
    _check_same_support(a, b)
    total = sum(abs(x - y) for x, y in zip(a.weights, b.weights))
    return total / 2


def dist_T(a: MeasureFlow, b: MeasureFlow):
    """Plain sum over time of per-step distances."""
    if len(a) != len(b):
        raise InputError(f"flow length mismatch: {len(a)} vs {len(b)}")
    return sum((dist(x, y) for x, y in zip(a, b)), start=0 * a[0][0])


def mean_under(f: Sequence, m: FiniteDist):
    """Expectation of a per-state table under m."""
    if len(f) != m.size:
        raise InputError(f"table has {len(f)} entries, measure has {m.size}")
    return sum((v * w for v, w in zip(f, m.weights)), start=0 * m.weights[0])


def empirical(states: Sequence[int], n_states: int, exclude: int | None = None,
              mode: str = RATIONAL) -> FiniteDist:
    """Normalized histogram of ``states`` over range(n_states).

    With ``exclude`` the entry at that index is dropped first, giving the
    N-1 denominator of the exclude-one measure.
    """
    pool = [s for i, s in enumerate(states) if i != exclude]
    if not pool:
        raise InputError("empirical measure of an empty sample")
    counts = Counter(pool)
    bad = [s for s in counts if not 0 <= s < n_states]
    if bad:
        raise InputError(f"state index out of range: {bad[0]}")
    n = len(pool)
    return FiniteDist(tuple(convert(Fraction(counts.get(k, 0), n), mode) for k in range(n_states)))
