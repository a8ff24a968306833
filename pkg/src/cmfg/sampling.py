"""Counter-based random streams and Monte Carlo estimates.

Every stream is a Philox generator keyed by (meta-seed, experiment tag,
block index, ...), so any block of replications can be regenerated in
isolation and results do not depend on how blocks are scheduled.
"""
from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

DEFAULT_BLOCK = 2048


def _key_int(key) -> int:
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError("stream keys must be non-negative")
        return int(key)
    digest = hashlib.sha256(str(key).encode()).digest()
    return int.from_bytes(digest[:8], "little")


def seed_sequence(meta_seed: int, *keys) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(meta_seed), spawn_key=tuple(_key_int(k) for k in keys))


def stream(meta_seed: int, *keys) -> np.random.Generator:
    """Independent generator for the sub-experiment addressed by ``keys``."""
    return np.random.Generator(np.random.Philox(seed_sequence(meta_seed, *keys)))


def block_plan(reps: int, block: int = DEFAULT_BLOCK) -> list[tuple[int, int]]:
    """(block index, size) pairs covering ``reps`` replications in order."""
    out, i = [], 0
    while reps > 0:
        n = min(block, reps)
        out.append((i, n))
        reps -= n
        i += 1
    return out


def run_blocks(fn, plan, workers: int = 1) -> list:
    """Apply fn(index, size) to each block; results come back in block order."""
    if workers <= 1:
        return [fn(i, n) for i, n in plan]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(lambda b: fn(*b), plan))


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    reps: int

    @classmethod
    def from_samples(cls, x) -> "Estimate":
        x = np.asarray(x, dtype=float)
        n = x.size
        if n < 2:
            raise ValueError("need at least 2 samples for a standard error")
        return cls(float(x.mean()), float(x.std(ddof=1) / math.sqrt(n)), n)

    def ci(self, k: float = 3.0) -> tuple[float, float]:
        return self.mean - k * self.stderr, self.mean + k * self.stderr

    def contains(self, value, k: float = 3.0) -> bool:
        lo, hi = self.ci(k)
        return lo <= float(value) <= hi
