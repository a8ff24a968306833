"""Concentration of the exclude-one empirical flow on the announced flow.

Everyone follows their suggestion; the observable is E[dist_T(mu^{1,N}, mu)]
with mu the drawn flow atom and mu^{1,N} what player 1 sees.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .correlated.suggestion import SuggestionAtoms
from .game import GameSpec
from .measures import MeasureFlow
from .nplayer import block_size, draw_uniforms, population, simulate_block
from .numeric import InputError
from .sampling import Estimate, block_plan, run_blocks, stream

CHAOS_COLUMNS = ("N", "estimate", "stderr", "reps", "flow_atom")


@dataclass(frozen=True)
class ChaosRow:
    N: int
    estimate: float
    stderr: float
    reps: int
    flow_atom: str = "mixed"

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class ChaosCurve:
    rows: list

    def __post_init__(self):
        Ns = [r.N for r in self.rows]
        if any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise InputError("chaos curve needs strictly increasing N")
        if any(r.estimate < 0 for r in self.rows):
            raise InputError("chaos estimates must be non-negative")

    def decreasing(self, k: float = 3.0) -> bool:
        """Weakly decreasing up to k combined standard errors between neighbours."""
        for a, b in zip(self.rows, self.rows[1:]):
            if b.estimate > a.estimate + k * math.hypot(a.stderr, b.stderr):
                return False
        return True


def chaos_curve(spec: GameSpec, rho: SuggestionAtoms, N_list: Sequence[int], reps: int, seed: int,
                flow: MeasureFlow | None = None, tag: str = "chaos", workers: int = 1) -> ChaosCurve:
    """Estimate E[dist_T] for each N; ``flow`` conditions on one flow atom."""
    if reps < 2:
        raise InputError("reps must be at least 2")
    pop = population(spec, rho)
    label = "mixed"
    if flow is not None:
        if flow not in pop.flows:
            raise InputError(f"flow {flow.label()} is not an atom of the suggestion")
        k = pop.flows.index(flow)
        w = np.zeros(len(pop.flows))
        w[k] = 1.0
        pop = dataclasses.replace(pop, flow_weights=w)
        label = flow.label()
    rows = []
    for N in sorted(N_list):
        if N < 2:
            raise InputError(f"N must be at least 2, got {N}")

        def run(bi, n, N=N):
            u = draw_uniforms(stream(seed, tag, N, bi), n, N, spec.horizon)
            return simulate_block(pop, u)["dist_T"]

        d = np.concatenate(run_blocks(run, block_plan(reps, block_size(N, spec.n_states)), workers))
        est = Estimate.from_samples(d)
        rows.append(ChaosRow(N, est.mean, est.stderr, reps, label))
    return ChaosCurve(rows)


def slope_fit(curve: ChaosCurve) -> float:
    """Least-squares slope of log(estimate) against log(N)."""
    if len(curve.rows) < 3:
        raise InputError("slope fit needs at least 3 rows")
    est = np.array([r.estimate for r in curve.rows], dtype=float)
    if np.any(est <= 0):
        raise InputError("slope fit needs strictly positive estimates")
    N = np.array([r.N for r in curve.rows], dtype=float)
    return float(np.polyfit(np.log(N), np.log(est), 1)[0])


__all__ = ["ChaosRow", "ChaosCurve", "chaos_curve", "slope_fit", "CHAOS_COLUMNS"]
