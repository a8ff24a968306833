"""Monte Carlo cost of possibly randomized, history-dependent policies in the
mean field game (the open-loop side: a policy may use extra uniforms)."""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..game import GameSpec, inverse_cdf, transition
from ..numeric import InputError
from ..sampling import DEFAULT_BLOCK, Estimate, block_plan, run_blocks, stream
from .chain import DeviationMap
from .suggestion import SuggestionAtoms

# policy(phi, t, xhist, mprefix, u) -> action; u is a private uniform in [0, 1)
Policy = Callable


def policy_from_deviation(dev: DeviationMap) -> Policy:
    def policy(phi, t, xhist, mprefix, u):
        return dev.action(phi, t, xhist, mprefix)
    return policy


def uniform_random_policy(n_actions: int) -> Policy:
    def policy(phi, t, xhist, mprefix, u):
        return min(int(u * n_actions), n_actions - 1)
    return policy


def mc_policy_cost(spec: GameSpec, rho: SuggestionAtoms, policy, reps: int, seed: int,
                   tag: str = "mfg-policy", block: int = DEFAULT_BLOCK, workers: int = 1) -> Estimate:
    """Estimate the expected cost of ``policy`` with the flow drawn from rho.

    ``policy`` may be a DeviationMap or a callable taking a private uniform.
    """
    if reps < 2:
        raise InputError("reps must be at least 2")
    if isinstance(policy, DeviationMap):
        policy = policy_from_deviation(policy)
    atoms = list(rho.joint().items())
    weights = np.array([float(w) for _, w in atoms])
    weights = weights / weights.sum()
    T, nx = spec.horizon, spec.n_states
    m0 = np.array([float(w) for w in spec.initial])
    kcache, fcache, Fcache = {}, {}, {}

    def kern(t, x, m, a):
        key = (t, x, m, a)
        if key not in kcache:
            kcache[key] = np.array([float(p) for p in transition(spec, t, x, m, a)])
        return kcache[key]

    def run(bi, n):
        g = stream(seed, tag, bi)
        u_atom = g.random(n)
        u_x0 = g.random(n)
        u_noise = g.random((n, T))
        u_pol = g.random((n, T))
        which = inverse_cdf(weights, u_atom)
        x0 = inverse_cdf(m0, u_x0)
        out = np.empty(n)
        for r in range(n):
            (phi, flow) = atoms[which[r]][0]
            xh = (int(x0[r]),)
            cost = 0.0
            for t in range(T):
                m_t = flow[t]
                a = policy(phi, t, xh, flow.prefix(t), u_pol[r, t])
                key = (t, xh[-1], m_t, a)
                if key not in fcache:
                    fcache[key] = float(spec.running(t, xh[-1], m_t, a))
                cost += fcache[key]
                y = int(inverse_cdf(kern(t, xh[-1], m_t, a), u_noise[r, t]))
                xh = xh + (y,)
            keyF = (xh[-1], flow[T])
            if keyF not in Fcache:
                Fcache[keyF] = float(spec.terminal(xh[-1], flow[T]))
            out[r] = cost + Fcache[keyF]
        return out

    samples = np.concatenate(run_blocks(run, block_plan(reps, block), workers))
    return Estimate.from_samples(samples)
