"""N-player game induced by a correlated suggestion.

One flow atom is drawn for the whole population, then every player gets an
independent strategy from the conditional law given that flow. Each player
sees the exclude-one empirical measure (N - 1 denominator). Player 1
(index 0) may deviate through a rule of its suggestion, its own state
history and the empirical-measure history it has observed.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .correlated.suggestion import SuggestionAtoms, check_r2, validate_r1
from .game import (GameSpec, inverse_cdf, kernel_probs_vec, running_cost_vec, terminal_cost_vec,
                   transition)
from .measures import FiniteDist
from .numeric import InputError, convert
from .sampling import Estimate, block_plan, run_blocks, stream

# cap on R * N * |X| floats held per block
BLOCK_BUDGET = 1 << 21
MAX_BLOCK = 8192
EXACT_GUARD = 10 ** 7


# ------------------------------------------------------------------ population

@dataclass
class Population:
    """Array view of a suggestion: flow weights, conditional strategy laws, tables."""

    spec: GameSpec
    rho: SuggestionAtoms
    strategies: list
    flows: list
    flow_weights: np.ndarray  # (F,)
    cond: np.ndarray  # (F, S) P(strategy | flow)
    flow_weights_exact: list
    cond_exact: list
    tables: np.ndarray  # (S, T, X) action indices
    flow_array: np.ndarray  # (F, T+1, X)
    m0: np.ndarray

    @property
    def n_strategies(self) -> int:
        return len(self.strategies)


def population(spec: GameSpec, rho: SuggestionAtoms) -> Population:
    """Validate the suggestion structure and precompute sampling tables."""
    r1 = validate_r1(rho, spec)
    if not r1.passed:
        raise InputError("suggestion fails the finite-support check: " + "; ".join(map(str, r1.violations[:3])))
    r2 = check_r2(rho, spec.horizon)
    if not r2.passed:
        raise InputError("suggestion fails the conditional-independence check")
    strategies, flows = rho.strategies(), rho.flows()
    fw_exact = [rho.flow_mass(f) for f in flows]
    cond_exact = []
    for f in flows:
        given = rho.strategies_given(f)
        cond_exact.append([given.get(s, 0 * fw_exact[0]) for s in strategies])
    fw = np.array([float(w) for w in fw_exact])
    return Population(
        spec, rho, strategies, flows,
        flow_weights=fw / fw.sum(),
        cond=np.array([[float(c) for c in row] for row in cond_exact]),
        flow_weights_exact=fw_exact,
        cond_exact=cond_exact,
        tables=np.array([s.table for s in strategies], dtype=np.int64),
        flow_array=np.array([[[float(w) for w in m] for m in f] for f in flows]),
        m0=np.array([float(w) for w in spec.initial]),
    )


@dataclass(frozen=True)
class Assignment:
    """One draw from the N-player suggestion."""

    flow_index: int
    strategy_indices: tuple
    flow: object
    strategies: tuple


def assign(pop: Population, u_flow, u_strat):
    """Vectorized draw: flow index per run (R,), strategy index per player (R, N)."""
    f = inverse_cdf(pop.flow_weights, u_flow)
    s = np.empty(np.shape(u_strat), dtype=np.int64)
    n_s = pop.cond.shape[1]
    for k in np.unique(f):
        rows = f == k
        # side="right" counts cum <= u, the same rule as inverse_cdf
        cum = np.cumsum(pop.cond[k])
        s[rows] = np.minimum(np.searchsorted(cum, u_strat[rows], side="right"), n_s - 1)
    return f, s


def sample_gamma_n(rho: SuggestionAtoms, N: int, rng: np.random.Generator,
                   spec: GameSpec | None = None, pop: Population | None = None) -> Assignment:
    """Draw a flow atom, then N i.i.d. strategies from the conditional law given it."""
    if N < 1:
        raise InputError(f"N must be positive, got {N}")
    if pop is None:
        if spec is None:
            r2 = check_r2(rho)
            if not r2.passed or not validate_r1(rho).passed:
                raise InputError("suggestion fails the structure checks")
            pop = _bare_population(rho)
        else:
            pop = population(spec, rho)
    f, s = assign(pop, rng.random(1), rng.random((1, N)))
    fi, si = int(f[0]), tuple(int(v) for v in s[0])
    return Assignment(fi, si, pop.flows[fi], tuple(pop.strategies[k] for k in si))


def _bare_population(rho):
    strategies, flows = rho.strategies(), rho.flows()
    fw = np.array([float(rho.flow_mass(f)) for f in flows])
    cond = np.array([[float(rho.strategies_given(f).get(s, 0)) for s in strategies] for f in flows])
    return Population(None, rho, strategies, flows, flow_weights=fw / fw.sum(), cond=cond,
                      flow_weights_exact=[], cond_exact=[], tables=None, flow_array=None, m0=None)


# ------------------------------------------------------------------ deviations

@dataclass
class RuleContext:
    """What player 1 knows at time t, batched over R runs.

    ``emp_hist[:, s]`` is the exclude-one empirical measure at time s and
    ``counts_hist`` the matching integer counts over the other N - 1 players.
    """

    spec: GameSpec
    t: int
    suggested: np.ndarray  # (R,) strategy index
    suggested_action: np.ndarray  # (R,)
    own_hist: np.ndarray  # (R, t+1)
    emp_hist: np.ndarray  # (R, t+1, X)
    counts_hist: np.ndarray  # (R, t+1, X)
    n_others: int
    u: np.ndarray  # (R,) private uniforms for randomized rules
    strategies: list = field(default_factory=list)


@dataclass
class Deviation:
    """Named progressive rule for player 1: ``fn(ctx) -> (R,)`` action indices."""

    name: str
    fn: Callable | None = None
    randomized: bool = False

    @property
    def is_identity(self) -> bool:
        return self.fn is None

    def __call__(self, ctx: RuleContext) -> np.ndarray:
        if self.fn is None:
            return ctx.suggested_action
        return np.asarray(self.fn(ctx), dtype=np.int64)


IDENTITY = Deviation("identity")


def constant_rule(a: int, label=None) -> Deviation:
    return Deviation(f"const[{label if label is not None else a}]",
                     lambda ctx: np.full(ctx.suggested.shape, a, dtype=np.int64))


def flip_rule(n_actions: int) -> Deviation:
    return Deviation("flip", lambda ctx: (ctx.suggested_action + 1) % n_actions)


def _signed_mean(ctx: RuleContext) -> np.ndarray:
    """x * M(empirical measure) at the current time, with the game's state values."""
    vals = np.asarray(ctx.spec.state_values, dtype=float)
    mean = ctx.emp_hist[:, -1, :] @ vals
    return vals[ctx.own_hist[:, -1]] * mean


def myopic_rule() -> Deviation:
    """One-step lookahead treating the current empirical measure as frozen."""

    def fn(ctx):
        spec, t = ctx.spec, ctx.t
        x, m = ctx.own_hist[:, -1], ctx.emp_hist[:, -1, :]
        scores = []
        ys = np.arange(spec.n_states)
        term = np.stack([terminal_cost_vec(spec, np.full(x.shape, y), m) for y in ys], axis=-1)
        for a in range(spec.n_actions):
            aa = np.full(x.shape, a)
            k = kernel_probs_vec(spec, t, x, m, aa)
            scores.append(running_cost_vec(spec, t, x, m, aa) + np.sum(k * term, axis=-1))
        return np.argmin(np.stack(scores, axis=-1), axis=-1)

    return Deviation("myopic", fn)


def threshold_rule(theta, kind: str = "downgrade", last_only: bool = False,
                   label: str | None = None) -> Deviation:
    """Follow the suggestion but react to x * M(empirical) at decision times.

    ``downgrade``: a suggested non-zero action becomes action 0 when the
    signal is below theta. ``upgrade``: a suggested action 0 becomes the
    top action when the signal is at least theta. ``last_only`` restricts
    the switch to the last decision time.
    """
    if kind not in ("downgrade", "upgrade"):
        raise InputError(f"unknown threshold rule kind {kind!r}")
    theta = float(theta)

    def fn(ctx):
        sugg = ctx.suggested_action
        if last_only and ctx.t != ctx.spec.horizon - 1:
            return sugg
        signal = _signed_mean(ctx)
        if kind == "downgrade":
            return np.where((sugg != 0) & (signal < theta), 0, sugg)
        top = ctx.spec.n_actions - 1
        return np.where((sugg == 0) & (signal >= theta), top, sugg)

    where = "@last" if last_only else ""
    return Deviation(f"{kind}{where}[{label or theta}]", fn)


THRESHOLDS = (("0", 0.0), ("1/4", 0.25), ("-1/4", -0.25), ("1/2", 0.5), ("-1/2", -0.5))


def default_family(spec: GameSpec) -> list:
    fam = [IDENTITY]
    fam += [constant_rule(a, spec.actions[a]) for a in range(spec.n_actions)]
    fam.append(flip_rule(spec.n_actions))
    fam.append(myopic_rule())
    for kind, last in (("downgrade", False), ("downgrade", True), ("upgrade", False)):
        fam += [threshold_rule(v, kind, last, s) for s, v in THRESHOLDS]
    return fam


class TableRule(Deviation):
    """Deterministic rule from {(strategy index, t, own history, count history): action};
    unlisted inputs follow the suggestion."""

    def __init__(self, table: dict, name: str = "table"):
        super().__init__(name, self._apply)
        self.table = table

    def _apply(self, ctx):
        out = ctx.suggested_action.copy()
        for r in range(len(out)):
            key = (int(ctx.suggested[r]), ctx.t, tuple(int(v) for v in ctx.own_hist[r]),
                   tuple(tuple(int(c) for c in row) for row in ctx.counts_hist[r]))
            a = self.table.get(key)
            if a is not None:
                out[r] = a
        return out


# ------------------------------------------------------------------ simulation

def block_size(N: int, n_states: int) -> int:
    return int(max(1, min(MAX_BLOCK, BLOCK_BUDGET // max(1, N * n_states))))


def draw_uniforms(g: np.random.Generator, R: int, N: int, T: int) -> dict:
    """All randomness of R runs, drawn in a fixed order.

    Column j of the per-player arrays belongs to player j, so permuting
    columns relabels players without changing any trajectory.
    """
    return {
        "flow": g.random(R),
        "strat": g.random((R, N)),
        "init": g.random((R, N)),
        "noise": g.random((R, T, N)),
        "dev": g.random((R, T)),
    }


def simulate_block(pop: Population, uniforms: dict, deviation: Deviation | None = None,
                   record: bool = False) -> dict:
    """Run R copies of the N-player system from explicit uniforms."""
    spec = pop.spec
    dev = deviation or IDENTITY
    T, nx = spec.horizon, spec.n_states
    R, N = uniforms["strat"].shape
    if N < 2:
        raise InputError("the N-player game needs N >= 2")
    f, s = assign(pop, uniforms["flow"], uniforms["strat"])
    x = inverse_cdf(pop.m0, uniforms["init"])
    eye = np.eye(nx, dtype=np.int64)
    cum_table = None if spec.kernel_table is None else np.cumsum(spec.kernel_table, axis=-1)
    cost = np.zeros(R)
    own_hist, emp_hist, cnt_hist, traj = [], [], [], []
    for t in range(T + 1):
        counts = np.stack([(x == k).sum(axis=1) for k in range(nx)], axis=1)  # (R, X)
        c1 = counts - eye[x[:, 0]]
        e1 = c1 / (N - 1)
        own_hist.append(x[:, 0])
        emp_hist.append(e1)
        cnt_hist.append(c1)
        if record:
            traj.append(x.copy())
        if t == T:
            break
        a = pop.tables[s, t, x]
        if not dev.is_identity:
            ctx = RuleContext(spec, t, s[:, 0], a[:, 0], np.stack(own_hist, axis=1),
                              np.stack(emp_hist, axis=1), np.stack(cnt_hist, axis=1),
                              N - 1, uniforms["dev"][:, t], pop.strategies)
            a1 = dev(ctx)
            if np.any((a1 < 0) | (a1 >= spec.n_actions)):
                raise InputError(f"deviation {dev.name} returned an invalid action at t={t}")
            a[:, 0] = a1
        cost += running_cost_vec(spec, t, x[:, 0], e1, a[:, 0])
        if cum_table is not None:
            cum = cum_table[t][x, a]
        else:
            emp_all = (counts[:, None, :] - eye[x]) / (N - 1)
            cum = np.cumsum(kernel_probs_vec(spec, t, x, emp_all, a), axis=-1)
        # same rule as inverse_cdf, on precomputed cumulative rows
        u = uniforms["noise"][:, t, :]
        nxt = (u >= cum[..., 0]).astype(np.int64)
        for k in range(1, nx - 1):
            nxt += u >= cum[..., k]
        x = nxt
    cost += terminal_cost_vec(spec, x[:, 0], emp_hist[-1])
    emp = np.stack(emp_hist, axis=1)  # (R, T+1, X)
    dist_T = 0.5 * np.abs(emp - pop.flow_array[f]).sum(axis=-1).sum(axis=-1)
    out = {"cost": cost, "flow": f, "strategies": s, "own": np.stack(own_hist, axis=1),
           "empirical": emp, "dist_T": dist_T}
    if record:
        out["trajectories"] = np.stack(traj, axis=1)  # (R, T+1, N)
    return out


@dataclass
class SimulationResult:
    N: int
    deviation: str
    estimate: Estimate
    dist_T: Estimate
    state_occupation: np.ndarray  # (T+1, X) mean law of player 1's state
    costs: np.ndarray = field(repr=False)


def simulate(spec: GameSpec, rho: SuggestionAtoms, N: int, deviation: Deviation | None = None,
             reps: int = 10_000, seed: int = 0, tag: str = "simulate", workers: int = 1,
             pop: Population | None = None) -> SimulationResult:
    """Monte Carlo estimate of player 1's expected cost in the N-player game."""
    if N < 2:
        raise InputError(f"N must be at least 2, got {N}")
    if reps < 2:
        raise InputError(f"reps must be at least 2, got {reps}")
    pop = pop or population(spec, rho)
    T = spec.horizon

    def run(bi, n):
        u = draw_uniforms(stream(seed, tag, N, bi), n, N, T)
        out = simulate_block(pop, u, deviation)
        return out["cost"], out["dist_T"], out["own"]

    parts = run_blocks(run, block_plan(reps, block_size(N, spec.n_states)), workers)
    costs = np.concatenate([p[0] for p in parts])
    dists = np.concatenate([p[1] for p in parts])
    own = np.concatenate([p[2] for p in parts])
    occ = np.stack([np.bincount(own[:, t], minlength=spec.n_states) / len(own) for t in range(T + 1)])
    return SimulationResult(N, (deviation or IDENTITY).name, Estimate.from_samples(costs),
                            Estimate.from_samples(dists), occ, costs)


# ------------------------------------------------------------------ exact small-N

def _exact_pop(spec, rho):
    pop = population(spec, rho)
    if not rho.exact:
        raise InputError("exact enumeration needs rational weights")
    return pop


def _emp_exact(counts: tuple, n: int, mode) -> FiniteDist:
    return FiniteDist(tuple(convert(Fraction(c, n), mode) for c in counts))


def _counts(states, nx, skip=None) -> tuple:
    c = [0] * nx
    for j, v in enumerate(states):
        if j != skip:
            c[v] += 1
    return tuple(c)


def _initial_particles(pop: Population, N: int) -> dict:
    """{(flow, strategies, states): probability} at time 0, exact."""
    spec = pop.spec
    out = {}
    m0 = spec.initial
    for fi, fw in enumerate(pop.flow_weights_exact):
        support = [k for k, c in enumerate(pop.cond_exact[fi]) if c > 0]
        for s in itertools.product(support, repeat=N):
            ps = fw
            for k in s:
                ps = ps * pop.cond_exact[fi][k]
            for x in itertools.product(range(spec.n_states), repeat=N):
                px = ps
                for v in x:
                    px = px * m0[v]
                if px > 0:
                    out[(fi, s, x)] = px
    return out


def _check_guard(spec, rho, N):
    terms = spec.n_states ** (N * (spec.horizon + 1)) * len(rho.joint())
    if terms > EXACT_GUARD:
        raise InputError(f"exact enumeration needs {terms} terms, above the guard {EXACT_GUARD}")


def _joint_next(spec, pop, t, x, actions, N):
    """Exact law of the next joint state; each player sees its exclude-one measure."""
    mode = spec.mode
    nx = spec.n_states
    rows = []
    for j in range(N):
        m = _emp_exact(_counts(x, nx, skip=j), N - 1, mode)
        p = transition(spec, t, x[j], m, actions[j])
        rows.append([(y, w) for y, w in enumerate(p) if w > 0])
    for combo in itertools.product(*rows):
        prob = combo[0][1]
        for _, w in combo[1:]:
            prob = prob * w
        yield tuple(y for y, _ in combo), prob


def exact_j1n(spec: GameSpec, rho: SuggestionAtoms, N: int, deviation: Deviation | None = None):
    """Player 1's exact expected cost, by forward recursion over joint histories."""
    if N < 2:
        raise InputError(f"N must be at least 2, got {N}")
    _check_guard(spec, rho, N)
    dev = deviation or IDENTITY
    if dev.randomized:
        raise InputError("exact enumeration supports deterministic rules only")
    pop = _exact_pop(spec, rho)
    T, nx, mode = spec.horizon, spec.n_states, spec.mode
    # layer key: (flow, strategies, states, own history, count history)
    layer = defaultdict(lambda: 0)
    for (fi, s, x), p in _initial_particles(pop, N).items():
        layer[(fi, s, x, (x[0],), (_counts(x, nx, skip=0),))] += p
    cost = 0
    for t in range(T):
        keys = list(layer)
        sugg = np.array([pop.tables[k[1][0], t, k[2][0]] for k in keys], dtype=np.int64)
        if dev.is_identity:
            a1 = sugg
        else:
            cnt = np.array([k[4] for k in keys], dtype=np.int64)
            ctx = RuleContext(spec, t, np.array([k[1][0] for k in keys]), sugg,
                              np.array([k[3] for k in keys], dtype=np.int64),
                              cnt / (N - 1), cnt, N - 1, np.zeros(len(keys)), pop.strategies)
            a1 = dev(ctx)
        nxt = defaultdict(lambda: 0)
        for key, a in zip(keys, a1):
            fi, s, x, own, cnts = key
            p = layer[key]
            acts = (int(a),) + tuple(int(pop.tables[s[j], t, x[j]]) for j in range(1, N))
            cost += p * spec.running(t, x[0], _emp_exact(cnts[-1], N - 1, mode), acts[0])
            for y, py in _joint_next(spec, pop, t, x, acts, N):
                nxt[(fi, s, y, own + (y[0],), cnts + (_counts(y, nx, skip=0),))] += p * py
        layer = nxt
    for (fi, s, x, own, cnts), p in layer.items():
        cost += p * spec.terminal(x[0], _emp_exact(cnts[-1], N - 1, mode))
    return cost


def best_response_bruteforce(spec: GameSpec, rho: SuggestionAtoms, N: int):
    """Exact minimum of player 1's cost over deterministic progressive deviations.

    Player 1's information set is (suggested strategy, own states, observed
    counts). With perfect recall each information set has a single parent, so
    minimizing action by action backwards over the tree of information sets
    (carrying unnormalized beliefs) equals minimizing over whole rules.
    Returns (value, TableRule witness).
    """
    if N > 3 or spec.horizon > 2:
        raise InputError(f"best response enumeration is limited to N <= 3 and T <= 2 (got N={N}, T={spec.horizon})")
    if N < 2:
        raise InputError(f"N must be at least 2, got {N}")
    _check_guard(spec, rho, N)
    pop = _exact_pop(spec, rho)
    T, nx, mode = spec.horizon, spec.n_states, spec.mode

    def solve(t, info, particles):
        s1, own, cnts = info
        m1 = _emp_exact(cnts[-1], N - 1, mode)
        if t == T:
            return sum(p for p in particles.values()) * spec.terminal(own[-1], m1), {}
        best = None
        for a in range(spec.n_actions):
            val = sum(particles.values()) * spec.running(t, own[-1], m1, a)
            children = defaultdict(lambda: defaultdict(lambda: 0))
            for (fi, s, x), p in particles.items():
                acts = (a,) + tuple(int(pop.tables[s[j], t, x[j]]) for j in range(1, N))
                for y, py in _joint_next(spec, pop, t, x, acts, N):
                    child = (s1, own + (y[0],), cnts + (_counts(y, nx, skip=0),))
                    children[child][(fi, s, y)] += p * py
            table = {}
            for child in sorted(children):
                v, tb = solve(t + 1, child, children[child])
                val += v
                table.update(tb)
            if best is None or val < best[0]:
                best = (val, a, table)
        table = dict(best[2])
        table[(s1, t, own, cnts)] = best[1]
        return best[0], table

    roots = defaultdict(dict)
    for (fi, s, x), p in _initial_particles(pop, N).items():
        roots[(s[0], (x[0],), (_counts(x, nx, skip=0),))][(fi, s, x)] = p
    total, table = 0, {}
    for info in sorted(roots):
        v, tb = solve(0, info, roots[info])
        total += v
        table.update(tb)
    return total, TableRule(table, name=f"best-response[N={N}]")


def information_sets(spec: GameSpec, rho: SuggestionAtoms, N: int) -> list:
    """Every (strategy index, t, own history, count history) player 1 can reach
    under some deterministic rule; the domain of a TableRule."""
    pop = _exact_pop(spec, rho)
    T, nx = spec.horizon, spec.n_states
    frontier = set()
    for (fi, s, x), p in _initial_particles(pop, N).items():
        frontier.add((fi, s, x, (x[0],), (_counts(x, nx, skip=0),)))
    out = set()
    for t in range(T):
        nxt = set()
        for fi, s, x, own, cnts in frontier:
            out.add((s[0], t, own, cnts))
            for a in range(spec.n_actions):
                acts = (a,) + tuple(int(pop.tables[s[j], t, x[j]]) for j in range(1, N))
                for y, _ in _joint_next(spec, pop, t, x, acts, N):
                    nxt.add((fi, s, y, own + (y[0],), cnts + (_counts(y, nx, skip=0),)))
        frontier = nxt
    return sorted(out)


# ------------------------------------------------------------------ epsilon probe

EPSILON_COLUMNS = ("N", "deviation_name", "reps", "estimate", "stderr", "improvement", "improvement_stderr")


@dataclass
class EpsilonReport:
    rows: list
    observed: dict  # N -> {"improvement", "stderr", "deviation"}


def epsilon_report(spec: GameSpec, rho: SuggestionAtoms, N_list: Sequence[int], family: Sequence[Deviation],
                   reps: int, seed: int, tag: str = "epsilon", workers: int = 1) -> EpsilonReport:
    """Per N, the paired improvement J(identity) - J(rule) for each rule.

    Every rule sees the same uniforms as the identity run. The largest
    improvement, clipped at zero, is a lower bound on the equilibrium defect.
    """
    family = list(family)
    if not family:
        raise InputError("deviation family is empty")
    if reps < 2:
        raise InputError("reps must be at least 2")
    pop = population(spec, rho)
    T = spec.horizon
    rows, observed = [], {}
    for N in N_list:
        if N < 2:
            raise InputError(f"N must be at least 2, got {N}")

        def run(bi, n, N=N):
            u = draw_uniforms(stream(seed, tag, N, bi), n, N, T)
            base = simulate_block(pop, u)["cost"]
            outs = []
            for dev in family:
                c = base if dev.is_identity else simulate_block(pop, u, dev)["cost"]
                outs.append(c)
            return base, outs

        parts = run_blocks(run, block_plan(reps, block_size(N, spec.n_states)), workers)
        base = np.concatenate([p[0] for p in parts])
        best = {"improvement": 0.0, "stderr": 0.0, "deviation": "identity"}
        for k, dev in enumerate(family):
            c = np.concatenate([p[1][k] for p in parts])
            est = Estimate.from_samples(c)
            diff = Estimate.from_samples(base - c)
            rows.append({"N": N, "deviation_name": dev.name, "reps": reps, "estimate": est.mean,
                         "stderr": est.stderr, "improvement": diff.mean, "improvement_stderr": diff.stderr})
            if diff.mean > best["improvement"]:
                best = {"improvement": diff.mean, "stderr": diff.stderr, "deviation": dev.name}
        observed[N] = best
    return EpsilonReport(rows, observed)


def exact_epsilon(spec: GameSpec, rho: SuggestionAtoms, N: int):
    """Exact defect at small N: J(identity) minus the exact best response."""
    best, rule = best_response_bruteforce(spec, rho, N)
    return exact_j1n(spec, rho, N) - best, rule


__all__ = ["Population", "population", "Assignment", "assign", "sample_gamma_n", "RuleContext", "Deviation",
           "IDENTITY", "constant_rule", "flip_rule", "myopic_rule", "threshold_rule", "THRESHOLDS",
           "default_family", "TableRule", "draw_uniforms", "simulate_block", "simulate", "SimulationResult",
           "exact_j1n", "best_response_bruteforce", "information_sets", "epsilon_report", "EpsilonReport",
           "exact_epsilon", "EPSILON_COLUMNS"]
