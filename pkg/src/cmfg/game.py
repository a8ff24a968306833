"""Game primitives: horizon, spaces, initial law, transition kernel, costs.

The kernel is the primary object. The noise representation (a uniform draw
mapped through an inverse CDF in the fixed state order) is derived from it,
so equal uniforms give the monotone coupling across measure arguments.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .measures import FiniteDist, dist
from .numeric import CMP_TOL, FLOAT, RATIONAL, InputError, convert, fmt
from .reports import CheckReport

Kernel = Callable[[int, int, FiniteDist, int], Sequence]
Running = Callable[[int, int, FiniteDist, int], object]
Terminal = Callable[[int, FiniteDist], object]


@dataclass(frozen=True)
class GameSpec:
    """A finite-horizon, finite-state, finite-action mean field game.

    ``kernel(t, x, m, a)`` returns next-state probabilities, ``running(t, x, m, a)``
    and ``terminal(x, m)`` the costs; states and actions are passed as indices.

    Optional vectorized hooks are used by the Monte Carlo paths only:
    ``kernel_table`` (float array of shape (T, |X|, |A|, |X|)) when the kernel
    ignores the measure, and ``running_vec(t, x, m, a)`` / ``terminal_vec(x, m)``
    taking index arrays and float measure arrays with a trailing |X| axis.
    """

    horizon: int
    states: tuple
    actions: tuple
    initial: FiniteDist
    kernel: Kernel
    running: Running
    terminal: Terminal
    state_values: tuple | None = None
    kernel_table: np.ndarray | None = field(default=None, compare=False, repr=False)
    kernel_vec: Callable | None = field(default=None, compare=False, repr=False)
    running_vec: Callable | None = field(default=None, compare=False, repr=False)
    terminal_vec: Callable | None = field(default=None, compare=False, repr=False)
    mode: str = RATIONAL
    name: str = "game"

    def __post_init__(self):
        if self.horizon < 1:
            raise InputError(f"horizon must be positive, got {self.horizon}")
        if not self.states or not self.actions:
            raise InputError("state and action sets must be non-empty")
        if self.initial.size != len(self.states):
            raise InputError("initial law does not match the state space")
        if self.state_values is None:
            vals = []
            for i, s in enumerate(self.states):
                try:
                    vals.append(float(s))
                except (TypeError, ValueError):
                    vals.append(float(i))
            object.__setattr__(self, "state_values", tuple(vals))

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @property
    def m_independent(self) -> bool:
        return self.kernel_table is not None


def transition(spec: GameSpec, t: int, x: int, m: FiniteDist, a: int) -> FiniteDist:
    """Law of the next state from (t, x) under action a against population m."""
    if not 0 <= t < spec.horizon:
        raise InputError(f"time {t} outside [0, {spec.horizon - 1}]")
    if not 0 <= x < spec.n_states:
        raise InputError(f"state index {x} out of range")
    if not 0 <= a < spec.n_actions:
        raise InputError(f"action index {a} out of range")
    p = spec.kernel(t, x, m, a)
    return p if isinstance(p, FiniteDist) else FiniteDist(tuple(p))


def noise_form(spec: GameSpec, t: int, x: int, m: FiniteDist, a: int) -> list[tuple]:
    """Partition of [0, 1] into (lo, hi, next_state) intervals in state order."""
    p = transition(spec, t, x, m, a)
    out, lo = [], 0 * p[0]
    for y, w in enumerate(p):
        out.append((lo, lo + w, y))
        lo = lo + w
    return out


def inverse_cdf(probs, u):
    """First index k with u < P(Y <= k); intervals are [lo, hi)."""
    cum = np.cumsum(np.asarray(probs, dtype=float), axis=-1)
    k = (np.asarray(u)[..., None] >= cum).sum(axis=-1)
    # guard against cum[-1] < 1 from rounding
    return np.minimum(k, cum.shape[-1] - 1)


def sample_next(spec: GameSpec, rng, t: int, x: int, m: FiniteDist, a: int) -> int:
    """Draw the next state; ``rng`` is a Generator or a fixed uniform in [0, 1)."""
    u = rng.random() if isinstance(rng, np.random.Generator) else float(rng)
    p = transition(spec, t, x, m, a)
    return int(inverse_cdf([float(w) for w in p], u))


def kernel_probs_vec(spec: GameSpec, t: int, x, m, a) -> np.ndarray:
    """Float next-state probabilities for index arrays x, a and measure array m."""
    if spec.kernel_table is not None:
        return spec.kernel_table[t, x, a]
    if spec.kernel_vec is not None:
        return spec.kernel_vec(t, x, m, a)
    x, a = np.broadcast_arrays(np.asarray(x), np.asarray(a))
    m = np.broadcast_to(np.asarray(m, dtype=float), x.shape + (spec.n_states,))
    out = np.empty(x.shape + (spec.n_states,))
    for idx in np.ndindex(x.shape):
        fd = FiniteDist(tuple(float(w) for w in m[idx]))
        out[idx] = [float(w) for w in transition(spec, t, int(x[idx]), fd, int(a[idx]))]
    return out


def running_cost_vec(spec: GameSpec, t: int, x, m, a) -> np.ndarray:
    if spec.running_vec is not None:
        return np.asarray(spec.running_vec(t, x, m, a), dtype=float)
    x, a = np.broadcast_arrays(np.asarray(x), np.asarray(a))
    m = np.broadcast_to(np.asarray(m, dtype=float), x.shape + (spec.n_states,))
    out = np.empty(x.shape)
    for idx in np.ndindex(x.shape):
        fd = FiniteDist(tuple(float(w) for w in m[idx]))
        out[idx] = float(spec.running(t, int(x[idx]), fd, int(a[idx])))
    return out


def terminal_cost_vec(spec: GameSpec, x, m) -> np.ndarray:
    if spec.terminal_vec is not None:
        return np.asarray(spec.terminal_vec(x, m), dtype=float)
    x = np.asarray(x)
    m = np.broadcast_to(np.asarray(m, dtype=float), x.shape + (spec.n_states,))
    out = np.empty(x.shape)
    for idx in np.ndindex(x.shape):
        fd = FiniteDist(tuple(float(w) for w in m[idx]))
        out[idx] = float(spec.terminal(int(x[idx]), fd))
    return out


def check_nondegeneracy(spec: GameSpec, m_list: Sequence[FiniteDist]) -> CheckReport:
    """Every kernel entry strictly positive for all (t, x, a) and listed m."""
    rep = CheckReport("nondegeneracy", True)
    if not m_list:
        rep.notes.append("warning: empty measure list, passes vacuously")
        return rep
    min_entry = None
    for m in m_list:
        for t, x, a in itertools.product(range(spec.horizon), range(spec.n_states), range(spec.n_actions)):
            p = transition(spec, t, x, m, a)
            for y, w in enumerate(p):
                if min_entry is None or w < min_entry:
                    min_entry = w
                if w <= 0:
                    rep.passed = False
                    rep.violations.append({"t": t, "x": spec.states[x], "m": m.label(),
                                           "action": spec.actions[a], "y": spec.states[y], "p": w})
    rep.details["min_entry"] = min_entry
    rep.details["measures_checked"] = len(m_list)
    return rep


def _random_measure(rng: np.random.Generator, n: int) -> FiniteDist:
    w = rng.dirichlet(np.ones(n))
    w = w / w.sum()
    return FiniteDist(tuple(float(v) for v in w[:-1]) + (1.0 - float(w[:-1].sum()),))


def lipschitz_spotcheck(spec: GameSpec, samples: int, rng: np.random.Generator) -> CheckReport:
    """Empirical lower bound on the Lipschitz constant of f, F in the measure argument.

    Diagnostic only; the ratios are maxima over ``samples`` random pairs.
    """
    if samples < 2:
        raise InputError("need at least 2 samples")
    fmax, Fmax = 0.0, 0.0
    pool = [_random_measure(rng, spec.n_states) for _ in range(samples)]
    for m, mt in zip(pool[:-1], pool[1:]):
        d = float(dist(m, mt))
        if d <= 1e-15:
            continue
        for t, x, a in itertools.product(range(spec.horizon), range(spec.n_states), range(spec.n_actions)):
            df = abs(float(spec.running(t, x, m, a)) - float(spec.running(t, x, mt, a)))
            fmax = max(fmax, df / d)
        for x in range(spec.n_states):
            dF = abs(float(spec.terminal(x, m)) - float(spec.terminal(x, mt)))
            Fmax = max(Fmax, dF / d)
    return CheckReport("lipschitz spot-check", True,
                       {"running_ratio": fmax, "terminal_ratio": Fmax, "lower_bound_L": max(fmax, Fmax),
                        "pairs": samples - 1})


# ---------------------------------------------------------------------------
# tabular games (config-driven)


@dataclass(frozen=True)
class LinearCosts:
    """Costs affine in the measure argument.

    running(t, x, m, a) = base[t][x][a] + sum_y slope[t][x][a][y] m(y)
    terminal(x, m) = tbase[x] + sum_y tslope[x][y] m(y)
    """

    base: tuple
    slope: tuple | None
    tbase: tuple
    tslope: tuple | None

    def running(self, t, x, m, a):
        v = self.base[t][x][a]
        if self.slope is not None:
            v = v + sum(c * w for c, w in zip(self.slope[t][x][a], m.weights))
        return v

    def terminal(self, x, m):
        v = self.tbase[x]
        if self.tslope is not None:
            v = v + sum(c * w for c, w in zip(self.tslope[x], m.weights))
        return v

    def running_vec(self, t, x, m, a):
        base = np.asarray(self.base, dtype=float)[t]
        out = base[x, a]
        if self.slope is not None:
            slope = np.asarray(self.slope, dtype=float)[t][x, a]
            out = out + np.sum(slope * np.asarray(m, dtype=float), axis=-1)
        return out

    def terminal_vec(self, x, m):
        out = np.asarray(self.tbase, dtype=float)[x]
        if self.tslope is not None:
            slope = np.asarray(self.tslope, dtype=float)[x]
            out = out + np.sum(slope * np.asarray(m, dtype=float), axis=-1)
        return out


def _nested(values, mode):
    if isinstance(values, (list, tuple)):
        return tuple(_nested(v, mode) for v in values)
    return convert(values, mode)


def _check_shape(arr, shape, what):
    got = np.shape(np.asarray(arr, dtype=object))
    if got != shape:
        raise InputError(f"{what} has shape {got}, expected {shape}")


def tabular_game(horizon, states, actions, initial, kernel_table, costs: LinearCosts,
                 mode: str = RATIONAL, state_values=None, name: str = "tabular") -> GameSpec:
    """Game with a measure-independent dense kernel tensor and affine costs."""
    T, nx, na = horizon, len(states), len(actions)
    kt = _nested(kernel_table, mode)
    _check_shape(kt, (T, nx, na, nx), "kernel table")
    for t, x, a in itertools.product(range(T), range(nx), range(na)):
        try:
            FiniteDist(kt[t][x][a])
        except InputError as exc:
            raise InputError(str(exc), f"kernel[{t}][{x}][{a}]") from None
    _check_cost_shapes(costs, T, nx, na)

    def kernel(t, x, m, a):
        return kt[t][x][a]

    return GameSpec(T, tuple(states), tuple(actions), initial, kernel, costs.running, costs.terminal,
                    state_values=state_values,
                    kernel_table=np.array(kt, dtype=float), running_vec=costs.running_vec,
                    terminal_vec=costs.terminal_vec, mode=mode, name=name)


def atom_kernel_game(horizon, states, actions, initial, atoms, costs: LinearCosts,
                     mode: str = RATIONAL, state_values=None, name: str = "tabular-atoms") -> GameSpec:
    """Game whose kernel depends on m only through a finite list of measure atoms.

    ``atoms`` is a list of (FiniteDist, table[T][X][A][X]). Querying a measure
    outside the list is an input error, so these games suit the mean field
    verification paths and not N-player simulation.
    """
    T, nx, na = horizon, len(states), len(actions)
    lookup = []
    for i, (m, table) in enumerate(atoms):
        kt = _nested(table, mode)
        _check_shape(kt, (T, nx, na, nx), f"kernel atom {i}")
        lookup.append((m, kt))
    _check_cost_shapes(costs, T, nx, na)

    def kernel(t, x, m, a):
        for atom, kt in lookup:
            if atom == m or (mode == FLOAT and float(dist(atom, m)) <= CMP_TOL):
                return kt[t][x][a]
        raise InputError(f"measure {m.label()} is not one of the kernel atoms")

    return GameSpec(T, tuple(states), tuple(actions), initial, kernel, costs.running, costs.terminal,
                    state_values=state_values, running_vec=costs.running_vec,
                    terminal_vec=costs.terminal_vec, mode=mode, name=name)


def _check_cost_shapes(costs: LinearCosts, T, nx, na):
    _check_shape(costs.base, (T, nx, na), "running base")
    if costs.slope is not None:
        _check_shape(costs.slope, (T, nx, na, nx), "running slope")
    _check_shape(costs.tbase, (nx,), "terminal base")
    if costs.tslope is not None:
        _check_shape(costs.tslope, (nx, nx), "terminal slope")


def linear_costs(base, slope, tbase, tslope, mode: str = RATIONAL) -> LinearCosts:
    return LinearCosts(_nested(base, mode), None if slope is None else _nested(slope, mode),
                       _nested(tbase, mode), None if tslope is None else _nested(tslope, mode))


def describe_kernel(spec: GameSpec, m: FiniteDist) -> list[dict]:
    """Flat listing of kernel rows at measure m (for reports)."""
    rows = []
    for t, x, a in itertools.product(range(spec.horizon), range(spec.n_states), range(spec.n_actions)):
        rows.append({"t": t, "x": spec.states[x], "action": spec.actions[a],
                     "p": [fmt(w) for w in transition(spec, t, x, m, a)]})
    return rows


__all__ = [
    "GameSpec", "LinearCosts", "transition", "noise_form", "sample_next", "inverse_cdf",
    "kernel_probs_vec", "running_cost_vec", "terminal_cost_vec", "check_nondegeneracy",
    "lipschitz_spotcheck", "tabular_game", "atom_kernel_game", "linear_costs",
]
