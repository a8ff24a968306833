"""Correlated suggestions as finite atom lists, plus the finite-support and conditional-independence checks."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from ..game import GameSpec
from ..measures import MeasureFlow
from ..numeric import NORM_TOL, InputError, fmt, is_exact
from ..reports import CheckReport


@dataclass(frozen=True)
class RestrictedStrategy:
    """Markov feedback table: ``table[t][x]`` is the action index at (t, x)."""

    table: tuple
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(int(a) for a in row) for row in self.table))

    def __call__(self, t: int, x: int) -> int:
        return self.table[t][x]

    @property
    def horizon(self) -> int:
        return len(self.table)

    def head(self, t: int) -> tuple:
        """Rows 0..t, i.e. the strategy restricted to times up to t."""
        return self.table[: t + 1]

    def label(self) -> str:
        return self.name or str([list(r) for r in self.table])


@dataclass(frozen=True)
class Atom:
    strategy: RestrictedStrategy
    flow: MeasureFlow
    weight: object


class SuggestionAtoms:
    """Finite-support law over (restricted strategy, measure flow) pairs.

    Duplicate (strategy, flow) pairs are allowed in the input and merged by
    adding weights wherever probabilities are computed.
    """

    def __init__(self, atoms: Iterable):
        self.atoms = tuple(a if isinstance(a, Atom) else Atom(*a) for a in atoms)
        if not self.atoms:
            raise InputError("a suggestion needs at least one atom")
        joint = defaultdict(int)
        for a in self.atoms:
            joint[(a.strategy, a.flow)] += a.weight
        self._joint = dict(joint)
        self._strategies = list(dict.fromkeys(a.strategy for a in self.atoms))
        self._flows = list(dict.fromkeys(a.flow for a in self.atoms))

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    @property
    def exact(self) -> bool:
        return is_exact(a.weight for a in self.atoms)

    def strategies(self) -> list[RestrictedStrategy]:
        return [s for s in self._strategies if self.strategy_mass(s) > 0]

    def flows(self) -> list[MeasureFlow]:
        return [m for m in self._flows if self.flow_mass(m) > 0]

    def joint(self) -> dict:
        return dict(self._joint)

    def strategy_mass(self, phi: RestrictedStrategy):
        return sum((w for (s, _), w in self._joint.items() if s == phi), start=0 * self.atoms[0].weight)

    def flow_mass(self, m: MeasureFlow):
        return sum((w for (_, f), w in self._joint.items() if f == m), start=0 * self.atoms[0].weight)

    def flows_given(self, phi: RestrictedStrategy) -> dict:
        """P(mu = m | Phi = phi) over the conditional support."""
        total = self.strategy_mass(phi)
        if total <= 0:
            raise InputError(f"strategy {phi.label()} has zero mass")
        out = {}
        for (s, f), w in self._joint.items():
            if s == phi and w > 0:
                out[f] = out.get(f, 0) + w / total
        return out

    def strategies_given(self, m: MeasureFlow) -> dict:
        """rho_1(. | m): P(Phi = phi | mu = m)."""
        total = self.flow_mass(m)
        if total <= 0:
            raise InputError(f"flow {m.label()} has zero mass")
        out = {}
        for (s, f), w in self._joint.items():
            if f == m and w > 0:
                out[s] = out.get(s, 0) + w / total
        return out

    def find_strategy(self, name: str) -> RestrictedStrategy:
        for s in self._strategies:
            if s.name == name:
                return s
        raise InputError(f"no strategy named {name!r}")

    def find_flow(self, name: str) -> MeasureFlow:
        for f in self._flows:
            if f.name == name:
                return f
        raise InputError(f"no flow named {name!r}")


def validate_r1(rho: SuggestionAtoms, spec: GameSpec | None = None) -> CheckReport:
    """Finite support with positive, normalized weights.

    With ``spec`` given, also checks table shapes and that each flow starts
    at the initial law. Reports |P_phi| per strategy.
    """
    rep = CheckReport("finite support", True)
    total = 0
    for i, a in enumerate(rho.atoms):
        total += a.weight
        if not a.weight > 0:
            rep.passed = False
            rep.violations.append({"atom": i, "problem": "non-positive weight", "weight": a.weight})
        if spec is not None:
            problems = _shape_problems(a, spec)
            for p in problems:
                rep.passed = False
                rep.violations.append({"atom": i, "problem": p})
    if rho.exact:
        normalized = total == 1
    else:
        normalized = abs(float(total) - 1.0) <= NORM_TOL
    if not normalized:
        rep.passed = False
        rep.violations.append({"problem": "weights do not sum to 1", "sum": total})
    if rep.passed:
        rep.details["support_sizes"] = {phi.label(): len(rho.flows_given(phi)) for phi in rho.strategies()}
    rep.details["atoms"] = len(rho.atoms)
    return rep


def _shape_problems(atom: Atom, spec: GameSpec) -> list[str]:
    out = []
    tab = atom.strategy.table
    if len(tab) != spec.horizon or any(len(r) != spec.n_states for r in tab):
        out.append(f"strategy table is not {spec.horizon}x{spec.n_states}")
    elif any(not 0 <= a < spec.n_actions for r in tab for a in r):
        out.append("strategy uses an action index out of range")
    if len(atom.flow) != spec.horizon + 1:
        out.append(f"flow has {len(atom.flow)} entries, expected {spec.horizon + 1}")
    elif atom.flow[0].size != spec.n_states:
        out.append("flow support does not match the state space")
    elif atom.flow[0] != spec.initial and not (
            not atom.flow[0].exact and max(abs(float(p) - float(q)) for p, q in zip(atom.flow[0], spec.initial)) <= NORM_TOL):
        out.append("flow does not start at the initial law")
    return out


def check_r2(rho: SuggestionAtoms, horizon: int | None = None) -> CheckReport:
    """Conditional independence of Phi^{(t)} and mu given mu^{(t+1)}, all t < T.

    Tests P(Phi^{(t)}=a, mu=m | p) == P(Phi^{(t)}=a | p) P(mu=m | p) for every
    prefix p = mu^{(t+1)} of positive mass and every pair (a, m) in the
    conditional support product, exactly in rational mode.
    """
    T = horizon if horizon is not None else rho.atoms[0].strategy.horizon
    rep = CheckReport("conditional independence", True)
    exact = rho.exact
    joint = rho.joint()
    checked = 0
    for t in range(T):
        by_prefix = defaultdict(lambda: defaultdict(int))
        for (s, f), w in joint.items():
            if w > 0:
                by_prefix[f.prefix(t + 1)][(s.head(t), f)] += w
            elif w == 0:
                rep.notes.append(f"t={t}: skipped zero-mass atom {s.label()}")
        for prefix, cell in by_prefix.items():
            pmass = sum(cell.values())
            if pmass <= 0:
                rep.notes.append(f"t={t}: skipped zero-probability prefix")
                continue
            heads = defaultdict(int)
            flows = defaultdict(int)
            for (h, f), w in cell.items():
                heads[h] += w
                flows[f] += w
            for h, wh in heads.items():
                for f, wf in flows.items():
                    lhs = cell.get((h, f), 0) / pmass
                    rhs = (wh / pmass) * (wf / pmass)
                    checked += 1
                    ok = lhs == rhs if exact else abs(float(lhs) - float(rhs)) <= 1e-9
                    if not ok:
                        rep.passed = False
                        rep.violations.append({"t": t, "strategy_head": [list(r) for r in h],
                                               "flow": f.label(), "joint": fmt(lhs), "product": fmt(rhs)})
    rep.details["factorizations_checked"] = checked
    return rep
