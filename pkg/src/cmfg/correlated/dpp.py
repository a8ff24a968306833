"""Conditional dynamic programming over (state history, flow prefix) nodes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..game import GameSpec, transition
from ..numeric import CMP_TOL, InputError, close
from ..reports import CheckReport
from .chain import ConditionalChain, DeviationMap, conditional_chain, describe_prefix, state_chain
from .suggestion import RestrictedStrategy, SuggestionAtoms


@dataclass
class ValueTable:
    """V_phi on every node (t, x^{(t)}, chain node) of the joint history tree."""

    phi: RestrictedStrategy
    chain: ConditionalChain
    horizon: int
    values: dict = field(default_factory=dict)
    q: dict = field(default_factory=dict)  # interior node -> per-action values
    argmin: dict = field(default_factory=dict)
    tie: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def value(self, t: int, xhist, prefix) -> object:
        node = self.chain.node(t, tuple(prefix))
        return self.values[(t, tuple(xhist), node.id)]

    def best_action(self, t: int, xhist, prefix) -> int:
        node = self.chain.node(t, tuple(prefix))
        return self.argmin[(t, tuple(xhist), node.id)]

    def initial_value(self, m0):
        """E[V_phi(0, X_0, mu_0)] with X_0 ~ m0 independent of the flow."""
        total = 0 * m0[0]
        for rid in self.chain.roots:
            root = self.chain.nodes[rid]
            for x, w in enumerate(m0):
                if w > 0:
                    total += w * root.prob * self.values[(0, (x,), rid)]
        return total

    def as_deviation(self) -> DeviationMap:
        """The argmin table as a deviation (identity off this branch)."""
        table = {}
        for (t, xh, nid), a in self.argmin.items():
            table[(self.phi, t, xh, self.chain.nodes[nid].prefix)] = a
        return DeviationMap.from_table(table, name=f"dpp-argmin[{self.phi.label()}]", fallback_identity=True)

    def verify(self, spec: GameSpec, tol: float = CMP_TOL) -> list:
        """Recompute every interior value from its stored children; return mismatches."""
        bad = []
        for key, v in self.values.items():
            t, xh, nid = key
            node = self.chain.nodes[nid]
            if t == self.horizon:
                want = spec.terminal(xh[-1], node.prefix[-1])
            else:
                want = min(_q_value(spec, self, t, xh, node, a) for a in range(spec.n_actions))
            if not close(v, want, tol):
                bad.append((key, v, want))
        return bad


def _q_value(spec, vt, t, xh, node, a):
    m_t = node.prefix[-1]
    out = spec.running(t, xh[-1], m_t, a)
    for y, py in enumerate(transition(spec, t, xh[-1], m_t, a)):
        if py == 0:
            continue
        for cid, pc in node.children.items():
            out += py * pc * vt.values[(t + 1, xh + (y,), cid)]
    return out


def dpp_solve(spec: GameSpec, rho: SuggestionAtoms, phi: RestrictedStrategy,
              tol: float = CMP_TOL) -> ValueTable:
    """Backward induction for the optimal deviation value given suggestion phi.

    Ties between actions go to the lowest index and are flagged.
    """
    chain = conditional_chain(rho, phi)
    T = spec.horizon
    vt = ValueTable(phi, chain, T)
    layers = {t: chain.layer(t) for t in range(T + 1)}
    for node in layers[T]:
        for xh in itertools.product(range(spec.n_states), repeat=T + 1):
            vt.values[(T, xh, node.id)] = spec.terminal(xh[-1], node.prefix[-1])
    degenerate = False
    for t in range(T - 1, -1, -1):
        for node in layers[t]:
            for xh in itertools.product(range(spec.n_states), repeat=t + 1):
                qs = tuple(_q_value(spec, vt, t, xh, node, a) for a in range(spec.n_actions))
                best = min(range(len(qs)), key=lambda a: (qs[a], a))
                key = (t, xh, node.id)
                vt.values[key] = qs[best]
                vt.q[key] = qs
                vt.argmin[key] = best
                vt.tie[key] = any(close(q, qs[best], tol) for a, q in enumerate(qs) if a != best)
                if not degenerate:
                    m_t = node.prefix[-1]
                    degenerate = any(p <= 0 for a in range(spec.n_actions)
                                     for p in transition(spec, t, xh[-1], m_t, a))
    if degenerate:
        vt.notes.append("warning: kernel has zero entries on this branch; nondegeneracy fails")
    return vt


def check_optimality(spec: GameSpec, rho: SuggestionAtoms, tol: float = CMP_TOL) -> CheckReport:
    """Following the suggestion attains the DPP infimum on every branch.

    Passes iff J(rho, identity) equals sum_phi P(phi) E[V_phi(0, X_0)]. On
    failure the violations list the nodes where the suggested action is
    strictly worse than the DPP argmin (the witness deviation).
    """
    rep = CheckReport("optimality", True)
    J_id, V_tot = 0, 0
    branches = {}
    for phi in rho.strategies():
        w = rho.strategy_mass(phi)
        vt = dpp_solve(spec, rho, phi, tol)
        law = state_chain(spec, rho, phi, chain=vt.chain)
        jv = law.expected_cost
        v0 = vt.initial_value(spec.initial)
        J_id += w * jv
        V_tot += w * v0
        gap = jv - v0
        branches[phi.label()] = {"P(phi)": w, "J_identity": jv, "dpp_value": v0, "gap": gap,
                                 "ties": sum(1 for (t, xh, nid), tie in vt.tie.items() if tie)}
        if not close(gap, 0 * gap, tol):
            rep.passed = False
            rep.details.setdefault("first_failing_branch", phi.label())
        for key, qs in vt.q.items():
            t, xh, nid = key
            suggested = phi(t, xh[-1])
            best = vt.argmin[key]
            if not close(qs[suggested], qs[best], tol) and qs[suggested] > qs[best]:
                node = vt.chain.nodes[nid]
                reach = law.layers[t].get((xh, nid), 0)
                rep.violations.append({
                    "branch": phi.label(), "t": t,
                    "state_history": [spec.states[x] for x in xh],
                    "flow_prefix": describe_prefix(node.prefix),
                    "suggested_action": spec.actions[suggested],
                    "better_action": spec.actions[best],
                    "improvement": qs[suggested] - qs[best],
                    "reachable": reach > 0,
                })
    gap = J_id - V_tot
    rep.details.update({"J_identity": J_id, "dpp_value": V_tot, "gap": gap, "branches": branches})
    if not rep.passed and not rep.violations:
        rep.notes.append("positive gap without a strict per-node witness")
    return rep


def branch_nodes(spec: GameSpec, chain: ConditionalChain) -> list:
    """Interior decision nodes (t, x^{(t)}, chain node id) with X_0 in supp(m_0)."""
    out = []
    for t in range(spec.horizon):
        for node in chain.layer(t):
            for xh in itertools.product(range(spec.n_states), repeat=t + 1):
                if spec.initial[xh[0]] > 0:
                    out.append((t, xh, node.id))
    return out


def bruteforce_branch_value(spec: GameSpec, rho: SuggestionAtoms, phi: RestrictedStrategy,
                            max_deviations: int = 1 << 16):
    """Exact minimum of J_phi over every deterministic progressive deviation.

    Enumerates one action per decision node and evaluates each assignment by
    the forward law, without touching the backward recursion. Returns
    (minimum, deviation table of a minimizer).
    """
    chain = conditional_chain(rho, phi)
    nodes = branch_nodes(spec, chain)
    count = spec.n_actions ** len(nodes)
    if count > max_deviations:
        raise InputError(f"{count} deviations exceed the enumeration guard {max_deviations}")
    best, best_table = None, None
    for assignment in itertools.product(range(spec.n_actions), repeat=len(nodes)):
        table = {(phi, t, xh, chain.nodes[nid].prefix): a for (t, xh, nid), a in zip(nodes, assignment)}
        dev = DeviationMap.from_table(table)
        v = state_chain(spec, rho, phi, dev, chain=chain).expected_cost
        if best is None or v < best:
            best, best_table = v, table
    return best, best_table
