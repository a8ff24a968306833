"""Conditional flow chains, exact forward laws of the representative player,
the consistency check and the cost functional."""
from __future__ import annotations

import operator
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable

from ..game import GameSpec, transition
from ..measures import MeasureFlow
from ..numeric import CMP_TOL, InputError, close
from ..reports import CheckReport
from .suggestion import RestrictedStrategy, SuggestionAtoms


@dataclass
class ChainNode:
    id: int
    t: int
    prefix: tuple
    prob: object  # P_phi(mu^{(t)} = prefix)
    parent: int | None
    children: dict = field(default_factory=dict)  # child id -> conditional probability
    flow: MeasureFlow | None = None  # set on leaves


@dataclass
class ConditionalChain:
    """Prefix tree of the flows in P_phi with exact conditional edge laws."""

    phi: RestrictedStrategy
    mass: object
    marginals: dict
    nodes: list
    roots: list

    def node(self, t: int, prefix: tuple) -> ChainNode:
        for n in self.layer(t):
            if n.prefix == tuple(prefix):
                return n
        raise InputError(f"prefix not in the support at t={t}")

    def layer(self, t: int) -> list:
        return [n for n in self.nodes if n.t == t]

    def leaves(self) -> list:
        return [n for n in self.nodes if n.flow is not None]

    def edge(self, parent: int, child: int):
        return self.nodes[parent].children[child]

    def prob_next(self, t: int, prefix: tuple) -> dict:
        """P(mu_{t+1} = l | mu^{(t)} = prefix) keyed by l."""
        n = self.node(t, prefix)
        return {self.nodes[c].prefix[-1]: p for c, p in n.children.items()}


def conditional_chain(rho: SuggestionAtoms, phi: RestrictedStrategy) -> ConditionalChain:
    """Intern flow prefixes of P_phi into a tree, deduplicated across atoms."""
    if rho.strategy_mass(phi) <= 0:
        raise InputError(f"strategy {phi.label()} has zero mass under the suggestion")
    marg = rho.flows_given(phi)
    T = next(iter(marg)).horizon
    nodes: list[ChainNode] = []
    index: dict = {}
    roots = []
    for flow, p in marg.items():
        parent = None
        for t in range(T + 1):
            key = flow.prefix(t)
            nid = index.get(key)
            if nid is None:
                nid = len(nodes)
                index[key] = nid
                nodes.append(ChainNode(nid, t, key, 0 * p, parent))
                if parent is None:
                    roots.append(nid)
            nodes[nid].prob += p
            parent = nid
        nodes[parent].flow = flow
    for n in nodes:
        if n.parent is not None:
            par = nodes[n.parent]
            if par.prob <= 0:
                raise InputError("zero-probability prefix in conditional chain")
    for n in nodes:
        if n.parent is not None:
            nodes[n.parent].children[n.id] = n.prob / nodes[n.parent].prob
    return ConditionalChain(phi, rho.strategy_mass(phi), marg, nodes, roots)


class DeviationMap:
    """Strategy modification acting on suggested restricted strategies.

    ``rule(phi, t, xhist, mprefix)`` returns an action index from the
    suggested strategy, the player's own state history x^{(t)} and the flow
    prefix m^{(t)}. ``rule=None`` is the identity (follow the suggestion).
    """

    def __init__(self, rule: Callable | None = None, name: str = "identity"):
        self.rule = rule
        self.name = name if rule is not None else "identity"

    @classmethod
    def identity(cls) -> "DeviationMap":
        return cls(None)

    @classmethod
    def from_table(cls, table: dict, name: str = "table", fallback_identity: bool = False) -> "DeviationMap":
        """Deviation given as {(phi, t, xhist, mprefix): action}."""

        def rule(phi, t, xhist, mprefix):
            key = (phi, t, tuple(xhist), tuple(mprefix))
            if key in table:
                return table[key]
            if fallback_identity:
                return phi(t, xhist[-1])
            raise InputError(f"deviation undefined at t={t}, history={list(xhist)} for {phi.label()}")

        return cls(rule, name)

    @property
    def is_identity(self) -> bool:
        return self.rule is None

    def action(self, phi: RestrictedStrategy, t: int, xhist: tuple, mprefix: tuple) -> int:
        if self.rule is None:
            return phi(t, xhist[-1])
        return self.rule(phi, t, xhist, mprefix)


@dataclass
class JointLaw:
    """Exact law of (X^{(t)}, mu^{(t)}) for each t under a fixed suggestion phi.

    ``layers[t]`` maps (xhist, chain node id) to P_phi. ``expected_cost`` is
    J_phi for the deviation used to build it.
    """

    phi: RestrictedStrategy
    chain: ConditionalChain
    layers: list
    actions: dict
    expected_cost: object

    def state_marginal(self, t: int) -> dict:
        out = defaultdict(int)
        for (xh, _), p in self.layers[t].items():
            out[xh[-1]] += p
        return dict(out)

    def state_given_flow(self, t: int, flow: MeasureFlow) -> dict:
        """P_phi(X_t = x | mu = flow), read off the terminal layer."""
        T = len(self.layers) - 1
        num, den = defaultdict(int), 0
        for (xh, nid), p in self.layers[T].items():
            if self.chain.nodes[nid].flow == flow:
                num[xh[t]] += p
                den += p
        if den <= 0:
            raise InputError(f"flow {flow.label()} has zero probability given {self.phi.label()}")
        return {x: v / den for x, v in num.items()}


def state_chain(spec: GameSpec, rho: SuggestionAtoms, phi: RestrictedStrategy,
                deviation: DeviationMap | None = None, chain: ConditionalChain | None = None) -> JointLaw:
    """Forward recursion: state and flow advance independently given the node."""
    dev = deviation or DeviationMap.identity()
    chain = chain or conditional_chain(rho, phi)
    T = spec.horizon
    m0 = spec.initial
    layer = {}
    for rid in chain.roots:
        root = chain.nodes[rid]
        for x in range(spec.n_states):
            if m0[x] > 0:
                layer[((x,), rid)] = m0[x] * root.prob
    layers = [layer]
    actions = {}
    cost = 0 * m0[0]
    for t in range(T):
        nxt = defaultdict(int)
        for (xh, nid), p in layer.items():
            node = chain.nodes[nid]
            m_t = node.prefix[-1]
            a = dev.action(phi, t, xh, node.prefix)
            try:
                a = operator.index(a)
            except TypeError:
                raise InputError(f"deviation returned non-integer action {a!r} at t={t}") from None
            if not 0 <= a < spec.n_actions:
                raise InputError(f"deviation returned invalid action {a!r} at t={t}")
            actions[(t, xh, nid)] = a
            cost += p * spec.running(t, xh[-1], m_t, a)
            kern = transition(spec, t, xh[-1], m_t, a)
            for y, py in enumerate(kern):
                if py == 0:
                    continue
                for cid, pc in node.children.items():
                    nxt[(xh + (y,), cid)] += p * py * pc
        layer = dict(nxt)
        layers.append(layer)
    for (xh, nid), p in layer.items():
        cost += p * spec.terminal(xh[-1], chain.nodes[nid].prefix[-1])
    return JointLaw(phi, chain, layers, actions, cost)


def check_consistency(spec: GameSpec, rho: SuggestionAtoms, tol: float = CMP_TOL) -> CheckReport:
    """Each flow atom equals the conditional law of X_t given the whole flow."""
    rep = CheckReport("consistency", True)
    joint = defaultdict(int)  # (flow, t, x) -> P(X_t = x, mu = flow)
    for phi in rho.strategies():
        law = state_chain(spec, rho, phi)
        w = rho.strategy_mass(phi)
        T = spec.horizon
        for (xh, nid), p in law.layers[T].items():
            flow = law.chain.nodes[nid].flow
            for t in range(T + 1):
                joint[(flow, t, xh[t])] += w * p
    max_err = 0
    for flow in rho.flows():
        pm = rho.flow_mass(flow)
        if pm <= 0:
            raise InputError(f"flow {flow.label()} has zero probability")
        for t in range(spec.horizon + 1):
            for x in range(spec.n_states):
                got = joint.get((flow, t, x), 0 * pm) / pm
                want = flow[t][x]
                err = abs(got - want)
                if err > max_err:
                    max_err = err
                if not close(got, want, tol):
                    rep.passed = False
                    rep.violations.append({"flow": flow.label(), "t": t, "x": spec.states[x],
                                           "flow_mass": want, "conditional_law": got})
    rep.details["max_abs_error"] = max_err
    rep.details["flows_checked"] = len(rho.flows())
    return rep


def evaluate_branch_J(spec: GameSpec, rho: SuggestionAtoms, phi: RestrictedStrategy,
                      deviation: DeviationMap | None = None):
    """J_phi: expected cost conditional on the suggestion phi."""
    return state_chain(spec, rho, phi, deviation).expected_cost


def evaluate_J(spec: GameSpec, rho: SuggestionAtoms, deviation: DeviationMap | None = None):
    """J(m_0, rho, w) = sum over suggestions of P(phi) J_phi."""
    total = 0
    for phi in rho.strategies():
        total += rho.strategy_mass(phi) * evaluate_branch_J(spec, rho, phi, deviation)
    return total


def describe_prefix(prefix: tuple) -> str:
    return "(" + ", ".join(m.label() for m in prefix) + ")"


__all__ = ["ChainNode", "ConditionalChain", "conditional_chain", "DeviationMap", "JointLaw",
           "state_chain", "check_consistency", "evaluate_J", "evaluate_branch_J", "describe_prefix"]
