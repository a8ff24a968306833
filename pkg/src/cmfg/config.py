"""JSON configuration: one document with game, suggestion and experiment blocks.

Probabilities and costs may be written as strings ("1/3", "0.25") so that
rational mode reads them exactly. Errors carry the JSON path of the first
offending entry.

    {
      "mode": "rational",
      "game": {
        "horizon": 2, "states": [1, -1], "actions": [0, 1],
        "initial": ["1/2", "1/2"],
        "kernel": {"type": "dense", "table": [T][X][A][X]},
        "running": {"base": [T][X][A], "linear": [T][X][A][X]},
        "terminal": {"base": [X], "linear": [X][X]}
      },
      "suggestion": {
        "strategies": {"name": [T][X] action indices},
        "flows": {"name": [T+1][X] probabilities},
        "atoms": [{"strategy": "name", "flow": "name", "weight": "1/4"}]
      },
      "experiment": {"seed": 0, "reps": 10000}
    }

A kernel of type "atoms" lists {"measure": [X], "table": [T][X][A][X]}
entries and is looked up by the measure argument.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .correlated.suggestion import Atom, RestrictedStrategy, SuggestionAtoms
from .game import GameSpec, atom_kernel_game, linear_costs, tabular_game
from .measures import FiniteDist, MeasureFlow
from .numeric import MODES, RATIONAL, InputError, fmt, parse_number


@dataclass
class LoadedConfig:
    spec: GameSpec
    rho: SuggestionAtoms
    experiment: dict = field(default_factory=dict)
    mode: str = RATIONAL
    digest: str = ""
    document: dict = field(default_factory=dict)


def _need(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise InputError("expected an object", where)
    if key not in d:
        raise InputError(f"missing key {key!r}", where)
    return d[key]


def _numbers(obj, mode, where):
    """Parse a nested list of numbers, keeping the nesting."""
    if isinstance(obj, list):
        return [_numbers(v, mode, f"{where}[{i}]") for i, v in enumerate(obj)]
    try:
        return parse_number(obj, mode)
    except InputError as exc:
        raise InputError(str(exc), where) from None


def _dist(obj, mode, where, name=None) -> FiniteDist:
    vals = _numbers(obj, mode, where)
    if not isinstance(vals, list) or any(isinstance(v, list) for v in vals):
        raise InputError("expected a flat list of probabilities", where)
    try:
        return FiniteDist(tuple(vals), name=name)
    except InputError as exc:
        raise InputError(str(exc), where) from None


def config_digest(doc: dict) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def build_game(doc: dict, mode: str) -> GameSpec:
    g = _need(doc, "game", "$")
    T = _need(g, "horizon", "$.game")
    if not isinstance(T, int) or T < 1:
        raise InputError("horizon must be a positive integer", "$.game.horizon")
    states = _need(g, "states", "$.game")
    actions = _need(g, "actions", "$.game")
    if not isinstance(states, list) or not states:
        raise InputError("states must be a non-empty list", "$.game.states")
    if not isinstance(actions, list) or not actions:
        raise InputError("actions must be a non-empty list", "$.game.actions")
    m0 = _dist(_need(g, "initial", "$.game"), mode, "$.game.initial", "m0")
    if m0.size != len(states):
        raise InputError("initial law length differs from the state count", "$.game.initial")
    run = _need(g, "running", "$.game")
    term = _need(g, "terminal", "$.game")
    base = _numbers(_need(run, "base", "$.game.running"), mode, "$.game.running.base")
    slope = run.get("linear")
    slope = None if slope is None else _numbers(slope, mode, "$.game.running.linear")
    tbase = _numbers(_need(term, "base", "$.game.terminal"), mode, "$.game.terminal.base")
    tslope = term.get("linear")
    tslope = None if tslope is None else _numbers(tslope, mode, "$.game.terminal.linear")
    costs = linear_costs(base, slope, tbase, tslope, mode)
    values = g.get("state_values")
    if values is not None:
        values = tuple(float(parse_number(v, mode)) for v in values)
    kern = _need(g, "kernel", "$.game")
    ktype = _need(kern, "type", "$.game.kernel")
    name = str(g.get("name", "config"))
    if ktype == "dense":
        table = _numbers(_need(kern, "table", "$.game.kernel"), mode, "$.game.kernel.table")
        try:
            return tabular_game(T, states, actions, m0, table, costs, mode, values, name)
        except InputError as exc:
            loc = exc.location or ""
            if not loc.startswith("kernel"):
                raise
            msg = str(exc)[len(loc) + 2:]
            raise InputError(msg, "$.game.kernel.table" + loc[len("kernel"):]) from None
    if ktype == "atoms":
        atoms = []
        for i, entry in enumerate(_need(kern, "atoms", "$.game.kernel")):
            where = f"$.game.kernel.atoms[{i}]"
            m = _dist(_need(entry, "measure", where), mode, where + ".measure")
            atoms.append((m, _numbers(_need(entry, "table", where), mode, where + ".table")))
        return atom_kernel_game(T, states, actions, m0, atoms, costs, mode, values, name)
    raise InputError(f"unknown kernel type {ktype!r}", "$.game.kernel.type")


def build_suggestion(doc: dict, mode: str) -> SuggestionAtoms:
    s = _need(doc, "suggestion", "$")
    strategies = {}
    for name, table in _need(s, "strategies", "$.suggestion").items():
        where = f"$.suggestion.strategies.{name}"
        if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
            raise InputError("strategy must be a [T][X] table of action indices", where)
        if any(not isinstance(a, int) or isinstance(a, bool) for r in table for a in r):
            raise InputError("action indices must be integers", where)
        strategies[name] = RestrictedStrategy(table, name)
    flows = {}
    for name, rows in _need(s, "flows", "$.suggestion").items():
        where = f"$.suggestion.flows.{name}"
        if not isinstance(rows, list) or not rows:
            raise InputError("flow must be a non-empty list of measures", where)
        flows[name] = MeasureFlow(tuple(_dist(r, mode, f"{where}[{t}]", f"{name}_{t}") for t, r in enumerate(rows)),
                                  name)
    atoms = []
    for i, a in enumerate(_need(s, "atoms", "$.suggestion")):
        where = f"$.suggestion.atoms[{i}]"
        sname, fname = _need(a, "strategy", where), _need(a, "flow", where)
        if sname not in strategies:
            raise InputError(f"unknown strategy {sname!r}", where + ".strategy")
        if fname not in flows:
            raise InputError(f"unknown flow {fname!r}", where + ".flow")
        w = _numbers(_need(a, "weight", where), mode, where + ".weight")
        atoms.append(Atom(strategies[sname], flows[fname], w))
    if not atoms:
        raise InputError("suggestion has no atoms", "$.suggestion.atoms")
    return SuggestionAtoms(atoms)


def load_document(doc: dict, mode: str | None = None) -> LoadedConfig:
    if not isinstance(doc, dict):
        raise InputError("config must be a JSON object", "$")
    mode = mode or doc.get("mode", RATIONAL)
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}", "$.mode")
    spec = build_game(doc, mode)
    rho = build_suggestion(doc, mode)
    exp = doc.get("experiment", {})
    if not isinstance(exp, dict):
        raise InputError("experiment block must be an object", "$.experiment")
    return LoadedConfig(spec, rho, exp, mode, config_digest(doc), doc)


def load_config(path, mode: str | None = None) -> LoadedConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read config: {exc.strerror}", str(p)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", f"{p}:{exc.lineno}:{exc.colno}") from None
    return load_document(doc, mode)


def _table(obj):
    if isinstance(obj, (list, tuple)):
        return [_table(v) for v in obj]
    return fmt(obj)


def export_document(spec: GameSpec, rho: SuggestionAtoms, costs, kernel_table, experiment=None) -> dict:
    """Config document for a dense-kernel game with affine costs."""
    strategies, flows = {}, {}
    for phi in rho.strategies():
        strategies[phi.label()] = [list(r) for r in phi.table]
    for f in rho.flows():
        flows[f.label()] = [_table(list(m.weights)) for m in f]
    atoms = [{"strategy": s.label(), "flow": f.label(), "weight": fmt(w)} for (s, f), w in rho.joint().items()]
    running = {"base": _table(costs.base)}
    if costs.slope is not None:
        running["linear"] = _table(costs.slope)
    terminal = {"base": _table(costs.tbase)}
    if costs.tslope is not None:
        terminal["linear"] = _table(costs.tslope)
    return {
        "mode": spec.mode,
        "game": {
            "name": spec.name, "horizon": spec.horizon, "states": list(spec.states),
            "actions": list(spec.actions), "initial": _table(list(spec.initial.weights)),
            "state_values": list(spec.state_values),
            "kernel": {"type": "dense", "table": _table(kernel_table)},
            "running": running, "terminal": terminal,
        },
        "suggestion": {"strategies": strategies, "flows": flows, "atoms": atoms},
        "experiment": experiment or {},
    }


__all__ = ["LoadedConfig", "load_config", "load_document", "build_game", "build_suggestion",
           "export_document", "config_digest"]
