"""Two-state, two-action instance with horizon 2.

States are ordered (+1, -1), so index 0 is the state +1. Action 1 makes the
current state stickier (stay probability 3/4 instead of 1/2). Costs:

    running(t, x, m, a) = c0 (1 - t) a + t (c1 a - x M(m))
    terminal(x, m)      = -x M(m)

with M(m) the mean state. The candidate suggestion mixes "stay-seeking"
strategies paired with the flows they generate and the passive strategy
phi0 spread over all four flows.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .config import export_document
from .correlated.chain import check_consistency
from .correlated.dpp import check_optimality
from .correlated.suggestion import Atom, RestrictedStrategy, SuggestionAtoms, check_r2, validate_r1
from .game import GameSpec, linear_costs, tabular_game
from .measures import FiniteDist, MeasureFlow
from .numeric import RATIONAL, InputError, convert, fmt, parse_number

STATES = (1, -1)
ACTIONS = (0, 1)
HORIZON = 2
STAY = {0: Fraction(1, 2), 1: Fraction(3, 4)}


@dataclass(frozen=True)
class ToyParams:
    """beta in (0, 1/4); the passive weight is gamma = 1/4 - beta.

    c0 and c1 are allowed to be zero so the degenerate negative controls
    can be built; the positive-cost window is what the scan looks for.
    """

    beta: object = Fraction(1, 5)
    c0: object = Fraction(1, 20)
    c1: object = Fraction(3, 32)

    def __post_init__(self):
        for name in ("beta", "c0", "c1"):
            v = getattr(self, name)
            object.__setattr__(self, name, parse_number(v, RATIONAL))
        if not 0 < self.beta < Fraction(1, 4):
            raise InputError(f"beta must lie in (0, 1/4), got {fmt(self.beta)}", "beta")
        if self.c0 < 0:
            raise InputError(f"c0 must be non-negative, got {fmt(self.c0)}", "c0")
        if self.c1 < 0:
            raise InputError(f"c1 must be non-negative, got {fmt(self.c1)}", "c1")

    @property
    def gamma(self):
        return Fraction(1, 4) - self.beta

    def to_dict(self) -> dict:
        return {"beta": fmt(self.beta), "c0": fmt(self.c0), "c1": fmt(self.c1)}


def mean_state(m: FiniteDist):
    """M(m) with the state values +1, -1."""
    return m[0] - m[1]


def kernel_table(mode: str = RATIONAL) -> list:
    out = []
    for _t in range(HORIZON):
        rows = []
        for x in range(2):
            per_a = []
            for a in ACTIONS:
                s = convert(STAY[a], mode)
                per_a.append([s if y == x else 1 - s for y in range(2)])
            rows.append(per_a)
        out.append(rows)
    return out


def toy_costs(p: ToyParams, mode: str = RATIONAL):
    """Affine cost tables: base in the action, slope in the measure."""
    c0, c1 = convert(p.c0, mode), convert(p.c1, mode)
    one = convert(1, mode)
    base, slope = [], []
    for t in range(HORIZON):
        base.append([[c0 * (1 - t) * a + t * c1 * a for a in ACTIONS] for _x in STATES])
        slope.append([[[-t * x * y * one for y in STATES] for _a in ACTIONS] for x in STATES])
    tbase = [0 * one for _ in STATES]
    tslope = [[-x * y * one for y in STATES] for x in STATES]
    return linear_costs(base, slope, tbase, tslope, mode)


def build_game(p: ToyParams, mode: str = RATIONAL) -> GameSpec:
    m0 = FiniteDist.of(["1/2", "1/2"], mode, name="m0")
    return tabular_game(HORIZON, STATES, ACTIONS, m0, kernel_table(mode), toy_costs(p, mode), mode=mode,
                        state_values=(1.0, -1.0), name="toy")


def toy_document(p: ToyParams, experiment: dict | None = None) -> dict:
    """The toy instance as a config document (rational entries as strings)."""
    spec, rho = toy_instance(p)
    doc = export_document(spec, rho, toy_costs(p), kernel_table(), experiment)
    doc["game"]["name"] = "toy"
    doc["toy_params"] = p.to_dict()
    return doc


def _strategy(fn, name):
    return RestrictedStrategy(tuple(tuple(fn(t, x) for x in STATES) for t in range(HORIZON)), name)


PHI0 = _strategy(lambda t, x: 0, "phi0")
PHI_PLUS = _strategy(lambda t, x: int(x == 1), "phi+")
PHI_MINUS = _strategy(lambda t, x: int(x == -1), "phi-")
PHI_HAT_PLUS = _strategy(lambda t, x: int(t == 0 and x == 1), "phi^+")
PHI_HAT_MINUS = _strategy(lambda t, x: int(t == 0 and x == -1), "phi^-")
STRATEGIES = {s.name: s for s in (PHI0, PHI_PLUS, PHI_MINUS, PHI_HAT_PLUS, PHI_HAT_MINUS)}


def closed_form_flows(b1, b2, mode: str = RATIONAL) -> dict:
    """The four flows from their closed forms in the pair weights (b1, b2)."""
    b1, b2 = convert(b1, mode), convert(b2, mode)
    s = b1 + b2
    half = convert(Fraction(1, 2), mode)
    m0 = FiniteDist.of([half, half], mode, name="m0")
    up1 = (5 * b1 + 4 * b2) / (8 * s)
    up2 = (21 * b1 + 16 * b2) / (32 * s)
    m1p = FiniteDist.of([up1, 1 - up1], mode, name="m1+")
    m1m = FiniteDist.of([1 - up1, up1], mode, name="m1-")
    m2p = FiniteDist.of([up2, 1 - up2], mode, name="m2+")
    m2m = FiniteDist.of([1 - up2, up2], mode, name="m2-")
    return {
        "m+": MeasureFlow((m0, m1p, m2p), "m+"),
        "m-": MeasureFlow((m0, m1m, m2m), "m-"),
        "m^+": MeasureFlow((m0, m1p, m0), "m^+"),
        "m^-": MeasureFlow((m0, m1m, m0), "m^-"),
    }


def build_rho_general(b1, b2, b3, b4, mode: str = RATIONAL, flows: dict | None = None) -> SuggestionAtoms:
    """Eight-atom suggestion with pair weights b1..b4 (summing to 1/2).

    Flows come from (b1, b2) unless ``flows`` overrides them.
    """
    b = [convert(parse_number(v, RATIONAL) if isinstance(v, str) else v, mode) for v in (b1, b2, b3, b4)]
    if any(v <= 0 for v in b):
        raise InputError("pair weights must be positive")
    fl = flows or closed_form_flows(b[0], b[1], mode)
    return SuggestionAtoms([
        Atom(PHI_PLUS, fl["m+"], b[0]), Atom(PHI_MINUS, fl["m-"], b[0]),
        Atom(PHI0, fl["m+"], b[1]), Atom(PHI0, fl["m-"], b[1]),
        Atom(PHI_HAT_PLUS, fl["m^+"], b[2]), Atom(PHI_HAT_MINUS, fl["m^-"], b[2]),
        Atom(PHI0, fl["m^+"], b[3]), Atom(PHI0, fl["m^-"], b[3]),
    ])


def build_rho(p: ToyParams, mode: str = RATIONAL) -> SuggestionAtoms:
    """The symmetric slice b1 = b3 = beta, b2 = b4 = gamma."""
    return build_rho_general(p.beta, p.gamma, p.beta, p.gamma, mode)


def perturbed_rho(p: ToyParams, delta="1/100", mode: str = RATIONAL) -> SuggestionAtoms:
    """Shift the +1 mass of m1+ by ``delta`` (mirrored in m1-) in every flow."""
    d = convert(parse_number(delta, RATIONAL), mode)
    fl = closed_form_flows(p.beta, p.gamma, mode)
    out = {}
    for key, f in fl.items():
        m1 = f[1]
        sign = 1 if key.endswith("+") else -1
        new1 = FiniteDist.of([m1[0] + sign * d, m1[1] - sign * d], mode, name=m1.name)
        out[key] = MeasureFlow((f[0], new1, f[2]), f.name)
    return build_rho_general(p.beta, p.gamma, p.beta, p.gamma, mode, flows=out)


def toy_instance(p: ToyParams, mode: str = RATIONAL):
    return build_game(p, mode), build_rho(p, mode)


def verify_all(spec: GameSpec, rho: SuggestionAtoms) -> list:
    """Finite support, conditional independence, consistency and optimality reports, in order."""
    return [validate_r1(rho, spec), check_r2(rho, spec.horizon),
            check_consistency(spec, rho), check_optimality(spec, rho)]


# ---------------------------------------------------------------- window scan

def _passes(beta, c0, c1) -> tuple:
    p = ToyParams(beta, c0, c1)
    spec, rho = toy_instance(p)
    con = check_consistency(spec, rho)
    opt = check_optimality(spec, rho)
    return bool(con.passed), bool(opt.passed), opt.details.get("first_failing_branch", "")


def _bisect(beta, fixed_axis, fixed_value, lo, hi, lo_pass, tol):
    """Boundary between lo and hi along one axis; lo_pass tells which side passes."""
    lo, hi = Fraction(lo), Fraction(hi)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        c0, c1 = (fixed_value, mid) if fixed_axis == "c0" else (mid, fixed_value)
        ok = all(_passes(beta, c0, c1)[:2])
        if ok == lo_pass:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _transitions(values, flags):
    return [(values[i], values[i + 1], flags[i]) for i in range(len(values) - 1) if flags[i] != flags[i + 1]]


def window_scan(beta, grid: int = 16, tol: float = 1e-6) -> dict:
    """Scan c0 in (0, beta] and c1 in [0, beta] on a uniform grid.

    Returns the CSV rows, the rectangular hull of the pass set, boundaries
    refined by bisection along the mid-lines of the hull, and the comparison
    against the window stated alongside the example (recorded verbatim).
    """
    if grid < 8:
        raise InputError(f"grid must have at least 8 points per axis, got {grid}")
    beta = parse_number(beta, RATIONAL) if not isinstance(beta, Fraction) else beta
    ToyParams(beta, 0, 0)
    c0s = [beta * i / grid for i in range(1, grid + 1)]
    c1s = [beta * j / grid for j in range(0, grid + 1)]
    rows, passing = [], []
    for c0, c1 in itertools.product(c0s, c1s):
        con, opt, branch = _passes(beta, c0, c1)
        rows.append({"c0": fmt(c0), "c1": fmt(c1), "consistency_pass": con,
                     "optimality_pass": opt, "first_failing_branch": branch})
        if con and opt:
            passing.append((c0, c1))
    summary = {"beta": fmt(beta), "grid": grid, "grid_points": len(rows), "pass_points": len(passing)}
    stated = {"c0": [fmt(Fraction(0)), fmt(beta / 2)], "c1": [fmt(5 * beta / 32), fmt(5 * beta / 16)],
              "strict": True}
    summary["stated_window"] = stated
    if not passing:
        summary["oracle_window"] = None
        summary["discrepancies"] = ["oracle pass region is empty on this grid"]
        return {"rows": rows, "summary": summary}
    c0_lo, c0_hi = min(c for c, _ in passing), max(c for c, _ in passing)
    c1_lo, c1_hi = min(c for _, c in passing), max(c for _, c in passing)
    hull = {"c0": [fmt(c0_lo), fmt(c0_hi)], "c1": [fmt(c1_lo), fmt(c1_hi)]}
    pass_set = set(passing)
    rectangular = all((a, b) in pass_set for a in c0s if c0_lo <= a <= c0_hi
                      for b in c1s if c1_lo <= b <= c1_hi)
    mid_c0 = min((c for c, _ in passing), key=lambda c: abs(c - (c0_lo + c0_hi) / 2))
    mid_c1 = min((c for _, c in passing), key=lambda c: abs(c - (c1_lo + c1_hi) / 2))
    tol = Fraction(tol).limit_denominator(10 ** 9)
    bounds = {}
    for axis, values, fixed in (("c0", c0s, mid_c1), ("c1", c1s, mid_c0)):
        flags = [all(_passes(beta, *((v, fixed) if axis == "c0" else (fixed, v)))[:2]) for v in values]
        found = []
        for lo, hi, lo_flag in _transitions(values, flags):
            a, b = _bisect(beta, "c1" if axis == "c0" else "c0", fixed, lo, hi, lo_flag, tol)
            found.append({"between": [float(a), float(b)], "pass_side": "low" if lo_flag else "high",
                          "in_units_of_beta": [float(a / beta), float(b / beta)]})
        bounds[axis] = found
    oracle = {"hull": hull, "rectangular": rectangular, "boundaries": bounds}
    summary["oracle_window"] = oracle
    summary["discrepancies"] = _discrepancies(beta, c0_lo, c0_hi, c1_lo, c1_hi, bounds)
    summary["cross_checks"] = _cross_checks(beta)
    return {"rows": rows, "summary": summary}


def _discrepancies(beta, c0_lo, c0_hi, c1_lo, c1_hi, bounds) -> list:
    out = []
    s_c1_lo, s_c1_hi = 5 * beta / 32, 5 * beta / 16
    if c1_hi < s_c1_lo or c1_lo > s_c1_hi or c1_lo > s_c1_lo or c1_hi < s_c1_hi:
        out.append(f"c1: oracle grid hull [{fmt(c1_lo)}, {fmt(c1_hi)}] vs stated open interval "
                   f"({fmt(s_c1_lo)}, {fmt(s_c1_hi)})")
    if c0_hi >= beta / 2:
        out.append(f"c0: oracle passes at c0 = {fmt(c0_hi)} (>= beta/2, a tie in the t=0 branch of phi^+) "
                   f"while the stated upper bound beta/2 is strict")
    centre = (beta / 4, 15 * beta / 64)
    con, opt, branch = _passes(beta, *centre)
    if not (con and opt):
        out.append(f"centre of the stated window (c0={fmt(centre[0])}, c1={fmt(centre[1])}) fails "
                   f"the oracle: consistency={con}, optimality={opt}, first failing branch {branch}")
    return out


def _cross_checks(beta) -> list:
    """Simplified scalar constants compared with the flows they summarize."""
    fl = closed_form_flows(beta, Fraction(1, 4) - beta)
    checks = []
    for label, flow_key, t, claimed in (("M(m1+)", "m+", 1, beta), ("M(m2+)", "m+", 2, 5 * beta / 8)):
        got = mean_state(fl[flow_key][t])
        checks.append({"quantity": label, "from_flows": fmt(got), "simplified_constant": fmt(claimed),
                       "agree": got == claimed})
    return checks


def scan_csv_rows(result: dict) -> list:
    return result["rows"]


def summary_json(result: dict) -> str:
    return json.dumps(result["summary"], indent=2, sort_keys=True)


__all__ = ["ToyParams", "STATES", "ACTIONS", "STRATEGIES", "PHI0", "PHI_PLUS", "PHI_MINUS",
           "PHI_HAT_PLUS", "PHI_HAT_MINUS", "build_game", "build_rho", "build_rho_general",
           "closed_form_flows", "perturbed_rho", "toy_instance", "verify_all", "window_scan",
           "mean_state", "kernel_table", "summary_json", "toy_costs", "toy_document"]
