"""Command-line entry point.

Exit codes: 0 all checks pass, 1 a check failed, 2 input or usage error.
Every command that writes files also writes ``manifest.json`` beside them;
``rerun`` replays a manifest into a fresh directory.
"""
from __future__ import annotations

import argparse
import json
import os
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .chaos import CHAOS_COLUMNS, chaos_curve, slope_fit
from .config import config_digest, load_config
from .correlated.chain import check_consistency, describe_prefix
from .correlated.dpp import check_optimality, dpp_solve
from .correlated.suggestion import check_r2, validate_r1
from .nplayer import EPSILON_COLUMNS, IDENTITY, default_family, epsilon_report, population, simulate
from .numeric import MODES, RATIONAL, InputError, fmt
from .reports import jsonable, write_csv
from .sampling import Estimate
from .toyexample import (ToyParams, build_game, build_rho, perturbed_rho, summary_json, toy_document,
                         window_scan)

OUT_ENV = "CMFG_OUT_DIR"
DEFAULT_OUT = "cmfg-out"


# ------------------------------------------------------------------ helpers

def _int_list(text: str) -> list:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _reps(text: str) -> int:
    try:
        v = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad repetition count {text!r}") from None
    if v < 2:
        raise argparse.ArgumentTypeError("reps must be at least 2")
    return v


def _load_target(args):
    """(spec, rho, config digest, description) for "toy" or a config path."""
    mode = args.mode
    perturb = getattr(args, "perturb", None)
    if args.target == "toy":
        p = ToyParams(args.beta, args.c0, args.c1)
        doc = toy_document(p)
        if perturb is None:
            rho = build_rho(p, mode)
        else:
            rho = perturbed_rho(p, perturb, mode)
            doc["perturb_m1"] = perturb
        return build_game(p, mode), rho, config_digest(doc), {"toy": p.to_dict()}
    if perturb is not None:
        raise InputError("--perturb applies to the toy target only")
    cfg = load_config(args.target, mode)
    return cfg.spec, cfg.rho, cfg.digest, {"config": str(args.target)}


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV, DEFAULT_OUT))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, args, argv, digest, outputs, started):
    manifest = {
        "command": args.command,
        "argv": list(argv),
        "config_hash": digest,
        "seed": getattr(args, "seed", None),
        "mode": getattr(args, "mode", None),
        "versions": {"cmfg": __version__, "python": platform.python_version(), "numpy": np.__version__},
        "wall_clock_seconds": round(time.perf_counter() - started, 3),
        "outputs": sorted(outputs),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


# ------------------------------------------------------------------ commands

def cmd_verify(args, argv, started) -> int:
    spec, rho, digest, _ = _load_target(args)
    reports = [validate_r1(rho, spec)]
    if reports[0].passed:
        reports += [check_r2(rho, spec.horizon), check_consistency(spec, rho), check_optimality(spec, rho)]
    for r in reports:
        print(r.summary())
    ok = all(r.passed for r in reports)
    print("verdict:", "PASS" if ok else "FAIL")
    if args.out:
        out = _out_dir(args)
        (out / "verify.json").write_text(json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n")
        _write_manifest(out, args, argv, digest, ["verify.json"], started)
    return 0 if ok else 1


def cmd_dpp(args, argv, started) -> int:
    spec, rho, digest, _ = _load_target(args)
    phis = rho.strategies()
    if args.phi:
        phis = [rho.find_strategy(args.phi)]
    rows = []
    for phi in phis:
        vt = dpp_solve(spec, rho, phi)
        print(f"branch {phi.label()}: E[V(0, X0)] = {fmt(vt.initial_value(spec.initial))}")
        for (t, xh, nid), v in sorted(vt.values.items(), key=lambda kv: (kv[0][0], kv[0][2], kv[0][1])):
            node = vt.chain.nodes[nid]
            key = (t, xh, nid)
            row = {"strategy": phi.label(), "t": t,
                   "state_history": " ".join(str(spec.states[x]) for x in xh),
                   "flow_prefix": describe_prefix(node.prefix), "value": v,
                   "best_action": spec.actions[vt.argmin[key]] if key in vt.argmin else "",
                   "tie": vt.tie.get(key, False)}
            rows.append(row)
            if t == 0:
                print(f"  V(0, x={spec.states[xh[0]]}, {describe_prefix(node.prefix)}) = {fmt(v)}")
        for note in vt.notes:
            print("  note:", note)
    if args.out:
        out = _out_dir(args)
        cols = ("strategy", "t", "state_history", "flow_prefix", "value", "best_action", "tie")
        write_csv(out / "dpp.csv", cols, rows)
        _write_manifest(out, args, argv, digest, ["dpp.csv"], started)
    return 0


def _find_rule(spec, name):
    for d in default_family(spec):
        if d.name == name:
            return d
    names = ", ".join(d.name for d in default_family(spec))
    raise InputError(f"unknown deviation {name!r}; available: {names}")


def cmd_simulate(args, argv, started) -> int:
    spec, rho, digest, _ = _load_target(args)
    dev = _find_rule(spec, args.deviation) if args.deviation else IDENTITY
    pop = population(spec, rho)
    rows = []
    for N in args.N:
        if N < 2:
            raise InputError(f"N must be at least 2, got {N}")
        res = simulate(spec, rho, N, dev, args.reps, args.seed, workers=args.workers, pop=pop)
        if dev.is_identity:
            imp = Estimate(0.0, 0.0, args.reps)
        else:
            base = simulate(spec, rho, N, None, args.reps, args.seed, workers=args.workers, pop=pop)
            imp = Estimate.from_samples(base.costs - res.costs)
        rows.append({"N": N, "deviation_name": dev.name, "reps": args.reps, "estimate": res.estimate.mean,
                     "stderr": res.estimate.stderr, "improvement": imp.mean, "improvement_stderr": imp.stderr})
        print(f"N={N} {dev.name}: {res.estimate.mean:.6f} +/- {res.estimate.stderr:.6f} "
              f"(E dist_T = {res.dist_T.mean:.4f})")
    out = _out_dir(args)
    write_csv(out / "simulate.csv", EPSILON_COLUMNS, rows)
    _write_manifest(out, args, argv, digest, ["simulate.csv"], started)
    return 0


def cmd_epsilon(args, argv, started) -> int:
    spec, rho, digest, _ = _load_target(args)
    rep = epsilon_report(spec, rho, args.N, default_family(spec), args.reps, args.seed, workers=args.workers)
    out = _out_dir(args)
    write_csv(out / "epsilon.csv", EPSILON_COLUMNS, rep.rows)
    (out / "epsilon_summary.json").write_text(json.dumps(jsonable(rep.observed), indent=2, sort_keys=True) + "\n")
    for N, o in rep.observed.items():
        print(f"N={N}: observed improvement {o['improvement']:.6f} +/- {o['stderr']:.6f} ({o['deviation']})")
    _write_manifest(out, args, argv, digest, ["epsilon.csv", "epsilon_summary.json"], started)
    return 0


def cmd_chaos(args, argv, started) -> int:
    spec, rho, digest, _ = _load_target(args)
    flow = rho.find_flow(args.flow) if args.flow else None
    curve = chaos_curve(spec, rho, args.N, args.reps, args.seed, flow=flow, workers=args.workers)
    out = _out_dir(args)
    write_csv(out / "chaos.csv", CHAOS_COLUMNS, [r.to_dict() for r in curve.rows])
    summary = {"decreasing_within_3se": curve.decreasing()}
    if len(curve.rows) >= 3:
        summary["slope"] = slope_fit(curve)
    for r in curve.rows:
        print(f"N={r.N}: E dist_T = {r.estimate:.6f} +/- {r.stderr:.6f}")
    if "slope" in summary:
        print(f"log-log slope: {summary['slope']:.4f}")
    (out / "chaos_summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    _write_manifest(out, args, argv, digest, ["chaos.csv", "chaos_summary.json"], started)
    return 0


def cmd_window(args, argv, started) -> int:
    if args.mode != RATIONAL:
        raise InputError("window-scan runs in rational mode only")
    res = window_scan(args.beta, args.grid, args.tol)
    out = _out_dir(args)
    cols = ("c0", "c1", "consistency_pass", "optimality_pass", "first_failing_branch")
    write_csv(out / "window.csv", cols, res["rows"])
    (out / "window_summary.json").write_text(summary_json(res) + "\n")
    s = res["summary"]
    print(f"pass points: {s['pass_points']} of {s['grid_points']}")
    if s["oracle_window"]:
        print("oracle hull:", s["oracle_window"]["hull"])
    print("stated window:", s["stated_window"])
    for d in s["discrepancies"]:
        print("discrepancy:", d)
    digest = config_digest({"window": {"beta": fmt(ToyParams(args.beta, 0, 0).beta), "grid": args.grid}})
    _write_manifest(out, args, argv, digest, ["window.csv", "window_summary.json"], started)
    return 0


def cmd_export(args, argv, started) -> int:
    p = ToyParams(args.beta, args.c0, args.c1)
    doc = toy_document(p, {"seed": args.seed})
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        out = _out_dir(args)
        (out / "toy.json").write_text(text)
        _write_manifest(out, args, argv, config_digest(doc), ["toy.json"], started)
    else:
        sys.stdout.write(text)
    return 0


def cmd_rerun(args, argv, started) -> int:
    path = Path(args.manifest)
    try:
        manifest = json.loads(path.read_text())
        old = list(manifest["argv"])
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"unreadable manifest: {exc}", str(path)) from None
    if old and old[0] == "rerun":
        raise InputError("a rerun manifest cannot be replayed", str(path))
    out = args.out or str(path.parent) + "-rerun"
    new = []
    skip = False
    for tok in old:
        if skip:
            skip = False
            continue
        if tok == "--out":
            skip = True
            continue
        if tok.startswith("--out="):
            continue
        new.append(tok)
    new += ["--out", out]
    print("rerun:", " ".join(new))
    return main(new)


# ------------------------------------------------------------------ parser

def _common(p, toy_params=True, seeds=False):
    p.add_argument("target", help='"toy" or a JSON config path')
    p.add_argument("--mode", choices=MODES, default=RATIONAL)
    p.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    if toy_params:
        _toy_flags(p)
    if seeds:
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--reps", type=_reps, default=10_000)
        p.add_argument("--workers", type=int, default=1)


def _toy_flags(p):
    p.add_argument("--beta", default="1/5")
    p.add_argument("--c0", default="1/20")
    p.add_argument("--c1", default="3/32")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cmfg", description="Correlated equilibria in finite mean field games.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the structure, consistency and optimality checks")
    _common(p)
    p.add_argument("--perturb", default=None, metavar="DELTA",
                   help="toy only: shift the +1 mass of m1+ by DELTA (mirrored in m1-)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dpp", help="solve the conditional DPP and print value tables")
    _common(p)
    p.add_argument("--phi", default=None, help="restrict to one strategy by name")
    p.set_defaults(func=cmd_dpp)

    p = sub.add_parser("simulate", help="Monte Carlo cost of player 1 in the N-player game")
    _common(p, seeds=True)
    p.add_argument("--N", type=_int_list, default=[10])
    p.add_argument("--deviation", default=None, help="rule name from the default family")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("epsilon-scan", help="observed improvement of the default deviation family")
    _common(p, seeds=True)
    p.add_argument("--N", type=_int_list, default=[5, 10, 20, 50, 100])
    p.set_defaults(func=cmd_epsilon)

    p = sub.add_parser("chaos-scan", help="E[dist_T] between the empirical and announced flows")
    _common(p, seeds=True)
    p.add_argument("--N", type=_int_list, default=[10, 100, 1000])
    p.add_argument("--flow", default=None, help="condition on one flow atom by name")
    p.set_defaults(func=cmd_chaos)

    p = sub.add_parser("window-scan", help="grid scan of the feasible (c0, c1) window of the toy game")
    p.add_argument("--mode", choices=MODES, default=RATIONAL)
    p.add_argument("--out", default=None)
    p.add_argument("--beta", default="1/5")
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("export-toy", help="write the toy instance as a config document")
    p.add_argument("--out", default=None)
    p.add_argument("--mode", choices=MODES, default=RATIONAL)
    p.add_argument("--seed", type=int, default=0)
    _toy_flags(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("rerun", help="replay the command recorded in a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_rerun)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        return args.func(args, argv, started)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
