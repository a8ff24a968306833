"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a PASS/FAIL line through the ``criterion`` fixture and
then asserts, so a failing criterion shows up in both places.
"""
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from cmfg import toyexample as toy
from cmfg.chaos import chaos_curve, slope_fit
from cmfg.cli import main
from cmfg.correlated import bruteforce_branch_value, check_r2, dpp_solve, evaluate_J, validate_r1
from cmfg.nplayer import default_family, epsilon_report, exact_epsilon, exact_j1n, population, simulate

BETA = Fraction(1, 5)


def _interior_point(beta, grid=16):
    """Grid point of the scan's pass set closest to the centre of its hull."""
    s = toy.window_scan(beta, grid=grid, tol=1e-4)["summary"]
    hull = s["oracle_window"]["hull"]
    c0 = sum(Fraction(v) for v in hull["c0"]) / 2
    c1 = sum(Fraction(v) for v in hull["c1"]) / 2
    return c0, c1, s


def _cmfg(*args):
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "cmfg.cli", *args], capture_output=True, text=True)
    return proc, time.perf_counter() - start


def test_criterion_1_toy_verification(criterion):
    c0, c1, _ = _interior_point(BETA)
    ok_run, secs = _cmfg("verify", "toy", "--beta", str(BETA), "--c0", str(c0), "--c1", str(c1))
    no_c1, _ = _cmfg("verify", "toy", "--c1", "0")
    pert, _ = _cmfg("verify", "toy", "--perturb", "1/100")
    passed = (ok_run.returncode == 0 and secs < 1.0
              and no_c1.returncode == 1 and "better_action" in no_c1.stdout
              and pert.returncode == 1 and "conditional_law" in pert.stdout)
    criterion(1, passed, f"interior (c0, c1) = ({c0}, {c1}) exit {ok_run.returncode} in {secs:.2f}s; "
                         f"c1=0 exit {no_c1.returncode}; perturbed exit {pert.returncode}")
    assert passed


def test_criterion_2_closed_forms(criterion):
    # Both values are piecewise linear in (beta, c0, c1) with kinks at c0 = 0,
    # c0 = beta/2 and c1 = 5 beta/16; the grid covers each piece and each kink.
    betas = [Fraction(1, 5), Fraction(1, 8), Fraction(3, 16), Fraction(1, 17)]
    mismatches, checked, off_window = [], 0, 0
    for beta in betas:
        c0s = [Fraction(k, 8) * beta for k in range(0, 9)]
        c1s = sorted({Fraction(k, 16) * beta for k in range(0, 17)} | {5 * beta / 16})
        for c0 in c0s:
            for c1 in c1s:
                spec, rho = toy.toy_instance(toy.ToyParams(beta, c0, c1))
                x_plus = (0,)
                v0 = dpp_solve(spec, rho, toy.PHI0).value(0, x_plus, (spec.initial,))
                vh = dpp_solve(spec, rho, toy.PHI_HAT_PLUS).value(0, x_plus, (spec.initial,))
                checked += 1
                if vh != min(0, c0 - beta / 2):
                    mismatches.append(("phi^+", beta, c0, c1, vh))
                if c1 >= 5 * beta / 16:
                    if v0 != min(0, c0):
                        mismatches.append(("phi0", beta, c0, c1, v0))
                elif v0 != min(0, c0):
                    off_window += 1  # the phi0 form needs c1 >= 5 beta/16, reported below
    summary = toy.window_scan(BETA, grid=8, tol=1e-3)["summary"]
    cross = {c["quantity"]: c for c in summary["cross_checks"]}
    reported = (not cross["M(m2+)"]["agree"]) and bool(summary["discrepancies"])
    passed = not mismatches and reported
    criterion(2, passed, f"{checked} grid points, {len(mismatches)} mismatches; phi0 form differs at "
                         f"{off_window} points with c1 < 5beta/16; M(m2+) flows "
                         f"{cross['M(m2+)']['from_flows']} vs constant {cross['M(m2+)']['simplified_constant']} "
                         f"reported")
    assert passed, mismatches[:5]


def test_criterion_3_dpp_equals_bruteforce(criterion):
    start = time.perf_counter()
    spec, rho = toy.toy_instance(toy.ToyParams())
    detail, ok = [], True
    for phi in rho.strategies():
        v = dpp_solve(spec, rho, phi).initial_value(spec.initial)
        best, _ = bruteforce_branch_value(spec, rho, phi)
        ok &= (v == best)
        detail.append(f"{phi.label()}={v}")
    secs = time.perf_counter() - start
    passed = ok and secs < 10
    criterion(3, passed, f"{', '.join(detail)} in {secs:.2f}s")
    assert passed


def test_criterion_4_monte_carlo_vs_exact(criterion):
    start = time.perf_counter()
    spec, rho = toy.toy_instance(toy.ToyParams())
    pop = population(spec, rho)
    hits = {}
    for N in (2, 3):
        exact = float(exact_j1n(spec, rho, N))
        hits[N] = sum(simulate(spec, rho, N, reps=200_000, seed=s, tag="acceptance-4", pop=pop)
                      .estimate.contains(exact, 3.0) for s in range(100))
    secs = time.perf_counter() - start
    passed = all(h >= 99 for h in hits.values()) and secs < 120
    criterion(4, passed, f"within 3 sigma: N=2 {hits[2]}/100, N=3 {hits[3]}/100 in {secs:.1f}s")
    assert passed


def test_criterion_5_limit_and_defect(criterion):
    spec, rho = toy.toy_instance(toy.ToyParams())
    J = float(evaluate_J(spec, rho))
    big = simulate(spec, rho, 500, reps=100_000, seed=5, tag="acceptance-5")
    limit_ok = abs(big.estimate.mean - J) <= 3 * big.estimate.stderr

    fam = default_family(spec)
    rep = epsilon_report(spec, rho, [5, 10, 20, 50, 100], fam, reps=100_000, seed=5, tag="acceptance-5")
    o5, o100 = rep.observed[5], rep.observed[100]
    gap = o5["improvement"] - o100["improvement"]
    defect_ok = gap > 3 * math.hypot(o5["stderr"], o100["stderr"])

    eps2, _ = exact_epsilon(spec, rho, 2)
    j2 = exact_j1n(spec, rho, 2)
    fam_exact = max(j2 - exact_j1n(spec, rho, 2, d) for d in fam)
    rep2 = epsilon_report(spec, rho, [2], fam, reps=100_000, seed=5, tag="acceptance-5")
    o2 = rep2.observed[2]
    small_ok = fam_exact <= eps2 and o2["improvement"] <= float(eps2) + 3 * o2["stderr"]

    passed = limit_ok and defect_ok and small_ok
    criterion(5, passed,
              f"N=500 {big.estimate.mean:.6f} +/- {big.estimate.stderr:.6f} vs J={J:.6f}; "
              f"improvement N=5 {o5['improvement']:.5f} ({o5['deviation']}) vs N=100 {o100['improvement']:.5f}; "
              f"N=2 family exact {float(fam_exact):.6f}, observed {o2['improvement']:.6f} <= eps_2 {float(eps2):.6f}")
    assert passed


def test_criterion_6_chaos_rate(criterion):
    start = time.perf_counter()
    spec, rho = toy.toy_instance(toy.ToyParams())
    curve = chaos_curve(spec, rho, [10, 100, 1000], reps=10_000, seed=6, tag="acceptance-6")
    slope = slope_fit(curve)
    far = chaos_curve(spec, rho, [10_000], reps=10_000, seed=6, tag="acceptance-6").rows[0]
    secs = time.perf_counter() - start
    passed = curve.decreasing(3.0) and -0.7 <= slope <= -0.3 and far.estimate <= 0.05 and secs < 300
    est = ", ".join(f"N={r.N}: {r.estimate:.4f}" for r in curve.rows)
    criterion(6, passed, f"{est}; slope {slope:.3f}; N=1e4 {far.estimate:.4f}; {secs:.1f}s")
    assert passed


def test_criterion_7_structure_checks(criterion):
    betas = [Fraction(k, 84) for k in range(1, 21)]
    ok = 0
    for beta in betas:
        spec, rho = toy.toy_instance(toy.ToyParams(beta=beta))
        ok += bool(validate_r1(rho, spec).passed and check_r2(rho, 2).passed)
    broken = check_r2(toy.build_rho_general("3/10", "1/20", "1/10", "1/20"), 2)
    passed = ok == 20 and not broken.passed
    criterion(7, passed, f"{ok}/20 beta values pass; asymmetric reweighting "
                         f"{'fails' if not broken.passed else 'passes'} with {len(broken.violations)} violations")
    assert passed


COMMANDS = [
    (["dpp", "toy"], ["dpp.csv"]),
    (["simulate", "toy", "--N", "2,10", "--reps", "3000", "--seed", "8", "--deviation", "downgrade[0]"],
     ["simulate.csv"]),
    (["epsilon-scan", "toy", "--N", "5,20", "--reps", "2000", "--seed", "8", "--workers", "2"], ["epsilon.csv"]),
    (["chaos-scan", "toy", "--N", "10,100,300", "--reps", "2000", "--seed", "8"], ["chaos.csv"]),
    (["window-scan", "--grid", "8", "--tol", "1e-3"], ["window.csv"]),
]


def test_criterion_8_determinism(criterion, tmp_path):
    same, total = 0, 0
    for i, (argv, files) in enumerate(COMMANDS):
        first = tmp_path / f"run{i}"
        assert main(argv + ["--out", str(first)]) == 0
        assert main(["rerun", str(first / "manifest.json")]) == 0
        for f in files:
            total += 1
            same += (first / f).read_bytes() == (tmp_path / f"run{i}-rerun" / f).read_bytes()
    passed = same == total
    criterion(8, passed, f"{same}/{total} CSVs byte-identical after rerun")
    assert passed
