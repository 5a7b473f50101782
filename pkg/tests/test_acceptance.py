"""Acceptance gate: one test per criterion, each at its stated tolerance.

Every test records a ``PASS``/``FAIL`` line with its measured numbers; the
lines are printed together at the end of the pytest run.

    pytest tests/test_acceptance.py
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from projective_rational import (Behavior, ConvergencePolicy, ProjectivityClass, SystemSpec,
                                 check_conjugacy, classify, detect_limit, iterate, lift_riccati,
                                 line_image_parallel, step)
from projective_rational.analysis import (Basin, Example2Params, Example3Case, Example3Params,
                                          Example4Params, example2_limits, example2_second_order,
                                          example2_system, example3_analyze, example3_basin,
                                          example3_limits, example3_reduced_map,
                                          example3_state_at_w1, example3_system, example4_limits,
                                          example4_system, poly_eval, positive_roots)
from projective_rational.dynamics import relative_change
from projective_rational.sampling import PROJECTIVE_CLASSES, positive_uniform, random_spec
from projective_rational.specfile import dump_spec, parse_spec

pytestmark = pytest.mark.acceptance

SPECS_PER_CLASS = 1000
CORPUS_SEED = 20240601


def record(name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def corpus():
    """The shared random spec corpus: (class, spec, rng) per draw."""
    rng = np.random.default_rng(CORPUS_SEED)
    for cls in PROJECTIVE_CLASSES:
        for _ in range(SPECS_PER_CLASS):
            k = int(rng.integers(2, 6))
            yield cls, random_spec(rng, cls, k), rng


def test_conjugacy_suite():
    start = time.perf_counter()
    worst, failures, n = 0.0, 0, 0
    for cls, spec, rng in corpus():
        assert classify(spec) is cls
        report = check_conjugacy(spec, positive_uniform(rng, spec.k), n_steps=200, tol=1e-9)
        worst = max(worst, report.max_deviation)
        failures += not report.passed
        n += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and worst < 1e-9 and elapsed < 30
    record("1 conjugacy", ok, f"{n} specs, max deviation {worst:.2e} (< 1e-9), "
           f"{failures} failing, {elapsed:.1f} s (< 30 s)")
    assert ok


def test_line_mapping():
    failures, worst_homog, n = 0, 0.0, 0
    for cls, spec, rng in corpus():
        for _ in range(10):
            x = positive_uniform(rng, spec.k)
            lam = float(positive_uniform(rng))
            failures += not line_image_parallel(spec, x, lam, tol=1e-9)
            if cls is ProjectivityClass.HOMOGENEOUS:
                dev = float(relative_change(step(spec, lam * x), step(spec, x)).max())
                worst_homog = max(worst_homog, dev)
            n += 1
    ok = failures == 0 and worst_homog < 1e-12
    record("2 line mapping", ok, f"{n} (x, lambda) pairs, {failures} not parallel at 1e-9; "
           f"homogeneous step(lambda x) vs step(x) max {worst_homog:.2e} (< 1e-12)")
    assert ok


def test_riccati_lift():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        alpha, beta, A, B = positive_uniform(rng, 4)
        x0 = float(positive_uniform(rng))
        direct = iterate(SystemSpec([alpha], [[beta]], [A], [[B]]), [x0], 100)
        lifted = lift_riccati(alpha, beta, A, B, x0).ratios(100)
        assert len(direct) == 101
        worst = max(worst, float(relative_change(lifted, direct.states[:, 0]).max()))
    golden = lift_riccati(1, 1, 0, 1, 1.0).ratios(100)[-1]
    golden_err = abs(golden - (1 + math.sqrt(5)) / 2)
    ok = worst < 1e-12 and golden_err < 1e-10
    record("3 Riccati lift", ok, f"100 draws, max relative gap {worst:.2e} (< 1e-12); "
           f"golden case error {golden_err:.2e} at n=100 (< 1e-10)")
    assert ok


def test_example2_reproduction():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    worst_sim, worst_id, not_point = 0.0, 0.0, 0
    for _ in range(500):
        p = Example2Params(*positive_uniform(rng, 5))
        lim = example2_limits(p)
        orbit = iterate(example2_system(p), positive_uniform(rng, 3), 10_000,
                        until=ConvergencePolicy())
        report = detect_limit(orbit)
        if report.behavior is not Behavior.CONVERGED_POINT:
            not_point += 1
            continue
        worst_sim = max(worst_sim, float(relative_change(report.limit, [lim.x, lim.y, lim.z]).max()))
        worst_id = max(worst_id,
                       float(relative_change(lim.x, lim.u * lim.y / lim.v)),
                       float(relative_change(example2_second_order(p, lim.u, lim.u), lim.u)))
    elapsed = time.perf_counter() - start
    ok = not_point == 0 and worst_sim < 1e-6 and worst_id < 1e-12 and elapsed < 60
    record("4 hyperbolic 3D limits", ok, f"500 draws, {not_point} not ConvergedPoint, "
           f"simulated vs closed form {worst_sim:.2e} (< 1e-6), identities {worst_id:.2e} "
           f"(< 1e-12), {elapsed:.1f} s (< 60 s)")
    assert ok


def _to_zero(orbit) -> bool:
    last = orbit.states[-1]
    return bool(last[0] < 1e-6 and last[1] < 1e-6 and last[2] > 1e6)


def test_example3_reproduction():
    checks = {}
    p = Example3Params(0.01, 0.01, 0.01)
    res = example3_analyze(p)
    checks["bistable"] = res.case is Example3Case.BISTABLE and 0 < res.w1 < res.w2
    checks["P(roots)"] = all(abs(poly_eval(res.P, w)) <= 1e-10 * res.scale for w in res.roots)
    system = example3_system(p)

    # ToZero from w1/2
    w0 = res.w1 / 2
    orbit = iterate(system, [w0 / 2, w0 / 2, 1.0], 10_000)
    checks["ToZero"] = example3_basin(res, w0) is Basin.TO_ZERO and _to_zero(orbit)
    # AtW1 by one exact step of the original map
    x0 = example3_state_at_w1(res)
    lim_w1 = example3_limits(res, (x0[0] + x0[1]) / x0[2])
    sub = float(relative_change(step(system, x0), lim_w1).max())
    checks["AtW1"] = example3_basin(res, res.w1) is Basin.AT_W1 and sub < 1e-6
    # ToW2 from 2 w1 and from 1
    dev_w2 = 0.0
    for w0 in (2 * res.w1, 1.0):
        report = detect_limit(iterate(system, [w0 / 2, w0 / 2, 1.0], 10_000))
        ok = example3_basin(res, w0) is Basin.TO_W2 and report.behavior is Behavior.CONVERGED_POINT
        checks[f"ToW2 from {w0:.3g}"] = ok
        if ok:
            dev_w2 = max(dev_w2, float(relative_change(report.limit, example3_limits(res, w0)).max()))
    checks["w2 limits"] = dev_w2 < 1e-6

    ext = example3_analyze(Example3Params(1, 1, 1))
    ext_orbit = iterate(example3_system(Example3Params(1, 1, 1)), [1, 1, 1], 10_000)
    checks["extinction"] = ext.case is Example3Case.EXTINCTION and _to_zero(ext_orbit)

    rng = np.random.default_rng(3)
    counts = {0: 0, 1: 0, 2: 0, 3: 0}
    mismatched = degenerate = 0
    for _ in range(1000):
        q = Example3Params(*np.exp(rng.uniform(math.log(1e-3), math.log(10), 3)))
        a = example3_analyze(q)
        if a.case is Example3Case.DEGENERATE_BOUNDARY:
            degenerate += 1
            continue
        found = positive_roots(a.P, extra=[a.w_m])
        counts[len(found)] += 1
        # independent count from the companion-matrix eigenvalues
        eig = np.roots(a.P)
        oracle = sum(1 for r in eig if r.real > 0 and abs(r.imag) <= 1e-9 * max(1.0, abs(r)))
        mismatched += (len(found) != oracle
                       or (len(found) == 2) != (a.case is Example3Case.BISTABLE))
    checks["dichotomy"] = counts[1] == counts[3] == 0 and mismatched == 0

    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    record("5 cubic basins", ok, f"roots {res.w1:.6g} < {res.w2:.6g}, AtW1 substitution {sub:.1e}, "
           f"ToW2 limits {dev_w2:.1e} (< 1e-6), extinction at n={len(ext_orbit) - 1}; "
           f"1000-draw root counts {counts[0]}x0/{counts[2]}x2/{counts[1] + counts[3]} other "
           f"({degenerate} degenerate skipped)" + (f"; failed {failed}" if failed else ""))
    assert ok


def test_example4_reproduction():
    rng = np.random.default_rng(4)
    worst, worst_z, bad = 0.0, 0.0, 0
    for _ in range(500):
        A, B, C, D = positive_uniform(rng, 4)
        z0 = float(positive_uniform(rng))
        p = Example4Params(A, B, C, D, z0)
        lim = example4_limits(p)
        orbit = iterate(example4_system(p), [*positive_uniform(rng, 2), z0], 10_000,
                        until=ConvergencePolicy())
        report = detect_limit(orbit)
        z = orbit.states[:, 2]
        worst_z = max(worst_z, float(np.abs(z[:-1] * z[1:] - 1).max()))
        if report.behavior is Behavior.CONVERGED_PERIOD2:
            even, odd = report.even, report.odd
        elif report.behavior is Behavior.CONVERGED_POINT:
            even = odd = report.limit
        else:
            bad += 1
            continue
        worst = max(worst, float(relative_change(even, lim.even).max()),
                    float(relative_change(odd, lim.odd).max()))
    one = example4_limits(Example4Params(*positive_uniform(rng, 4), z0=1.0))
    coincide = one.even == one.odd
    ok = bad == 0 and worst < 1e-8 and worst_z < 1e-12 and coincide
    record("6 period-2 limits", ok, f"500 draws, {bad} undecided, even/odd vs formulas {worst:.2e} "
           f"(< 1e-8), max |z_n z_n+1 - 1| {worst_z:.1e} (< 1e-12), z0=1 coincident: {coincide}")
    assert ok


def test_reduced_map_monotone_and_sign_pattern():
    rng = np.random.default_rng(5)
    grid = np.geomspace(1e-6, 1e3, 2000)
    h = 1e-6
    instances = [Example3Params(0.01, 0.01, 0.01)]
    while len(instances) < 20:
        q = Example3Params(*np.exp(rng.uniform(math.log(1e-3), math.log(1), 3)))
        if example3_analyze(q).case is Example3Case.BISTABLE:
            instances.append(q)
    non_increasing = wrong_sign = 0
    margin = 1e-6
    for q in instances:
        f = lambda w: example3_reduced_map(q, w)  # noqa: E731
        non_increasing += sum((f(w + h) - f(w)) / h <= 0 for w in grid)
        res = example3_analyze(q)
        w1, w2 = res.roots
        intervals = [(np.geomspace(w1 * 1e-6, w1 * (1 - margin), 1000), -1),
                     (np.geomspace(w1 * (1 + margin), w2 * (1 - margin), 1000), 1),
                     (np.geomspace(w2 * (1 + margin), w2 * 1e3, 1000), -1)]
        for points, sign in intervals:
            wrong_sign += sum(np.sign(f(w) - w) != sign for w in points)
    ok = non_increasing == 0 and wrong_sign == 0
    record("7 monotone map", ok, f"{len(instances)} bistable instances, {non_increasing} "
           f"non-positive slopes on [1e-6, 1e3], {wrong_sign} sign mismatches in 3x1000 points each")
    assert ok


def _cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "projective_rational", *args],
                          capture_output=True, cwd=cwd)


def test_cli_contract(tmp_path):
    checks = {}
    rng = np.random.default_rng(8)
    exact = True
    for cls in PROJECTIVE_CLASSES:
        for k in (1, 2, 5):
            spec = random_spec(rng, cls, k)
            x0 = positive_uniform(rng, k)
            back, x0_back = parse_spec(dump_spec(spec, x0))
            exact &= all(getattr(back, n).tobytes() == getattr(spec, n).tobytes()
                         for n in ("alpha", "beta", "A", "B")) and x0_back.tobytes() == x0.tobytes()
    checks["round trip"] = exact

    homog = tmp_path / "homog.json"
    homog.write_text(dump_spec(SystemSpec([0, 0], [[1, 2], [3, 4]], [0, 0], [[1, 1], [2, 1]]),
                               [1, 1]))
    mixed = tmp_path / "mixed.json"
    mixed.write_text(dump_spec(SystemSpec([1, 0], [[1, 2], [3, 4]], [0, 0], [[1, 1], [2, 1]])))
    bad = tmp_path / "bad.json"
    bad.write_text('{"k": 2, "alpha": [0, 0], "beta": [[1, 2, 3], [3, 4, 5]], '
                   '"A": [0, 0], "B": [[1, 1], [2, 1]]}')
    codes = {
        "classify ok": (_cli("classify", str(homog)).returncode, 0),
        "classify non-projective": (_cli("classify", str(mixed)).returncode, 2),
        "malformed": (_cli("classify", str(bad)).returncode, 1),
        "missing file": (_cli("classify", str(tmp_path / "none.json")).returncode, 1),
        "degenerate": (_cli("analyze", "ex3", "--alpha", "1.727157287525381", "--A1", "0.01",
                            "--A2", "0.01").returncode, 3),
        "simulate": (_cli("simulate", str(homog), "--steps", "50").returncode, 0),
    }
    checks["exit codes"] = all(got == want for got, want in codes.values())
    checks["malformed names beta"] = b"beta" in _cli("classify", str(bad)).stderr

    grid = ["--alpha", "0.001", "2", "6", "--A1", "0.001", "2", "5", "--A2", "0.001", "2", "5",
            "--log"]
    one = _cli("sweep", *grid, "--workers", "1").stdout
    four = _cli("sweep", *grid, "--workers", "4").stdout
    checks["sweep determinism"] = one == four and one.count(b"\n") == 151

    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    record("8 CLI contract", ok, "round trip bit-exact: {}, exit codes {}, sweep 150 rows "
           "identical across 1 and 4 workers: {}".format(
               checks["round trip"], {k: g for k, (g, _) in codes.items()},
               checks["sweep determinism"]) + (f"; failed {failed}" if failed else ""))
    assert ok
