"""Acceptance gate: ten headline checks freezing the quantitative contract.

Each test covers one numbered criterion, prints a single PASS/FAIL verdict
line with the measured figures (written past the capture plumbing, so the
lines always reach the terminal), and asserts the stated tolerance and the
runtime budget.  Oracles are closed forms computed in-test, independently of
the library code under test.
"""

import json
import sys
import time

import numpy as np
import pytest
from scipy.integrate import quad

import _verdicts

from hilbert_lab.bodies import Ball
from hilbert_lab.cli import main as cli_main
from hilbert_lab.convergence import (
    concentric_disks,
    density_convergence,
    norm_ratio_field,
    smoothed_cylinders,
)
from hilbert_lab.directions import sphere_grid
from hilbert_lab.gallery import cylinder, regression_suite, unit_disk
from hilbert_lab.hyperbolicity import delta_probe
from hilbert_lab.john import sandwich_check
from hilbert_lab.localgeom import (
    STEP1_GAP_LOWER,
    center_chord_bound,
    chord_bound,
    theorem12_suite,
)
from hilbert_lab.measure import density_batch
from hilbert_lab.metric import (
    finsler_norm_batch,
    hilbert_distance,
    hilbert_distance_pairs,
    ray_point_param,
)
from hilbert_lab.spectrum import (
    SPECTRAL_LOWER_BOUND,
    cheeger_quotient,
    cylinder_sandwich,
    fact2_check,
    minimize_rayleigh,
)


def _verdict(num, label, ok, detail):
    line = f"criterion {num:02d} {label:<24s} {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    _verdicts.LINES.append(line)
    return ok


def test_criterion_01_klein_oracles():
    t0 = time.time()
    rng = np.random.default_rng(20260823)
    dist_err = 0.0
    for n in (2, 3):
        body = Ball(n)
        V = rng.standard_normal((500, n))
        V /= np.linalg.norm(V, axis=1, keepdims=True)
        r = 0.9999 * rng.random(500) ** (1.0 / n)
        d = hilbert_distance_pairs(body, np.zeros((500, n)), r[:, None] * V)
        dist_err = max(dist_err, float(np.abs(d - np.arctanh(r)).max()))
    th = np.linspace(0.0, 2 * np.pi, 40, endpoint=False)
    rr = np.linspace(0.0, 0.95, 25)
    R, T = np.meshgrid(rr, th)
    pts = np.stack([R.ravel() * np.cos(T.ravel()), R.ravel() * np.sin(T.ravel())], axis=1)
    vals, _ = density_batch(Ball(2), pts)
    exact = (1.0 - R.ravel() ** 2) ** -1.5
    dens_err = float(np.abs(vals / exact - 1.0).max())
    dt = time.time() - t0
    ok = dist_err <= 1e-10 and dens_err <= 1e-3 and dt < 10.0
    assert _verdict(
        1, "klein-oracles", ok, f"dist {dist_err:.1e}<=1e-10, density {dens_err:.1e}<=1e-3, {dt:.1f}s"
    )


def test_criterion_02_metric_axioms():
    t0 = time.time()
    sym = tri = add = 0.0
    for bi, (label, body) in enumerate(regression_suite().items()):
        rng = np.random.default_rng(1000 + bi)
        n = body.dim
        p0 = body.interior_point()
        for _ in range(125):
            X = []
            for _ in range(3):
                v = rng.standard_normal(n)
                v /= np.linalg.norm(v)
                ch = body.chord(p0, v)
                t = ray_point_param(ch.t_minus, ch.t_plus, 2.5 * rng.random())
                X.append(p0 + t * v)
            x, y, z = X
            dxy = hilbert_distance(body, x, y)
            sym = max(sym, abs(dxy - hilbert_distance(body, y, x)))
            tri = max(
                tri, hilbert_distance(body, x, z) - dxy - hilbert_distance(body, y, z)
            )
            m = x + rng.random() * (y - x)
            add = max(
                add,
                abs(hilbert_distance(body, x, m) + hilbert_distance(body, m, y) - dxy),
            )
    dt = time.time() - t0
    worst = max(sym, tri, add)
    ok = worst < 1e-9 and dt < 60.0
    assert _verdict(
        2, "metric-axioms", ok,
        f"sym {sym:.1e}, tri {tri:.1e}, additivity {add:.1e} (<1e-9), {dt:.0f}s",
    )


def test_criterion_03_local_geometry_bounds():
    t0 = time.time()
    # the dimension-only thresholds the reports compare against
    assert STEP1_GAP_LOWER >= 0.0090744
    assert abs(center_chord_bound(2) - 3.0 * np.sqrt(2.0)) < 1e-12
    assert abs(chord_bound(2) - 668.25) < 0.05
    assert abs(chord_bound(3) - 1000.4) < 0.05
    suite = theorem12_suite()
    n_reports = sum(len(reps) for reps in suite.values())
    bad = [
        (label, i)
        for label, reps in suite.items()
        for i, r in enumerate(reps)
        if not r.passed
    ]
    min_d0 = min(r.d0 for reps in suite.values() for r in reps)
    dt = time.time() - t0
    ok = not bad and n_reports >= 5 * len(suite) and dt < 600.0
    assert _verdict(
        3, "local-geometry-bounds", ok,
        f"{n_reports} reports on {len(suite)} bodies, min d0 {min_d0:.4f}"
        f">={STEP1_GAP_LOWER:.7f}, failures {bad}, {dt:.0f}s",
    )


def test_criterion_04_john_sandwich():
    t0 = time.time()
    covers = {}
    ok = True
    for label, body in regression_suite().items():
        rep = sandwich_check(body)
        covers[label] = rep.cover_factor
        bound = np.sqrt(body.dim) if rep.symmetric else float(body.dim)
        ok &= rep.contained and rep.cover_factor <= bound + 1e-3
    sq = abs(covers["square"] - np.sqrt(2.0))
    tr = abs(covers["triangle"] - 2.0)
    ok &= sq <= 1e-4 and tr <= 1e-3
    dt = time.time() - t0
    ok &= dt < 60.0
    assert _verdict(
        4, "john-sandwich", ok,
        f"square |cover-sqrt2| {sq:.1e}<=1e-4, triangle |cover-2| {tr:.1e}<=1e-3, {dt:.0f}s",
    )


def test_criterion_05_cylinder_sandwich():
    t0 = time.time()
    rep = cylinder_sandwich(samples=10**5, seed=0, heights=np.linspace(-0.9, 0.9, 7))
    lo, hi = 2.0 / 3.0 - 0.05, 8.0 + 0.05
    grid_ok = rep.ratios.shape == (7, 5)
    within = bool(np.all((rep.ratios >= lo) & (rep.ratios <= hi)))
    # fact1 recomputed here: the axial Finsler norm times (1 - t^2) is 1,
    # independently of the base point q
    cyl = cylinder()
    tgrid = np.linspace(-0.9, 0.9, 9)
    qs = np.array([[0.0, 0.0], [0.4, 0.0], [0.0, -0.55], [0.3, 0.3]])
    P = np.array([[qx, qy, t] for qx, qy in qs for t in tgrid])
    F = finsler_norm_batch(cyl, P, np.tile([0.0, 0.0, 1.0], (len(P), 1)))
    prod = (F * (1.0 - P[:, 2] ** 2)).reshape(len(qs), len(tgrid))
    fact1_defect = float(np.abs(prod - 1.0).max())
    q_spread = float((prod.max(axis=0) - prod.min(axis=0)).max())
    f2a = fact2_check(1.0, 1.0)
    f2b = fact2_check(1.0, 3.0, width=12.0)
    cap_err = max(
        abs(f2a.cap_height - 1.0), abs(f2b.cap_height - 1.5), f2a.max_defect, f2b.max_defect
    )
    dt = time.time() - t0
    ok = (
        grid_ok
        and within
        and fact1_defect < 1e-9
        and q_spread < 1e-9
        and cap_err < 1e-6
        and dt < 600.0
    )
    assert _verdict(
        5, "cylinder-sandwich", ok,
        f"ratios [{rep.ratios.min():.3f},{rep.ratios.max():.3f}] in [{lo:.3f},{hi:.2f}], "
        f"fact1 {fact1_defect:.1e}, q-spread {q_spread:.1e}, caps {cap_err:.1e}, {dt:.0f}s",
    )


def _disk_radial_quotient(rate, R):
    """Brute-force 1-D quadrature of the exponential trial's quotient: the
    hyperbolic plane has circumference 2 pi sinh(rho) at Hilbert radius rho."""
    num = quad(lambda u: rate**2 * np.exp(-2 * rate * u) * np.sinh(u), 0.0, R)[0]
    den = quad(lambda u: np.exp(-2 * rate * u) * np.sinh(u), 0.0, R)[0]
    return num / den


def test_criterion_06_spectral_benchmarks():
    t0 = time.time()
    res = minimize_rayleigh(
        unit_disk(), np.zeros(2), 12.0, family="exponential", samples=2**14, seed=5
    )
    q = res.estimate.quotient
    window_ok = 0.24 <= q <= 0.30
    oracle_ok = True
    worst_z = 0.0
    for trf, est in res.history:
        rate = -float(trf.slope(np.zeros(1))[0])
        z = abs(est.quotient - _disk_radial_quotient(rate, trf.radius)) / est.stderr
        worst_z = max(worst_z, z)
        oracle_ok &= z <= 3.0
    resc = minimize_rayleigh(
        cylinder(), np.zeros(3), 3.0, family="exponential", rates=(0.5, 1.0, 1.5),
        budget=3, samples=2**12, density_samples=512, seed=3,
    )
    margin = min(
        est.quotient - (SPECTRAL_LOWER_BOUND - 3.0 * est.stderr) for _, est in resc.history
    )
    dt = time.time() - t0
    ok = window_ok and oracle_ok and margin >= 0.0 and dt < 600.0
    assert _verdict(
        6, "spectral-benchmarks", ok,
        f"disk min {q:.4f} in [0.24,0.30], worst |z| {worst_z:.2f}<=3, "
        f"cylinder margin {margin:+.3f}>=0, {dt:.0f}s",
    )


def test_criterion_07_cheeger_proxy():
    t0 = time.time()
    disk = unit_disk()
    rels = {}
    for R in (1.0, 2.0, 5.0):
        est = cheeger_quotient(disk, np.zeros(2), R, eps=0.1, samples=2**15, seed=11)
        orc = 1.0 / np.tanh(R / 2.0)
        rels[R] = abs(est.quotient - orc) / orc
    worst = max(rels.values())
    dt = time.time() - t0
    ok = worst <= 0.05 and dt < 300.0
    assert _verdict(
        7, "cheeger-proxy", ok,
        "rel err " + ", ".join(f"R={R:g}: {e:.2%}" for R, e in rels.items())
        + f" (<=5%), {dt:.0f}s",
    )


def test_criterion_08_convergence_families():
    t0 = time.time()
    # concentric disks against the closed-form norm ratio of nested round disks
    members, disk = concentric_disks()
    pts = np.array([[0.0, 0.0], [0.3, 0.1], [-0.5, 0.45], [0.75, 0.0], [0.0, -0.75]])
    dirs = sphere_grid(2, 32)
    ks = (1, 2, 4, 8, 16)
    oracle_gap = 0.0
    deficits = []
    for k, m in zip(ks, members):
        f = norm_ratio_field(disk, m, pts, dirs)
        s = 1.0 + 1.0 / k
        best = np.inf
        for x in pts:
            for v in dirs:
                xv, x2 = float(x @ v), float(x @ x)
                Fs = np.sqrt(xv * xv + s * s - x2) / (s * s - x2)
                F1 = np.sqrt(xv * xv + 1.0 - x2) / (1.0 - x2)
                best = min(best, Fs / F1)
        oracle_gap = max(oracle_gap, abs((1.0 - f.min_ratio) - (1.0 - best)))
        deficits.append(1.0 - f.min_ratio)
    disks_monotone = bool(np.all(np.diff(deficits) < 0.0))
    rep_d = density_convergence(members, disk, pts, directions=dirs, samples=2048, seed=0)

    # smoothed cylinders: per-point norm ratios must improve along the family
    mems3, base = smoothed_cylinders((8, 16, 32, 64))
    pts3 = np.array([[0.0, 0.0, 0.0], [0.35, 0.0, 0.3], [0.0, 0.5, -0.4]])
    M = np.array([norm_ratio_field(base, m, pts3).ratios.min(axis=1) for m in mems3])
    per_point = bool(np.all(np.diff(M, axis=0) >= -1e-9))
    rep_c = density_convergence(mems3, base, pts3, samples=8192, seed=0)
    final_dev = float(rep_c.deviations[-1])
    dt = time.time() - t0
    ok = (
        oracle_gap <= 1e-3
        and disks_monotone
        and rep_d.monotone
        and per_point
        and final_dev < 0.1
        and dt < 600.0
    )
    assert _verdict(
        8, "convergence-families", ok,
        f"disk deficit vs oracle {oracle_gap:.1e}<=1e-3 monotone={disks_monotone}, "
        f"cylinder per-point M nondecr={per_point} final dev {final_dev:.3f}<0.1, {dt:.0f}s",
    )


def test_criterion_09_hyperbolicity_separation():
    t0 = time.time()
    d_disk = delta_probe(unit_disk(), scales=(2.0, 6.0), quadruples=10**4, seed=42)
    d_cyl = delta_probe(cylinder(), scales=(2.0, 6.0), quadruples=10**4, seed=42)
    g_disk = d_disk.deltas[1] - d_disk.deltas[0]
    g_cyl = d_cyl.deltas[1] - d_cyl.deltas[0]
    dt = time.time() - t0
    ok = g_disk <= 1.0 and g_cyl >= 0.5 and dt < 300.0
    assert _verdict(
        9, "hyperbolicity-separation", ok,
        f"disk growth {g_disk:+.3f}<=1.0, cylinder growth {g_cyl:+.3f}>=0.5, {dt:.0f}s",
    )


def test_criterion_10_cli_reproducibility(tmp_path):
    t0 = time.time()
    disk_path = tmp_path / "disk.json"
    disk_path.write_text(json.dumps({"type": "ball", "dim": 2}))
    cyl_path = tmp_path / "cylinder.json"
    cyl_path.write_text(
        json.dumps({"type": "product", "factors": [{"type": "ball", "dim": 2}, {"type": "ball", "dim": 1}]})
    )
    runs = (
        ["cheeger", "--body", str(disk_path), "--radius", "1", "--samples", "4096",
         "--seed", "9", "--out"],
        ["delta", "--body", str(cyl_path), "--scales", "1,4", "--quadruples", "500",
         "--seed", "9", "--format", "csv", "--out"],
        ["cylinder", "--tgrid", "-0.6:0.6:3", "--samples", "2000", "--seed", "9", "--out"],
    )
    identical = True
    for i, argv in enumerate(runs):
        a, b = tmp_path / f"r{i}a.out", tmp_path / f"r{i}b.out"
        code_a = cli_main(argv + [str(a)])
        code_b = cli_main(argv + [str(b)])
        identical &= code_a == code_b and a.read_bytes() == b.read_bytes()
    dt = time.time() - t0
    ok = identical and dt < 300.0
    assert _verdict(
        10, "cli-reproducibility", ok,
        f"{len(runs)} commands rerun byte-identical={identical}, {dt:.0f}s",
    )


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
