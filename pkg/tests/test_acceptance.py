"""Acceptance gate: ten end-to-end criteria, one test (= one pass/fail
line under ``pytest -v``) per criterion.  Each test also prints a one-line
summary with the measured margin (visible with ``pytest -s``).

The criteria exercise every layer of the package against independent
routes: determinant/trace invariants of the loop matrix, closed-form
limits, special-function identities, symmetry properties, and the chained
identity points that are the package's central reproducible claim.
"""

import math
import time

import numpy as np
from scipy.linalg import expm

from phaselock.adjacency import chain, find_seed, verify_point
from phaselock.lax import IsoFamily, isomonodromy_drift, zero_curvature_report
from phaselock.monodromy import eig_discriminant, monodromy_loop
from phaselock.painleve import bessel_w, p3_residual_report, params_from_b
from phaselock.rotation import (
    JosephsonParams,
    rho_axis_analytic,
    rotation_number,
    scan_grid,
    trace_boundary,
)
from phaselock.specfun import BesselCombo, bessel_pair, find_zeros


def _report(n, name, detail):
    print(f"criterion {n} ({name}): PASS — {detail}")


def test_criterion_01_liouville_determinant():
    rng = np.random.default_rng(20260814)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        b = rng.uniform(-3.0, 3.0)
        a = rng.uniform(0.0, 10.0)
        omega = rng.uniform(0.3, 3.0)
        M = monodromy_loop(JosephsonParams(b=b, a=a, omega=omega)).matrix
        defect = abs(np.linalg.det(M) - np.exp(-2j * np.pi * b))
        worst = max(worst, defect)
        assert defect < 1e-6, (b, a, omega, defect)
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    _report(1, "Liouville determinant", f"worst defect {worst:.2e} in {elapsed:.1f}s")


def test_criterion_02_euler_limit_oracle():
    pairs = [(0.3, 1.1), (0.75, 0.7), (1.3, 1.6), (1.9, 2.2), (2.4, 0.9),
             (-0.6, 1.4), (-1.3, 2.7), (0.15, 0.5), (1.02, 1.05), (2.8, 1.8)]
    assert len(pairs) == 10
    worst = 0.0
    for b, omega in pairs:
        A1 = np.array([[-b, 1.0 / (2j * omega)], [1.0 / (2j * omega), 0.0]])
        lam = np.linalg.eigvals(A1)
        d = lam[0] - lam[1]
        # non-resonant: the exponent difference is not a nonzero integer
        if abs(d.imag) < 1e-9:
            k = round(d.real)
            assert k == 0 or abs(d.real - k) > 0.02, (b, omega, d)
        M = monodromy_loop(JosephsonParams(b=b, a=0.0, omega=omega)).matrix
        defect = np.linalg.norm(M - expm(2j * np.pi * A1))
        worst = max(worst, defect)
        assert defect < 1e-6, (b, omega, defect)
    _report(2, "Euler limit", f"worst norm defect {worst:.2e} over 10 pairs")


def test_criterion_03_cotangent_solution():
    sol = bessel_w(BesselCombo(order=0.5, mix=0.0))
    params = params_from_b(0.5)
    taus = [t for t in np.linspace(0.3, 3.0, 55)
            if all(abs(t - k * math.pi) > 0.05 for k in range(2))]
    res, excluded = p3_residual_report(sol, params, taus,
                                       poles=list(sol.zeros.zeros))
    assert excluded == []
    assert res < 1e-7
    # Riccati specialization: w(tau) = cot(tau) exactly
    cot_err = max(abs(sol(t) - math.cos(t) / math.sin(t)) for t in taus)
    assert cot_err < 1e-12
    _report(3, "cotangent solution",
            f"residual {res:.2e}, cot match {cot_err:.2e}")


def test_criterion_04_pole_residues():
    worst = 0.0
    h = 1e-3
    for b in (0.0, 0.5, 1.0):
        for y0 in (0.0, 0.5):
            sol = bessel_w(BesselCombo(order=b, mix=y0))
            for tau_star in sol.zeros.zeros[:3]:
                # symmetric product cancels the even Laurent terms
                val = 0.5 * h * (sol(tau_star + h) - sol(tau_star - h))
                worst = max(worst, abs(val - 1.0))
                assert abs(val - 1.0) < 1e-4, (b, y0, tau_star, val)
    _report(4, "pole residues", f"worst |residue - 1| = {worst:.2e}")


def test_criterion_05_axis_oracle_and_symmetries():
    pairs = [(0.3, 1.0), (1.5, 1.0), (2.0, 1.0), (-2.0, 1.0), (1.0, 2.0),
             (0.5, 3.0), (-1.2, 0.8), (2.5, 0.6), (0.0, 1.7), (3.0, 2.5)]
    worst_axis = 0.0
    for b, omega in pairs:
        est = rotation_number(JosephsonParams(b, 0.0, omega), target=1e-9)
        defect = abs(est.rho - rho_axis_analytic(b, omega))
        worst_axis = max(worst_axis, defect)
        assert defect < 1e-6, (b, omega, defect)

    grid = scan_grid(np.linspace(-3.0, 3.0, 20), np.linspace(-5.0, 5.0, 20),
                     2.0, target=1e-6)
    even_defect = float(np.max(np.abs(grid.rho - grid.rho[:, ::-1])))
    odd_defect = float(np.max(np.abs(grid.rho + grid.rho[::-1, :])))
    assert even_defect < 2e-4
    assert odd_defect < 2e-4
    _report(5, "axis oracle + symmetries",
            f"axis {worst_axis:.2e}, a-even {even_defect:.2e}, "
            f"b-odd {odd_defect:.2e}")


def test_criterion_06_zero_curvature_and_isomonodromy():
    worst_zc, worst_drift = 0.0, 0.0
    for b in (0.0, 0.5, 1.0):
        fam = IsoFamily(b=b, combo=BesselCombo(order=b, mix=0.0))
        zc, excluded = zero_curvature_report(fam, [0.7, 1.3, 2.6],
                                             [1.0, 2.0, 3.0])
        assert excluded == []
        assert zc < 1e-6, (b, zc)
        drift = isomonodromy_drift(fam, [1.0, 3.25, 5.5, 7.75, 10.0])
        assert drift < 1e-5, (b, drift)
        worst_zc = max(worst_zc, zc)
        worst_drift = max(worst_drift, drift)
    _report(6, "zero curvature + isomonodromy",
            f"flatness {worst_zc:.2e}, trace drift {worst_drift:.2e}")


def test_criterion_07_adjacency_chain_end_to_end():
    t0 = time.perf_counter()
    worst = 0.0
    for omega in (1.0, 2.0):
        seed = find_seed(1.0, omega, (0.0, 15.0))
        assert seed.residual < 1e-3
        points = chain(seed, k_max=4)
        assert [p.k for p in points] == [0, 1, 2, 3, 4]
        for p in points:
            r = verify_point(1.0, p.a_star, p.omega_star)
            worst = max(worst, r)
            assert r < 1e-3, (omega, p.k, r)
    elapsed = time.perf_counter() - t0
    assert elapsed < 600.0
    _report(7, "adjacency chains",
            f"worst verification residual {worst:.2e} in {elapsed:.1f}s")


def test_criterion_08_boundary_eigenvalue_collision():
    a_samples = [4.0, 8.0, 12.0, 16.0, 20.0]
    worst = 0.0
    n_points = 0
    for r in (0, 1):
        curve = trace_boundary(r, "minus", a_samples, 2.0)
        assert not curve.missing
        for a, b in zip(curve.a_values, curve.b_values):
            d = abs(eig_discriminant(JosephsonParams(b=float(b), a=float(a),
                                                     omega=2.0)))
            worst = max(worst, d)
            n_points += 1
            assert d < 1e-2, (r, a, b, d)
    assert n_points == 10
    interior = abs(eig_discriminant(JosephsonParams(b=1.0, a=2.0, omega=2.0)))
    off_tongue = abs(eig_discriminant(JosephsonParams(b=0.5, a=4.0, omega=2.0)))
    assert interior >= 0.1
    assert off_tongue >= 0.1
    _report(8, "boundary collision",
            f"worst |disc| {worst:.2e}; controls {interior:.2f} / "
            f"{off_tongue:.2f}")


def test_criterion_09_boundary_bessel_asymptotics():
    deviations = []
    for a in (20.0, 40.0, 60.0):
        worst_r = 0.0
        for r in (0, 1):
            curve = trace_boundary(r, "minus", [a], 2.0)
            assert not curve.missing
            j = bessel_pair(float(r), a)[0]
            dev = abs(float(curve.b_values[0]) - r - j / 2.0) * math.sqrt(a)
            worst_r = max(worst_r, dev)
        deviations.append(worst_r)
    assert all(d < 0.05 for d in deviations)
    assert deviations[0] >= deviations[1] >= deviations[2]
    _report(9, "boundary asymptotics",
            "scaled deviations " + ", ".join(f"{d:.2e}" for d in deviations))


def test_criterion_10_special_function_base():
    rng = np.random.default_rng(7)
    worst_w, worst_rec = 0.0, 0.0
    for _ in range(200):
        nu = rng.uniform(-3.0, 3.0)
        s = rng.uniform(0.2, 30.0)
        j, y, dj, dy = bessel_pair(nu, s)
        w_defect = abs(j * dy - dj * y - 2.0 / (math.pi * s))
        worst_w = max(worst_w, w_defect)
        assert w_defect < 1e-9, (nu, s, w_defect)
        jm, ym, _, _ = bessel_pair(nu - 1.0, s)
        jp, yp, _, _ = bessel_pair(nu + 1.0, s)
        for lo, mid, hi in ((jm, j, jp), (ym, y, yp)):
            rec = abs(lo + hi - (2.0 * nu / s) * mid) / max(1.0, abs(mid))
            worst_rec = max(worst_rec, rec)
            assert rec < 1e-9, (nu, s, rec)

    # series-bisection oracle for the first three zeros of J_0
    def j0_series(x):
        term, total = 1.0, 1.0
        for m in range(1, 60):
            term *= -(x * x / 4.0) / (m * m)
            total += term
        return total

    oracle = []
    for lo, hi in ((2.0, 3.0), (5.0, 6.0), (8.0, 9.0)):
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if j0_series(lo) * j0_series(mid) <= 0:
                hi = mid
            else:
                lo = mid
        oracle.append(0.5 * (lo + hi))

    zeros = find_zeros(BesselCombo(order=0.0, mix=0.0), (1.0, 10.0)).zeros[:3]
    worst_zero = max(abs(z - o) for z, o in zip(zeros, oracle))
    assert worst_zero < 1e-5
    _report(10, "special-function base",
            f"Wronskian {worst_w:.2e}, recurrence {worst_rec:.2e}, "
            f"J0 zeros {worst_zero:.2e}")
