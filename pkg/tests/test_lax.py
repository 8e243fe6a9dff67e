import math

import numpy as np
import pytest

from phaselock.lax import (
    IsoFamily,
    Tolerances,
    family_at,
    g3_over_g1,
    isomonodromy_drift,
    loop_monodromy,
    monodromy_matrix_drift,
    specialize_at_pole,
    t_equation,
    z_equation,
    zero_curvature_report,
    zero_curvature_residual,
    zero_curvature_residual_maps,
)
from phaselock.specfun import BesselCombo, u_eval


def _fam(b=0.5, y0=0.0, **kw):
    return IsoFamily(b=b, combo=BesselCombo(order=b, mix=y0), **kw)


def test_projector_spectrum_and_b_trace():
    fam = _fam(b=1.0, C1_tilde=1.0)
    for t in (0.4, 1.0, 2.0):
        c = family_at(fam, t)
        eig = np.sort(np.linalg.eigvals(c.A).real)
        assert abs(eig[0]) < 1e-12 and abs(eig[1] - 0.5) < 1e-12
        assert abs(np.trace(c.A) - 0.5) < 1e-12
        assert abs(np.linalg.det(c.A)) < 1e-12
        assert abs(np.trace(c.B) + fam.b) < 1e-10


def test_lower_corner_closed_form_at_a_cell_boundary():
    # combo (1/2, 0): the lower-corner ratio is C1_tilde * u(sqrt(t));
    # at t = (pi/2)^2 that is sqrt(2/pi) * sin(pi/2) even though the full
    # coefficient assembly is singular there (zero of u')
    fam = _fam(C1_tilde=1.0)
    t = (math.pi / 2) ** 2
    assert abs(g3_over_g1(fam, t) - math.sqrt(2.0 / math.pi)) < 1e-12
    with pytest.raises(ValueError, match="singular point"):
        family_at(fam, t)


def test_z_equation_structure():
    fam = _fam(b=1.0)
    t = 1.3
    coeff = z_equation(fam, t)
    c = family_at(fam, t)
    for z in (0.8, 2.0 + 1.0j):
        M = coeff(z)
        # 1/z^2 coefficient is -t A, constant term diag(-1/2, 0)
        recon = -(t / z**2) * c.A + c.B / z + np.diag([-0.5, 0.0])
        assert np.max(np.abs(M - recon)) < 1e-14
    with pytest.raises(ValueError):
        coeff(0.0)


def test_t_equation_structure():
    fam = _fam(b=1.0)
    coeff = t_equation(fam, 1.3)
    M = coeff(2.0)
    assert abs(np.trace(M) - 1.0 / (2 * 2.0)) < 1e-14
    assert abs(np.linalg.det(M)) < 1e-16


def test_b2_continuation_matches_its_closed_form():
    # the continued upper corner solves b2' = -b2/(2 y); in closed form that
    # is C * s^(1-2b) * u'(s) with s = sqrt(t) and C fixed by the anchor —
    # an independent route to the same coefficient
    cases = [
        (0.5, 0.0, (0.3, 0.8, 1.4, 2.0)),
        (1.0, 0.3, (0.3, 0.8, 1.4, 2.0)),
        (0.0, 0.5, (0.3, 0.5, 0.8)),  # first cell ends near t = 0.878
    ]
    for b, y0, t_samples in cases:
        fam = IsoFamily(b=b, combo=BesselCombo(order=b, mix=y0), t_ref=0.25)
        s_ref = math.sqrt(fam.t_ref)
        _, du_ref = u_eval(fam.combo, s_ref)
        scale = fam.b2_0 / (s_ref ** (1 - 2 * b) * du_ref)
        for t in t_samples:
            s = math.sqrt(t)
            _, du = u_eval(fam.combo, s)
            closed = scale * s ** (1 - 2 * b) * du
            assert abs(family_at(fam, t).b2 - closed) < 1e-11


def test_flatness_on_the_reference_grid():
    fam = _fam()
    res = zero_curvature_residual(fam, [1.0, 2j, -1.5], [1.0, 2.0, 3.0])
    assert res < 1e-6


def test_flatness_across_orders_and_mixes():
    for b in (0.0, 0.5, 1.0):
        for y0 in (0.0, 0.5):
            fam = IsoFamily(b=b, combo=BesselCombo(order=b, mix=y0))
            res, excluded = zero_curvature_report(fam, [0.7, 1.3, 2.6], [1.0, 2.0, 3.0])
            assert excluded == []
            assert res < 1e-6


def test_broken_b2_is_not_flat():
    # replacing b2 by a constant violates the compatibility relation
    fam = _fam(b=1.0, C1_tilde=1.0)

    def broken_z(t, z):
        c = family_at(fam, t)
        B = c.B.copy()
        B[0, 1] = 0.7  # constant instead of the continued b2(t)
        return -(t / z**2) * c.A + B / z + np.diag([-0.5, 0.0])

    def mt(t, z):
        return t_equation(fam, t)(z)

    res = zero_curvature_residual_maps(broken_z, mt, [1.0, 2.0], [1.0, 1.5])
    assert res > 1e-2


def test_full_off_diagonal_family_is_not_flat():
    # with both triangular corners active the compatibility bracket picks up
    # the obstruction b2 * g3 != 0
    fam = _fam(b=1.0, C1_tilde=1.0)
    res, excluded = zero_curvature_report(fam, [0.7, 1.6], [0.8, 1.4])
    assert excluded == []
    assert res > 1e-1


def test_commuting_diagonal_family_has_exactly_zero_residual():
    A = np.diag([0.5, 0.0])

    def mz(t, z):
        return -(1.0 / z**2) * A + np.diag([-0.5, 0.0])

    def mt(t, z):
        return np.zeros((2, 2), dtype=complex)

    res = zero_curvature_residual_maps(mz, mt, [0.9, 1.7], [1.0, 2.0])
    assert res == 0.0


def test_loop_trace_constant_across_a_decade():
    fam = _fam()
    drift = isomonodromy_drift(fam, [1.0, 2.25, 4.0])
    assert drift < 1e-5
    decade = isomonodromy_drift(fam, [1.0, 3.25, 5.5, 7.75, 10.0])
    assert decade < 1e-5


def test_single_time_has_zero_drift():
    fam = _fam()
    assert isomonodromy_drift(fam, [1.7]) == 0.0


def test_loop_trace_matches_the_residue_exponents():
    # triangular family: tr M = e^{-2 pi i b} + 1 independently of t
    for b in (0.0, 0.5, 1.0, 1.7):
        fam = IsoFamily(b=b, combo=BesselCombo(order=b, mix=0.0))
        M = loop_monodromy(z_equation(fam, 1.2), radius=1.0,
                           tol=Tolerances(abs_tol=1e-12, rel_tol=1e-12))
        expected = np.exp(-2j * math.pi * b) + 1.0
        assert abs(np.trace(M) - expected) < 1e-8


def test_broken_b2_drifts_when_both_corners_are_active():
    # negative control for the drift criterion: constant b2 with the lower
    # corner switched on moves the loop trace across t
    fam = _fam(b=1.0, C1_tilde=1.0)

    def broken_coeff_at(t):
        c = family_at(fam, t)
        B = c.B.copy()
        B[0, 1] = 0.7

        def coeff(z):
            return -(t / z**2) * c.A + B / z + np.diag([-0.5, 0.0])

        return coeff

    tol = Tolerances(abs_tol=1e-10, rel_tol=1e-10)
    traces = [np.trace(loop_monodromy(broken_coeff_at(t), radius=1.0, tol=tol))
              for t in (1.0, 2.25, 4.0)]
    assert max(abs(tr - traces[0]) for tr in traces) > 1e-2


def test_matrix_entries_are_frame_sensitive_but_trace_is_not():
    # entrywise drift is allowed to be large for a flat family; the trace
    # drift is the invariant statement
    fam = _fam()
    t_list = [1.0, 2.25, 4.0]
    assert isomonodromy_drift(fam, t_list) < 1e-5
    assert monodromy_matrix_drift(fam, t_list) > 1e-2


def test_specialization_at_a_pole_recovers_the_triangular_system():
    fam = _fam(C1_tilde=1.0)
    t_star = math.pi**2
    ps = specialize_at_pole(fam, t_star)
    # A(t*) = diag(1/2, 0) appears as the -t*/(2 z^2) top entry only
    z = 1.7
    M = ps.system(z)
    assert abs(M[0, 0] - (-t_star / (2 * z**2) - fam.b / z - 0.5)) < 1e-12
    assert abs(M[0, 1] - ps.b2_star / z) < 1e-15
    assert abs(M[1, 0] - ps.b3_star / z) < 1e-15
    assert M[1, 1] == 0.0
    # closed form for the lower corner: (du/dt) * t * C1_tilde at t*
    s_star = math.pi
    _, du = u_eval(fam.combo, s_star)
    assert abs(ps.b3_star - 0.5 * s_star * du) < 1e-12
    assert ps.b3_star != 0.0


def test_specialization_agrees_with_two_sided_limit():
    # b2 g3 / (g1 h) approaches b3(t*) from both sides; the ratio does not
    # depend on the per-cell b2 normalization, so any anchor inside the
    # cell containing t* works
    t_star = math.pi**2
    ps = specialize_at_pole(_fam(C1_tilde=1.0), t_star)
    fam = _fam(C1_tilde=1.0, t_ref=9.0)
    for dt in (1e-4, -1e-4):
        c = family_at(fam, t_star + dt)
        ratio = c.b2 * c.g3_over_g1 / c.h
        assert abs(ratio - ps.b3_star) < 1e-5


def test_specialization_rejects_non_poles_and_double_zeros():
    fam = _fam(C1_tilde=1.0)
    with pytest.raises(ValueError, match="not .*zero|no zero|not a recorded"):
        specialize_at_pole(fam, 2.0)


def test_rescaled_specialization_matches_the_junction_normal_form():
    # z = a* zeta turns the specialized system into the junction shape:
    # 1/zeta^2 coefficient and constant term both diag(-a*/2, 0)
    fam = _fam(C1_tilde=1.0)
    t_star = math.pi**2
    a_star = math.sqrt(t_star)
    ps = specialize_at_pole(fam, t_star)

    def rescaled(zeta):
        return a_star * ps.system(a_star * zeta)

    for zeta in (0.9, 1.8):
        M = rescaled(zeta)
        recon = (np.diag([-a_star / 2, 0.0]) / zeta**2
                 + np.array([[-fam.b, ps.b2_star], [ps.b3_star, 0.0]]) / zeta
                 + np.diag([-a_star / 2, 0.0]))
        assert np.max(np.abs(M - recon)) < 1e-12


def test_family_guards_its_domain():
    fam = _fam()
    with pytest.raises(ValueError):
        family_at(fam, -1.0)
    # crossing the first zero of u' from the anchor cell
    with pytest.raises(RuntimeError, match="singular locus"):
        family_at(fam, 4.0)
    with pytest.raises(ValueError):
        IsoFamily(b=0.5, combo=BesselCombo(order=0.5, mix=0.0), b2_0=0.0)
    with pytest.raises(ValueError):
        IsoFamily(b=0.5, combo=BesselCombo(order=0.5, mix=0.0), t_ref=-0.2)
