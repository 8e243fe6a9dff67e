import math

import numpy as np
import pytest
from scipy.optimize import brentq

from phaselock.adjacency import (
    AdjacencySeed,
    boundary_chain,
    chain,
    find_seed,
    omega_from_b2b3,
    seed_combo,
    seed_y0,
    symmetric_gauge,
    verify_point,
)
from phaselock.specfun import bessel_pair, u_eval

# identity points certified by the triviality residual (12-digit abscissas,
# frozen from high-tolerance runs of find_seed/chain)
SEED_A = {1.0: 4.045961142437, 2.0: 3.886693491405}
CHAIN_W1 = [0.808520628]  # omega* at the first zero above the omega=1 seed


def test_seed_mix_is_the_bessel_ratio():
    # u(a0) = J_b(a0) + y0 Y_b(a0) vanishes exactly when y0 = -J/Y
    for b, a0 in [(1.0, 4.0459611), (0.0, 2.2), (2.0, 6.1)]:
        y0 = seed_y0(b, a0)
        j, y, _, _ = bessel_pair(b, a0)
        assert abs(j + y0 * y) < 1e-14
        u, _ = u_eval(seed_combo(b, a0), a0)
        assert abs(u) < 1e-10


def test_half_integer_seed_mix_is_tangent():
    # J_{1/2} ~ sin, Y_{1/2} ~ -cos, so the ratio is tan(a0)
    for a0 in (0.6, 1.9, 4.2):
        assert abs(seed_y0(0.5, a0) - math.tan(a0)) < 1e-12


def test_seed_mix_at_special_zeros():
    # at a zero of J_b the mix vanishes; at a zero of Y_b it is flagged inf
    j0_zero = brentq(lambda s: bessel_pair(0.0, s)[0], 2.0, 3.0, xtol=1e-15)
    assert abs(seed_y0(0.0, j0_zero)) < 1e-12
    y0_zero = brentq(lambda s: bessel_pair(0.0, s)[1], 0.5, 1.5,
                     xtol=1e-15, rtol=8.9e-16)
    assert seed_y0(0.0, y0_zero) == math.inf
    u, _ = u_eval(seed_combo(0.0, y0_zero), y0_zero)
    assert abs(u) < 1e-12


def test_verify_point_at_certified_identity_points():
    for omega, a0 in SEED_A.items():
        assert verify_point(1.0, a0, omega) < 1e-6


def test_verify_point_rejects_zero_amplitude():
    with pytest.raises(ValueError):
        verify_point(1.0, 0.0, 1.0)


def test_half_integer_points_are_never_trivial():
    # the loop matrix stays a fixed distance from the identity for b = 1/2
    for a, omega in [(0.7, 1.0), (2.3, 0.8), (5.0, 1.5)]:
        assert verify_point(0.5, a, omega) >= 2.0


def test_small_amplitude_integer_points_are_not_trivial():
    assert verify_point(1.0, 1e-6, 1.0) > 0.1


def test_find_seed_reproduces_certified_abscissas():
    for omega, a_expected in SEED_A.items():
        seed = find_seed(1.0, omega, (0.0, 15.0))
        assert abs(seed.a0 - a_expected) < 1e-6
        assert seed.residual < 1e-3
        assert seed.b == 1.0 and seed.omega0 == omega


def test_find_seed_round_trip_through_the_chain():
    # the first chain point is itself an adjacency, so searching near it
    # at its own omega* must recover the same abscissa
    seed = find_seed(1.0, CHAIN_W1[0], (6.0, 8.0))
    assert abs(seed.a0 - 7.22654761) < 1e-3


def test_find_seed_input_validation():
    with pytest.raises(ValueError):
        find_seed(0.5, 1.0, (0.0, 15.0))  # non-integer order
    with pytest.raises(ValueError):
        find_seed(-1.0, 1.0, (0.0, 15.0))
    with pytest.raises(ValueError):
        find_seed(1.0, -2.0, (0.0, 15.0))
    with pytest.raises(ValueError):
        find_seed(1.0, 1.0, (5.0, 2.0))  # empty interval


def test_find_seed_reports_empty_windows():
    with pytest.raises(RuntimeError, match="no adjacency in range"):
        find_seed(1.0, 1.0, (0.3, 2.0))


def test_chain_head_is_the_seed():
    seed = AdjacencySeed(b=1.0, a0=SEED_A[1.0], omega0=1.0, residual=3.9e-12)
    points = chain(seed, k_max=1)
    assert points[0].k == 0
    assert points[0].a_star == seed.a0
    assert points[0].omega_star == seed.omega0
    assert points[0].verify_residual == seed.residual
    assert points[0].omega_formula == 1.0


def test_chain_matches_certified_continuation():
    seed = AdjacencySeed(b=1.0, a0=SEED_A[1.0], omega0=1.0, residual=3.9e-12)
    points = chain(seed, k_max=2)
    assert [p.k for p in points] == [0, 1, 2]
    expected_a = [4.04596114, 7.22654761, 10.38364361]
    expected_w = [1.0, 0.808520628, 0.704270390]
    for p, a_ref, w_ref in zip(points, expected_a, expected_w):
        assert abs(p.a_star - a_ref) < 1e-6
        assert abs(p.omega_star - w_ref) < 1e-6
        assert p.verify_residual < 1e-3
    assert all(q.a_star > p.a_star for p, q in zip(points, points[1:]))
    assert all(q.omega_star < p.omega_star for p, q in zip(points, points[1:]))


def test_chain_is_deterministic():
    seed = AdjacencySeed(b=1.0, a0=SEED_A[2.0], omega0=2.0, residual=4.2e-12)
    first = chain(seed, k_max=1)
    second = chain(seed, k_max=1)
    assert first == second


def test_chain_requires_at_least_one_step():
    seed = AdjacencySeed(b=1.0, a0=4.0, omega0=1.0, residual=1.0)
    with pytest.raises(ValueError):
        chain(seed, k_max=0)


def test_half_integer_chain_abscissas_are_exact():
    # for b = 1/2, y0 = 1 the zeros of u sit at pi/4 + k pi; the naive
    # derivative-ratio frequency update even goes negative, which is why it
    # is recorded as a diagnostic and never used as the continuation value
    a0 = math.pi / 4
    seed = AdjacencySeed(b=0.5, a0=a0, omega0=1.0, residual=2.8)
    points = chain(seed, k_max=2)
    for p in points:
        assert abs(p.a_star - (a0 + p.k * math.pi)) < 1e-10
    assert abs(points[1].omega_formula - (-0.2)) < 1e-9
    assert abs(points[2].omega_formula - (1.0 / 9.0)) < 1e-9


def test_frequency_from_off_diagonal_product():
    assert abs(omega_from_b2b3(0.5, -0.5) - 1.0) < 1e-14
    assert abs(omega_from_b2b3(0.25, -0.25) - 2.0) < 1e-14
    with pytest.raises(ValueError, match="no real omega"):
        omega_from_b2b3(1.0, 1.0)


def test_symmetric_gauge_examples():
    assert abs(symmetric_gauge(5.0, 5.0) - 1.0) < 1e-14
    assert abs(symmetric_gauge(1.0, 16.0) - 2.0) < 1e-14
    with pytest.raises(ValueError, match="no real symmetric gauge"):
        symmetric_gauge(1.0, -4.0)
    with pytest.raises(ValueError, match="no real symmetric gauge"):
        symmetric_gauge(0.0, 4.0)


def test_boundary_chain_empty_and_head():
    assert boundary_chain(1.02, 4.0, 2.0, k_max=0) == []


def test_boundary_chain_preserves_the_trace():
    # at a non-integer order on the tongue boundary the identity is out of
    # reach; the trace of the loop matrix is the quantity that continues.
    # The zeros of u locate the next abscissa only to leading order, so the
    # drift grows like (b - round(b))^2 with k; the first step stays under
    # 1e-3 and the eigenvalue collision persists to 1e-2 through k = 2.
    b_star = 1.0231262500764444
    points = boundary_chain(b_star, 4.0, 2.0, k_max=2)
    assert [p.k for p in points] == [0, 1, 2]
    assert points[0].trace_drift == 0.0
    assert points[1].trace_drift < 1e-3
    for p in points:
        assert abs(p.discriminant) < 1e-2
        assert p.trace_drift < 1e-2
    assert all(q.a_star > p.a_star for p, q in zip(points, points[1:]))


def test_boundary_chain_below_seed():
    # anchoring at the second zero and walking one step down recovers the
    # zero below the seed with a negative index
    b_star = 1.0231262500764444
    points = boundary_chain(b_star, 7.183765, 1.6, k_max=1,
                            include_below_seed=True)
    ks = [p.k for p in points]
    assert ks[0] < 0 and 0 in ks and 1 in ks
    below = points[0]
    assert below.a_star < 7.183765
    assert abs(below.discriminant) < 5e-2


def test_seed_dataclass_validation():
    with pytest.raises(ValueError):
        AdjacencySeed(b=1.0, a0=-1.0, omega0=1.0, residual=0.0)
    with pytest.raises(ValueError):
        AdjacencySeed(b=1.0, a0=4.0, omega0=0.0, residual=0.0)
