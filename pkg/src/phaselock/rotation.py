"""Rotation numbers and phase-locking structure of the driven junction equation.

The scalar phase obeys

    dphi/dtau = (-sin(phi) + B + A cos(tau)) / omega,

parametrized here by the normalized pair (b, a) = (B, A)/omega.  The
rotation number rho = lim phi(2 pi k)/(2 pi k) exists for every orbit and is
independent of the initial phase; its integer plateaus in b are the
phase-locking tongues.  Long-time estimates use a weighted Birkhoff average
of the per-period increments, which converges superpolynomially on
quasiperiodic orbits and exponentially on locked ones, with a window-doubling
gap as the error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .odeint import Tolerances
from .specfun import bessel_pair

__all__ = [
    "JosephsonParams",
    "RotationEstimate",
    "TongueGrid",
    "BoundaryCurve",
    "phase_rhs",
    "poincare_lift",
    "rotation_number",
    "rho_axis_analytic",
    "scan_grid",
    "trace_boundary",
]

MIN_OMEGA = 1e-3
PLATEAU_TOL = 1e-4


@dataclass(frozen=True)
class JosephsonParams:
    """Normalized junction parameters (b, a, omega); B = b*omega, A = a*omega."""

    b: float
    a: float
    omega: float

    def __post_init__(self):
        for name in ("b", "a", "omega"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.omega < MIN_OMEGA:
            raise ValueError(f"omega={self.omega!r} is degenerate; require omega >= {MIN_OMEGA}")


@dataclass
class RotationEstimate:
    rho: float
    error_estimate: float
    periods_used: int


@dataclass
class TongueGrid:
    """Rotation numbers on a (b, a) grid at fixed omega."""

    omega: float
    b_values: np.ndarray
    a_values: np.ndarray
    rho: np.ndarray
    error: np.ndarray

    def plateau_index(self, threshold: float = PLATEAU_TOL):
        """(indices, locked): nearest integers and a mask of plateau points."""
        idx = np.rint(self.rho).astype(int)
        locked = np.abs(self.rho - idx) <= threshold
        return idx, locked


@dataclass
class BoundaryCurve:
    """One analytic tongue-boundary branch sampled over drive amplitudes.

    side "minus" is the branch asymptotic to r + J_r(a)/omega for large a,
    side "plus" the branch asymptotic to r - J_r(a)/omega; the two exchange
    upper/lower roles at every zero of J_r.  Amplitudes where no locked
    interval was detected are listed in ``missing``.
    """

    r: int
    side: str
    omega: float
    a_values: np.ndarray
    b_values: np.ndarray
    missing: list


def phase_rhs(params: JosephsonParams):
    """Right-hand side f(tau, phi) of the phase equation."""
    B = params.b * params.omega
    A = params.a * params.omega
    omega = params.omega

    def f(tau, phi):
        return (-np.sin(phi) + B + A * np.cos(tau)) / omega

    return f


def _lift(params: JosephsonParams, phi0: float, n_periods: int, tol: Tolerances):
    samples, status = _kernels.lift_periods(
        params.b * params.omega,
        params.a * params.omega,
        params.omega,
        phi0,
        n_periods,
        tol.abs_tol,
        tol.rel_tol,
        tol.max_steps,
    )
    if status == _kernels.STATUS_MAX_STEPS:
        raise RuntimeError(f"maximum step count {tol.max_steps} exceeded in phase lift")
    if status == _kernels.STATUS_UNDERFLOW:
        raise RuntimeError("step size underflow in phase lift")
    return samples


def poincare_lift(params: JosephsonParams, phi0: float = 0.0, tol: Tolerances = Tolerances()):
    """Phase after one drive period, phi(2 pi), starting from phi(0) = phi0."""
    return float(_lift(params, phi0, 1, tol)[-1])


def _weighted_average(increments: np.ndarray) -> float:
    """Birkhoff average with the exponential bump window exp(-1/(x(1-x)))."""
    n = increments.size
    x = (np.arange(n) + 0.5) / n
    w = np.exp(-1.0 / (x * (1.0 - x)))
    return float(np.sum(w * increments) / np.sum(w))


def rotation_number(
    params: JosephsonParams,
    phi0: float = 0.0,
    tol: Tolerances = Tolerances(),
    max_periods: int = 4096,
    target: float = 1e-9,
) -> RotationEstimate:
    """Rotation number rho = lim phi(2 pi k) / (2 pi k).

    The per-period lift increments are averaged with an exponential bump
    window over windows of doubling length; the gap between consecutive
    doublings is reported as the error estimate and iteration stops once it
    falls below ``target`` (or the period budget is exhausted).
    """
    n = min(256, max_periods)
    samples = _lift(params, phi0, n, tol)
    rho_prev = _weighted_average(np.diff(samples)) / (2.0 * math.pi)
    gap = math.inf
    while True:
        if n >= max_periods or gap < target:
            break
        extra = min(n, max_periods - n)
        more = _lift(params, float(samples[-1]), extra, tol)
        samples = np.concatenate([samples, more[1:]])
        n += extra
        rho = _weighted_average(np.diff(samples)) / (2.0 * math.pi)
        gap = abs(rho - rho_prev)
        rho_prev = rho
    err = gap if math.isfinite(gap) else target
    return RotationEstimate(rho_prev, max(err, 1e-12), n)


def rho_axis_analytic(b: float, omega: float) -> float:
    """Rotation number of the autonomous (a = 0) equation.

    Zero inside the locked band |b*omega| <= 1, otherwise
    sign(b) sqrt((b*omega)^2 - 1)/omega.
    """
    x = b * omega
    if abs(x) <= 1.0:
        return 0.0
    return math.copysign(math.sqrt(x * x - 1.0) / omega, b)


def scan_grid(
    b_values,
    a_values,
    omega: float,
    tol: Tolerances = Tolerances(),
    max_periods: int = 2048,
    target: float = 1e-8,
) -> TongueGrid:
    """Rotation numbers over the Cartesian grid b_values x a_values."""
    b_values = np.atleast_1d(np.asarray(b_values, dtype=float))
    a_values = np.atleast_1d(np.asarray(a_values, dtype=float))
    rho = np.empty((b_values.size, a_values.size))
    err = np.empty_like(rho)
    for i, b in enumerate(b_values):
        for j, a in enumerate(a_values):
            est = rotation_number(
                JosephsonParams(b, a, omega), tol=tol, max_periods=max_periods, target=target
            )
            rho[i, j] = est.rho
            err[i, j] = est.error_estimate
    return TongueGrid(omega, b_values, a_values, rho, err)


def _locked_at(b, a, omega, r, tol, max_periods):
    est = rotation_number(
        JosephsonParams(b, a, omega), tol=tol, max_periods=max_periods, target=1e-7
    )
    return abs(est.rho - r) <= PLATEAU_TOL


def _find_edges(r, a, omega, tol, max_periods, b_tol):
    """Both edges [b_lo, b_hi] of the rho = r plateau at amplitude a.

    Returns None when no locked point is found in the search window.
    """
    j_r = float(bessel_pair(float(r), a)[0]) if a > 0 else (1.0 if r == 0 else 0.0)
    half = 1.2 / omega + 3.0 * abs(j_r) / omega + 0.05
    grid = r + half * np.linspace(-1.0, 1.0, 41)
    locked = [bool(_locked_at(b, a, omega, r, tol, max_periods)) for b in grid]
    if not any(locked):
        return None
    i_in = int(np.argmax(locked))
    # widen to the last locked index for the upper bracket
    i_hi = max(i for i, flag in enumerate(locked) if flag)

    def bisect(b_in, b_out):
        while abs(b_out - b_in) > b_tol:
            mid = 0.5 * (b_in + b_out)
            if _locked_at(mid, a, omega, r, tol, max_periods):
                b_in = mid
            else:
                b_out = mid
        return 0.5 * (b_in + b_out)

    b_lo = grid[i_in] if i_in == 0 else bisect(grid[i_in], grid[i_in - 1])
    b_hi = grid[i_hi] if i_hi == len(grid) - 1 else bisect(grid[i_hi], grid[i_hi + 1])
    return b_lo, b_hi


def trace_boundary(
    r: int,
    side: str,
    a_samples,
    omega: float,
    tol: Tolerances = Tolerances(),
    max_periods: int = 2048,
    b_tol: float = 1e-6,
) -> BoundaryCurve:
    """Trace one analytic boundary branch of the integer tongue rho = r.

    For each amplitude both plateau edges are located by bisection on the
    locking test |rho - r| <= 1e-4; the requested branch is the edge closer
    to the asymptotic prediction r + J_r(a)/omega ("minus") or
    r - J_r(a)/omega ("plus").  Amplitudes whose locked interval cannot be
    found (e.g. collapsed tongues) are skipped and reported in ``missing``.
    """
    if side not in ("minus", "plus"):
        raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")
    if r != int(r):
        raise ValueError("tongue index r must be an integer")
    r = int(r)
    a_arr = np.atleast_1d(np.asarray(a_samples, dtype=float))
    missing: list[float] = []
    a_out: list[float] = []
    b_out: list[float] = []
    for a in a_arr:
        edges = _find_edges(r, float(a), omega, tol, max_periods, b_tol)
        if edges is None:
            missing.append(float(a))
            continue
        b_lo, b_hi = edges
        j_r = float(bessel_pair(float(r), a)[0]) if a > 0 else (1.0 if r == 0 else 0.0)
        pred_minus = r + j_r / omega
        if abs(b_lo - pred_minus) <= abs(b_hi - pred_minus):
            chosen = b_lo if side == "minus" else b_hi
        else:
            chosen = b_hi if side == "minus" else b_lo
        a_out.append(float(a))
        b_out.append(float(chosen))
    return BoundaryCurve(r, side, omega, np.array(a_out), np.array(b_out), missing)
