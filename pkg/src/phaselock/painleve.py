"""Painleve III: residual checks, Bessel-type special solutions, poles.

The equation in its standard form,

    w'' = w'^2/w - w'/tau + (alpha w^2 + beta)/tau + gamma w^3 + delta/w,

admits one-parameter special solutions expressible through cylinder
functions whenever alpha + eps*beta = 4k + 2 (normalized gamma = 1,
delta = -1).  The family used throughout this package is the logarithmic
derivative w = u'/u of the power-weighted combination
u(s) = s^b (J_b + y0 Y_b), which solves P3(-2b, 2b-2, 1, -1) away from the
zeros of u; those zeros are first-order poles of w with residue +1.

The variable change y(t) = w(sqrt(t)) sqrt(t) maps solutions to the t-form

    y'' = y'^2/y - y'/t + (gamma/4) y^3/t^2 + (alpha/4) y^2/t^2
        + (delta/4)/y + (beta/4)/t,

which is the form produced by the isomonodromy reduction in :mod:`.lax`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .odeint import Tolerances, integrate_real
from .specfun import BesselCombo, ZeroList, find_zeros, u_eval

__all__ = [
    "P3Params",
    "BesselP3Solution",
    "params_from_b",
    "p3_residual",
    "p3_residual_report",
    "t_form_residual_report",
    "bessel_w",
    "y_of_t",
    "pole_residue",
    "special_solution_class",
    "satisfies_parameter_condition",
    "integrate_p3",
]

POLE_GUARD = 1e-8
BLOWUP_THRESHOLD = 1e8
# |w| bands outside which a residual sample is ill-conditioned (too close to
# a pole of w, or to a zero where the delta/w term loses accuracy).
W_MAX = 1e4
W_MIN = 5e-3
# Samples closer than POLE_WINDOW to a declared pole are evaluated in the
# pole-subtracted frame; closer than MIN_POLE_DISTANCE they are excluded.
POLE_WINDOW = 0.25
MIN_POLE_DISTANCE = 0.02


@dataclass(frozen=True)
class P3Params:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def params_from_b(b: float) -> P3Params:
    """Parameters (-2b, 2b-2, 1, -1) of the reduction's normalized equation."""
    return P3Params(alpha=-2.0 * b, beta=2.0 * b - 2.0, gamma=1.0, delta=-1.0)


@dataclass(frozen=True)
class BesselP3Solution:
    """w(tau) = u'(tau)/u(tau) for a power-weighted cylinder combination u.

    Zeros of u on the working range are precomputed; they are first-order
    poles of w and evaluation within 1e-8 of any of them is rejected.
    """

    combo: BesselCombo
    zeros: ZeroList = field(repr=False)
    zero_range: tuple

    def __call__(self, tau: float) -> float:
        tau = float(tau)
        if tau <= 0:
            raise ValueError("tau must be positive")
        z = self.zeros.zeros
        if z.size and np.min(np.abs(z - tau)) < POLE_GUARD:
            raise ValueError(f"pole of solution at tau={tau!r}")
        u, du = u_eval(self.combo, tau)
        return du / u

    @property
    def order(self) -> float:
        return self.combo.order


def bessel_w(combo: BesselCombo, zero_range: tuple = (0.05, 60.0)) -> BesselP3Solution:
    """Special solution w = u'/u of P3(params_from_b(combo.order)).

    Equivalently w(tau) = b/tau + (J_b' + y0 Y_b')/(J_b + y0 Y_b): the power
    prefactor of u contributes the b/tau term.
    """
    zeros = find_zeros(combo, zero_range)
    return BesselP3Solution(combo=combo, zeros=zeros, zero_range=tuple(zero_range))


def y_of_t(sol: BesselP3Solution, t: float) -> float:
    """Value y(t) = w(sqrt(t)) sqrt(t) of the t-form solution.

    If w solves the standard equation with parameters (alpha, beta, gamma,
    delta), this substitution solves the t-form

        y'' = y'^2/y - y'/t + (alpha y^2 + gamma y^3)/(4 t^2)
              + beta/(4 t) + delta/(4 y),

    whose residual `t_form_residual_report` checks.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    s = math.sqrt(t)
    return sol(s) * s


def _p3_rhs_value(w, dw, tau, p: P3Params) -> float:
    # Grouping dw^2/w with delta/w keeps the value finite-noise near zeros
    # of w, where the two terms are individually huge but nearly cancel.
    return (
        (dw * dw + p.delta) / w
        - dw / tau
        + (p.alpha * w * w + p.beta) / tau
        + p.gamma * w**3
    )


def _stencil_derivs(f, x0, f0, h):
    """5-point first/second derivatives at steps h and h/2, Richardson-combined."""

    def one(hh):
        fm2, fm1 = f(x0 - 2 * hh), f(x0 - hh)
        fp1, fp2 = f(x0 + hh), f(x0 + 2 * hh)
        d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * hh)
        d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * hh * hh)
        return d1, d2

    d1_h, d2_h = one(h)
    d1_q, d2_q = one(0.5 * h)
    return (16.0 * d1_q - d1_h) / 15.0, (16.0 * d2_q - d2_h) / 15.0


def p3_residual_report(w, params: P3Params, tau_samples, poles=None, h_scale: float = 0.01):
    """(residual, excluded): max |w'' - RHS| and the skipped sample list.

    Derivatives are 5-point stencils at steps h and h/2 combined by one
    Richardson extrapolation.  Without pole information, h is proportional
    to the budget min(tau, 1/(1+|w|), 1) and samples where |w| leaves
    [5e-3, 1e4] are excluded and reported.

    When `poles` lists the (simple) pole locations and gamma > 0, samples
    within POLE_WINDOW of a pole are differenced in the pole-subtracted
    frame g = w - r/(tau - pole): the residue r of any movable simple pole
    of this equation equals +-1/sqrt(gamma) exactly (leading balance of
    w'' against w'^2/w and gamma w^3), so the subtraction is exact and the
    smooth remainder can be differenced to full accuracy even where
    |w''| ~ 1/d^3 would swamp a raw stencil.  Samples closer than
    MIN_POLE_DISTANCE to a pole are excluded.
    """
    samples = np.atleast_1d(np.asarray(tau_samples, dtype=float))
    if np.any(samples <= 0):
        raise ValueError("samples must have tau > 0")
    pole_arr = None
    if poles is not None:
        pole_arr = np.asarray(poles, dtype=float).ravel()
        if pole_arr.size == 0:
            pole_arr = None
    sqrt_g = math.sqrt(params.gamma) if params.gamma > 0 else None

    worst = 0.0
    excluded: list[float] = []
    for tau in samples:
        try:
            w0 = float(w(tau))
        except ValueError:
            excluded.append(float(tau))
            continue
        if not math.isfinite(w0):
            excluded.append(float(tau))
            continue

        res_coef = 0.0
        z = 0.0
        room = 1.0
        if pole_arr is not None and sqrt_g is not None:
            dist = np.abs(pole_arr - tau)
            k = int(np.argmin(dist))
            d = float(dist[k])
            if d < MIN_POLE_DISTANCE:
                excluded.append(float(tau))
                continue
            if d < POLE_WINDOW:
                raw = w0 * (tau - pole_arr[k]) * sqrt_g
                if 0.5 < abs(raw) < 1.5:
                    res_coef = math.copysign(1.0 / sqrt_g, raw)
                    z = float(pole_arr[k])
                    others = np.delete(dist, k)
                    room = float(np.min(others)) if others.size else 1.0

        if res_coef == 0.0 and (abs(w0) > W_MAX or abs(w0) < W_MIN):
            excluded.append(float(tau))
            continue

        try:
            if res_coef != 0.0:
                d_pole = abs(tau - z)
                h = min(h_scale * min(tau, 1.0, room), 0.25 * d_pole)

                def g(s):
                    return float(w(s)) - res_coef / (s - z)

                g0 = w0 - res_coef / (tau - z)
                d1g, d2g = _stencil_derivs(g, tau, g0, h)
                d1 = d1g - res_coef / (tau - z) ** 2
                d2 = d2g + 2.0 * res_coef / (tau - z) ** 3
            else:
                h = h_scale * min(tau, 1.0 / (1.0 + abs(w0)), 1.0)
                d1, d2 = _stencil_derivs(lambda s: float(w(s)), tau, w0, h)
        except ValueError:
            excluded.append(float(tau))
            continue
        worst = max(worst, abs(d2 - _p3_rhs_value(w0, d1, tau, params)))
    return worst, excluded


def p3_residual(w, params: P3Params, tau_samples, poles=None, h_scale: float = 0.01) -> float:
    """Max equation residual of a scalar solution candidate over the samples."""
    return p3_residual_report(w, params, tau_samples, poles, h_scale)[0]


def _t_form_rhs_value(y, dy, t, p: P3Params) -> float:
    # same cancellation-aware grouping as the tau-form: dy^2/y with the
    # delta/(4y) companion
    return (
        (dy * dy + 0.25 * p.delta) / y
        - dy / t
        + (p.alpha * y * y + p.gamma * y**3) / (4.0 * t * t)
        + p.beta / (4.0 * t)
    )


def t_form_residual_report(y, params: P3Params, t_samples, h_scale: float = 0.01):
    """(residual, excluded): defect of the squared-variable form of the equation.

    `params` are the coefficients of the standard tau-form; the checked
    equation is the one satisfied by y(t) = w(sqrt(t)) sqrt(t):

        y'' = y'^2/y - y'/t + (alpha y^2 + gamma y^3)/(4 t^2)
              + beta/(4 t) + delta/(4 y).

    Same stencil scheme as `p3_residual_report`, without pole subtraction:
    keep samples away from squared pole positions.
    """
    worst = 0.0
    excluded = []
    for t in t_samples:
        t = float(t)
        if t <= 0:
            raise ValueError("t samples must be positive")
        y0 = float(y(t))
        if not (W_MIN <= abs(y0) <= W_MAX):
            excluded.append(t)
            continue
        h = h_scale * min(t, 1.0 / (1.0 + abs(y0)), 1.0)
        d1, d2 = _stencil_derivs(y, t, y0, h)
        worst = max(worst, abs(d2 - _t_form_rhs_value(y0, d1, t, params)))
    return worst, excluded


def pole_residue(sol: BesselP3Solution, tau_star: float, h0: float | None = None) -> float:
    """Residue lim (tau - tau*) w(tau) at a recorded pole, by extrapolation.

    Symmetric products h*(w(tau*+h) - w(tau*-h))/2 cancel the odd Laurent
    terms; Richardson extrapolation in h^2 over shrinking offsets gives the
    limit.  For this family every pole is a simple zero of u, so the value
    is +1.
    """
    z = sol.zeros.zeros
    if z.size == 0 or np.min(np.abs(z - tau_star)) > 1e-6:
        raise ValueError(f"tau_star={tau_star!r} is not a recorded pole")
    tau_star = float(z[np.argmin(np.abs(z - tau_star))])
    gaps = np.abs(z[np.abs(z - tau_star) > 1e-6] - tau_star)
    room = min(float(np.min(gaps)) if gaps.size else 1.0, tau_star, 1.0)
    if h0 is None:
        h0 = 0.2 * room

    levels = 4
    g = np.empty(levels)
    for j in range(levels):
        h = h0 / 2.0**j
        g[j] = 0.5 * h * (sol(tau_star + h) - sol(tau_star - h))
    # Richardson in h^2
    table = g.copy()
    for m in range(1, levels):
        table[: levels - m] = (4.0**m * table[1 : levels - m + 1] - table[: levels - m]) / (
            4.0**m - 1.0
        )
    steps = np.abs(np.diff(g))
    if steps.size >= 2 and steps[-1] > 4.0 * steps[-2] + 1e-12:
        raise RuntimeError(
            f"residue extrapolation did not converge at tau_star={tau_star!r}"
        )
    return float(table[0])


_CLASS_TOL = 1e-9


def satisfies_parameter_condition(alpha_hat: float, beta_hat: float, kind: str) -> bool:
    """Whether alpha_hat + eps*beta_hat hits the lattice 4k+2 ("bessel_type")
    or 4k ("rational") for some eps in {+1, -1}."""
    if kind == "bessel_type":
        offset = 2.0
    elif kind == "rational":
        offset = 0.0
    else:
        raise ValueError(f"unknown kind {kind!r}")
    for eps in (1.0, -1.0):
        v = (alpha_hat + eps * beta_hat - offset) / 4.0
        if abs(v - round(v)) <= _CLASS_TOL:
            return True
    return False


def special_solution_class(alpha_hat: float, beta_hat: float) -> str:
    """Special-solution label of the normalized equation (gamma=1, delta=-1).

    "bessel_type" (alpha_hat + eps*beta_hat = 4k+2 for some sign eps) is
    checked before "rational" (= 4k); for half-integer parameter families
    both lattices can be hit with different signs, and the cylinder-function
    branch takes precedence.  Use satisfies_parameter_condition to query a
    single lattice.
    """
    if satisfies_parameter_condition(alpha_hat, beta_hat, "bessel_type"):
        return "bessel_type"
    if satisfies_parameter_condition(alpha_hat, beta_hat, "rational"):
        return "rational"
    return "none"


def integrate_p3(
    params: P3Params,
    tau0: float,
    w0: float,
    w0_prime: float,
    tau_end: float,
    tol: Tolerances = Tolerances(),
) -> float:
    """Integrate the equation as a first-order system from (w0, w0') at tau0.

    Raises RuntimeError with a bisection estimate of the blow-up location if
    a moving first-order pole (|w| > 1e8) is reached before tau_end.

    The (w, w') chart is singular where w = 0 even though solutions cross
    such points analytically (with slope +-sqrt(-delta)); an interval that
    crosses a zero of w is outside this routine's reliable domain, and the
    chart noise there typically corrupts the trajectory into a nearby
    moving pole.  Keep (tau0, tau_end) free of zeros and poles of w.
    """
    if w0 == 0:
        raise ValueError("equation is singular at w = 0")
    if tau0 <= 0 or tau_end <= 0:
        raise ValueError("tau must stay positive")

    def rhs(tau, state):
        w, dw = state
        return np.array([dw, _p3_rhs_value(w, dw, tau, params)])

    n_chunks = 64
    taus = np.linspace(tau0, tau_end, n_chunks + 1)
    state = np.array([w0, w0_prime], dtype=float)
    for i in range(n_chunks):
        try:
            nxt = integrate_real(rhs, state, (taus[i], taus[i + 1]), tol)
        except RuntimeError:
            nxt = None
        if nxt is None or not np.all(np.isfinite(nxt)) or abs(nxt[0]) > BLOWUP_THRESHOLD:
            lo, hi = taus[i], taus[i + 1]
            w_at_lo = state[0]
            for _ in range(30):
                mid = 0.5 * (lo + hi)
                try:
                    probe = integrate_real(rhs, state, (taus[i], mid), tol)
                    ok = np.all(np.isfinite(probe)) and abs(probe[0]) <= BLOWUP_THRESHOLD
                except RuntimeError:
                    ok = False
                if ok:
                    lo = mid
                    w_at_lo = probe[0]
                else:
                    hi = mid
            where = 0.5 * (lo + hi)
            if abs(w_at_lo) > 1e3:
                raise RuntimeError(f"moving singularity reached near tau={where:.6f}")
            raise RuntimeError(
                f"integration failed near tau={where:.6f} with w={w_at_lo:.3e}: "
                "the trajectory passes near w = 0, where the (w, w') system "
                "chart is singular even though the solution itself is regular"
            )
        state = nxt
    return float(state[0])
