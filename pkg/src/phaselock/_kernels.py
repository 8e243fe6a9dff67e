"""Hot numerical kernels, jitted with numba when available.

Two specialized Dormand-Prince 5(4) integrators live here:

* ``lift_periods`` -- long-time integration of the scalar phase equation
  dphi/dtau = (-sin(phi) + B + A cos(tau)) / omega, sampling the lift at
  every drive period tau = 2 pi k.
* ``circle_transport`` -- transport of the 2x2 fundamental matrix of the
  linear system
      dx/dzeta = [[-a/(2 zeta^2) - b/zeta - a/2, 1/(2 i omega zeta)],
                  [1/(2 i omega zeta),           0                ]] x
  once around a circle |zeta| = radius, with on-the-fly renormalization.

Both functions work unjitted (plain Python) when numba is unavailable or
disabled; the generic integrator in :mod:`phaselock.odeint` cross-checks
them in the test suite.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


TWO_PI = 2.0 * math.pi

# Dormand-Prince 5(4) coefficients (scalar form, FSAL).
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    35.0 / 384.0 - 5179.0 / 57600.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
)

STATUS_OK = 0
STATUS_MAX_STEPS = 1
STATUS_UNDERFLOW = 2


@njit(cache=True)
def lift_periods(B, A, omega, phi0, n_periods, atol, rtol, max_steps):
    """Integrate the phase equation over n_periods drive periods.

    Returns (samples, status): samples[k] = phi(2 pi k) for k = 0..n_periods
    (phi(0) = phi0), status one of STATUS_*.  Error control uses a fixed O(1)
    scale so that accuracy does not degrade as the lift grows.
    """
    out = np.empty(n_periods + 1)
    out[0] = phi0
    phi = phi0
    inv_om = 1.0 / omega
    nsteps = 0

    for k in range(n_periods):
        tau = 0.0
        f1 = (-math.sin(phi) + B + A * math.cos(tau)) * inv_om
        h = 0.1
        err_prev = 1.0
        while tau < TWO_PI:
            if nsteps >= max_steps:
                return out, STATUS_MAX_STEPS
            if h < 1e-13:
                return out, STATUS_UNDERFLOW
            if tau + h > TWO_PI:
                h = TWO_PI - tau

            y2 = phi + h * (_A21 * f1)
            f2 = (-math.sin(y2) + B + A * math.cos(tau + _C2 * h)) * inv_om
            y3 = phi + h * (_A31 * f1 + _A32 * f2)
            f3 = (-math.sin(y3) + B + A * math.cos(tau + _C3 * h)) * inv_om
            y4 = phi + h * (_A41 * f1 + _A42 * f2 + _A43 * f3)
            f4 = (-math.sin(y4) + B + A * math.cos(tau + _C4 * h)) * inv_om
            y5 = phi + h * (_A51 * f1 + _A52 * f2 + _A53 * f3 + _A54 * f4)
            f5 = (-math.sin(y5) + B + A * math.cos(tau + _C5 * h)) * inv_om
            y6 = phi + h * (_A61 * f1 + _A62 * f2 + _A63 * f3 + _A64 * f4 + _A65 * f5)
            f6 = (-math.sin(y6) + B + A * math.cos(tau + h)) * inv_om
            y7 = phi + h * (_B1 * f1 + _B3 * f3 + _B4 * f4 + _B5 * f5 + _B6 * f6)
            f7 = (-math.sin(y7) + B + A * math.cos(tau + h)) * inv_om

            e = h * (_E1 * f1 + _E3 * f3 + _E4 * f4 + _E5 * f5 + _E6 * f6 + _E7 * f7)
            err = abs(e) / (atol + rtol)
            nsteps += 1

            if err <= 1.0:
                tau += h
                phi = y7
                f1 = f7
                if err > 0.0:
                    fac = 0.9 * err ** (-0.14) * err_prev**0.08
                    if fac > 5.0:
                        fac = 5.0
                    elif fac < 0.2:
                        fac = 0.2
                else:
                    fac = 5.0
                err_prev = err if err > 1e-10 else 1e-10
                h *= fac
            else:
                fac = 0.9 * err**-0.2
                if fac < 0.2:
                    fac = 0.2
                h *= fac
                err_prev = 1.0
        out[k + 1] = phi
    return out, STATUS_OK


@njit(cache=True)
def circle_transport(a, b, omega, radius, atol, rtol, max_steps):
    """Fundamental matrix around the circle |zeta| = radius, counterclockwise.

    Returns (Y, log_scale, status) where the true loop matrix is
    Y * exp(log_scale); the state is renormalized whenever its largest
    modulus passes 1e100 so that the transport never overflows.
    """
    y = np.zeros(4, dtype=np.complex128)
    y[0] = 1.0 + 0.0j
    y[3] = 1.0 + 0.0j

    w = TWO_PI * 1j
    c_off = 1.0 / (2j * omega)
    log_scale = 0.0
    nsteps = 0

    k = np.empty((7, 4), dtype=np.complex128)
    ys = np.empty(4, dtype=np.complex128)

    # derivative in loop parameter s: dY/ds = (2 pi i zeta) C(zeta) Y
    def _rhs_fill(s, state, out):
        zeta = radius * cmath.exp(w * s)
        c11 = -a / (2.0 * zeta * zeta) - b / zeta - a / 2.0
        c12 = c_off / zeta
        v = w * zeta
        m11 = v * c11
        m12 = v * c12
        out[0] = m11 * state[0] + m12 * state[2]
        out[1] = m11 * state[1] + m12 * state[3]
        out[2] = m12 * state[0]
        out[3] = m12 * state[1]

    _rhs_fill(0.0, y, k[0])
    s = 0.0
    h = 1e-3
    err_prev = 1.0

    while s < 1.0:
        if nsteps >= max_steps:
            return y, log_scale, STATUS_MAX_STEPS
        if h < 1e-15:
            return y, log_scale, STATUS_UNDERFLOW
        if s + h > 1.0:
            h = 1.0 - s

        for i in range(4):
            ys[i] = y[i] + h * (_A21 * k[0, i])
        _rhs_fill(s + _C2 * h, ys, k[1])
        for i in range(4):
            ys[i] = y[i] + h * (_A31 * k[0, i] + _A32 * k[1, i])
        _rhs_fill(s + _C3 * h, ys, k[2])
        for i in range(4):
            ys[i] = y[i] + h * (_A41 * k[0, i] + _A42 * k[1, i] + _A43 * k[2, i])
        _rhs_fill(s + _C4 * h, ys, k[3])
        for i in range(4):
            ys[i] = y[i] + h * (
                _A51 * k[0, i] + _A52 * k[1, i] + _A53 * k[2, i] + _A54 * k[3, i]
            )
        _rhs_fill(s + _C5 * h, ys, k[4])
        for i in range(4):
            ys[i] = y[i] + h * (
                _A61 * k[0, i]
                + _A62 * k[1, i]
                + _A63 * k[2, i]
                + _A64 * k[3, i]
                + _A65 * k[4, i]
            )
        _rhs_fill(s + h, ys, k[5])
        for i in range(4):
            ys[i] = y[i] + h * (
                _B1 * k[0, i] + _B3 * k[2, i] + _B4 * k[3, i] + _B5 * k[4, i] + _B6 * k[5, i]
            )
        _rhs_fill(s + h, ys, k[6])

        err = 0.0
        for i in range(4):
            e = h * (
                _E1 * k[0, i]
                + _E3 * k[2, i]
                + _E4 * k[3, i]
                + _E5 * k[4, i]
                + _E6 * k[5, i]
                + _E7 * k[6, i]
            )
            mag = abs(y[i])
            mag2 = abs(ys[i])
            if mag2 > mag:
                mag = mag2
            sc = atol + rtol * mag
            q = abs(e) / sc
            err += q * q
        err = math.sqrt(err / 4.0)
        if not math.isfinite(err):
            err = 1e6
        nsteps += 1

        if err <= 1.0:
            s += h
            for i in range(4):
                y[i] = ys[i]
                k[0, i] = k[6, i]
            if err > 0.0:
                fac = 0.9 * err ** (-0.14) * err_prev**0.08
                if fac > 5.0:
                    fac = 5.0
                elif fac < 0.2:
                    fac = 0.2
            else:
                fac = 5.0
            err_prev = err if err > 1e-10 else 1e-10
            h *= fac
            m = 0.0
            for i in range(4):
                mm = abs(y[i])
                if mm > m:
                    m = mm
            if m > 1e100:
                for i in range(4):
                    y[i] /= m
                    k[0, i] /= m
                log_scale += math.log(m)
        else:
            fac = 0.9 * err**-0.2
            if fac < 0.2:
                fac = 0.2
            h *= fac
            err_prev = 1.0

    return y, log_scale, STATUS_OK
