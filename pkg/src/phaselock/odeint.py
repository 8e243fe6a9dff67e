"""Adaptive Runge-Kutta integration.

A single Dormand-Prince 5(4) core drives everything in this package that is
not performance critical: real initial-value problems, and transport of 2x2
complex matrix solutions of linear systems along paths in the punctured
plane (circles, segments).  The matrix transport renormalizes on the fly so
that loop matrices with huge intermediate entries are computed without
overflow, tracking the exact scale factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "Tolerances",
    "ComplexPath",
    "IntegrationReport",
    "integrate_real",
    "integrate_real_report",
    "integrate_matrix_along_path",
]

# Dormand-Prince 5(4) tableau (FSAL: last stage of an accepted step is the
# first stage of the next).
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1 / 5, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3 / 40, 9 / 40, 0.0, 0.0, 0.0, 0.0],
        [44 / 45, -56 / 15, 32 / 9, 0.0, 0.0, 0.0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0.0, 0.0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0.0],
    ]
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
# Difference between the 5th-order weights (including the FSAL stage with
# weight 0) and the embedded 4th-order weights.
_E = np.array(
    [
        35 / 384 - 5179 / 57600,
        0.0,
        500 / 1113 - 7571 / 16695,
        125 / 192 - 393 / 640,
        -2187 / 6784 + 92097 / 339200,
        11 / 84 - 187 / 2100,
        -1 / 40,
    ]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_PI_ALPHA = 0.7 / 5.0
_PI_BETA = 0.4 / 5.0


@dataclass(frozen=True)
class Tolerances:
    """Error-control settings shared by all integrators in this package."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_steps: int = 10_000_000

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


@dataclass
class IntegrationReport:
    """Bookkeeping from one integration run."""

    steps: int
    rejected: int
    error_estimate: float


@dataclass(frozen=True)
class ComplexPath:
    """Smooth path t in [0, 1] -> z(t) in the complex plane.

    Attributes
    ----------
    point : callable
        Parametrization z(t).
    velocity : callable
        Derivative dz/dt.
    kind : str
        "circle" or "segment" for the built-in constructors.
    """

    point: Callable[[float], complex]
    velocity: Callable[[float], complex]
    kind: str = "custom"

    @staticmethod
    def circle(radius: float, center: complex = 0.0, orientation: int = 1) -> "ComplexPath":
        """Closed loop of given radius, counterclockwise for orientation=+1."""
        if radius <= 0:
            raise ValueError("circle radius must be positive")
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        w = 2j * math.pi * orientation

        def point(t: float) -> complex:
            return center + radius * np.exp(w * t)

        def velocity(t: float) -> complex:
            return w * radius * np.exp(w * t)

        return ComplexPath(point, velocity, kind="circle")

    @staticmethod
    def segment(z0: complex, z1: complex) -> "ComplexPath":
        """Straight segment from z0 to z1."""
        dz = complex(z1) - complex(z0)

        def point(t: float) -> complex:
            return z0 + dz * t

        def velocity(t: float) -> complex:
            return dz

        return ComplexPath(point, velocity, kind="segment")

    def reversed(self) -> "ComplexPath":
        """The same path traversed backwards."""

        def point(t: float) -> complex:
            return self.point(1.0 - t)

        def velocity(t: float) -> complex:
            return -self.velocity(1.0 - t)

        return ComplexPath(point, velocity, kind=self.kind)


def _initial_step(f, t0, y0, f0, direction, atol, rtol):
    """Hairer-style starting step size guess."""
    sc = atol + rtol * np.abs(y0)
    d0 = math.sqrt(float(np.mean(np.abs(y0 / sc) ** 2)))
    d1 = math.sqrt(float(np.mean(np.abs(f0 / sc) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + direction * h0 * f0
    f1 = np.asarray(f(t0 + direction * h0, y1))
    d2 = math.sqrt(float(np.mean(np.abs((f1 - f0) / sc) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, 1e-3 * h0)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1)


def _dopri_core(f, t0, t1, y0, tol, scale_threshold=None):
    """Integrate dy/dt = f(t, y) from t0 to t1.

    Returns (y_end, log_scale, report).  When ``scale_threshold`` is set and
    the solution norm exceeds it after an accepted step, the state is divided
    by its max modulus and the exact log of the accumulated factor is
    returned in ``log_scale`` (0.0 otherwise).
    """
    y = np.array(y0, copy=True)
    if t1 == t0:
        return y, 0.0, IntegrationReport(0, 0, 0.0)
    direction = 1.0 if t1 > t0 else -1.0
    atol, rtol = tol.abs_tol, tol.rel_tol

    t = float(t0)
    k = np.empty((7,) + y.shape, dtype=y.dtype)
    k[0] = np.asarray(f(t, y))
    if not np.all(np.isfinite(np.abs(k[0]))):
        raise RuntimeError(f"right-hand side is non-finite at t={t!r}")
    h = direction * min(_initial_step(f, t, y, k[0], direction, atol, rtol), abs(t1 - t0))

    log_scale = 0.0
    err_prev = 1.0
    steps = 0
    rejected = 0
    acc_err = 0.0

    while (t1 - t) * direction > 0:
        if steps + rejected >= tol.max_steps:
            raise RuntimeError(
                f"maximum step count {tol.max_steps} exceeded at t={t!r}"
            )
        if abs(h) < 1e-14 * max(1.0, abs(t)):
            raise RuntimeError(f"step size underflow at t={t!r}")
        if (t + h - t1) * direction > 0:
            h = t1 - t

        for i in range(1, 6):
            yi = y + h * np.tensordot(_A[i, :i], k[:i], axes=1)
            k[i] = np.asarray(f(t + _C[i] * h, yi))
        y_new = y + h * np.tensordot(_B5, k[:6], axes=1)
        k[6] = np.asarray(f(t + h, y_new))
        if not np.all(np.isfinite(np.abs(k[6]))):
            raise RuntimeError(f"right-hand side is non-finite at t={t + h!r}")

        e = h * np.tensordot(_E, k, axes=1)
        sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(float(np.mean(np.abs(e / sc) ** 2)))
        if not math.isfinite(err):
            err = 1e6

        if err <= 1.0:
            t += h
            y = y_new
            k[0] = k[6]
            steps += 1
            acc_err += err * math.sqrt(float(np.mean(sc**2)))
            factor = _SAFETY * err ** (-_PI_ALPHA) * err_prev**_PI_BETA if err > 0 else _MAX_FACTOR
            err_prev = max(err, 1e-10)
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            if scale_threshold is not None:
                m = float(np.max(np.abs(y)))
                if m > scale_threshold:
                    y /= m
                    k[0] /= m
                    log_scale += math.log(m)
        else:
            rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err ** (-0.2))
            err_prev = 1.0

    return y, log_scale, IntegrationReport(steps, rejected, acc_err)


def integrate_real(field, y0, t_span, tol: Tolerances = Tolerances()):
    """Integrate a real system dy/dt = field(t, y) over t_span = (t0, t1).

    Returns the end state as a float array.
    """
    y, _, _ = _dopri_core(field, t_span[0], t_span[1], np.asarray(y0, dtype=float), tol)
    return y


def integrate_real_report(field, y0, t_span, tol: Tolerances = Tolerances()):
    """Like :func:`integrate_real` but also returns an IntegrationReport."""
    y, _, report = _dopri_core(
        field, t_span[0], t_span[1], np.asarray(y0, dtype=float), tol
    )
    return y, report


def integrate_matrix_along_path(
    coeff,
    path: ComplexPath,
    tol: Tolerances = Tolerances(),
    Y0=None,
):
    """Transport a 2x2 fundamental matrix along a complex path.

    Solves dY/dt = z'(t) C(z(t)) Y with Y(0) = Y0 (identity by default) for
    t in [0, 1] and returns Y(1).  The coefficient map ``coeff`` sends a
    complex point z to a 2x2 complex array C(z).

    Intermediate states larger than 1e100 in max modulus are rescaled and the
    factor restored exactly at the end; if the final matrix itself overflows
    double precision a RuntimeError is raised.
    """
    if Y0 is None:
        Y0 = np.eye(2, dtype=complex)
    Y0 = np.asarray(Y0, dtype=complex)
    if Y0.shape != (2, 2):
        raise ValueError("Y0 must be a 2x2 matrix")

    def rhs(t, y):
        z = path.point(t)
        c = np.asarray(coeff(z), dtype=complex)
        if not (np.all(np.isfinite(c.real)) and np.all(np.isfinite(c.imag))):
            raise RuntimeError(
                f"coefficient matrix is non-finite at z={z!r}; "
                "the path may pass through a singular point"
            )
        return path.velocity(t) * (c @ y.reshape(2, 2)).ravel()

    y, log_scale, _ = _dopri_core(rhs, 0.0, 1.0, Y0.ravel(), tol, scale_threshold=1e100)
    if log_scale != 0.0:
        if log_scale + math.log(max(float(np.max(np.abs(y))), 1e-300)) > 700.0:
            raise RuntimeError(
                "matrix transport overflowed double precision "
                f"(accumulated log scale {log_scale:.3g})"
            )
        y = y * math.exp(log_scale)
    return y.reshape(2, 2)
