"""Numerical monodromy of the 2x2 linear system with two irregular singularities.

The system in the punctured plane,

    dx/dzeta = [[-a/(2 zeta^2) - b/zeta - a/2, 1/(2 i omega zeta)],
                [1/(2 i omega zeta),           0                ]] x,

has irregular singular points at 0 and infinity.  Transporting the identity
frame once counterclockwise around zeta = 0 yields the loop (monodromy)
matrix M.  Three derived quantities matter downstream:

* identity_residual = max-entry |M - I|: its smallness certifies trivial
  monodromy, which together with unitriangularity of the formal Stokes
  factors forces all local data at 0 (and then at infinity) to be trivial --
  the adjacency certificate;
* det_residual = |det M - e^{-2 pi i b}|: the determinant is exact by the
  Liouville formula (only the residue trace -b survives the closed loop);
* eig_discriminant = tr^2 M - 4 det M: a zero signals a multiple eigenvalue,
  the tongue-boundary criterion.

A confluent-Heun-form residual check is included: E(z) = e^(mu z) x2(kappa z)
is tested against a second-order equation whose (mu, kappa) are calibration
inputs (stored in the package data directory), since no exact pair makes the
check vanish identically for a != 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import _kernels
from .odeint import ComplexPath, Tolerances, integrate_matrix_along_path
from .rotation import JosephsonParams

__all__ = [
    "MonodromyResult",
    "DcheParams",
    "system_coeff",
    "default_radius",
    "monodromy_loop",
    "triviality_residual",
    "eig_discriminant",
    "dche_residual",
    "dche_defaults",
]

EXPONENT_GUARD = 400.0
CERTIFY_THRESHOLD = 1e-3
REFINE_THRESHOLD = 1e-6
DEFAULT_LOOP_TOL = Tolerances(abs_tol=1e-12, rel_tol=1e-12)


@dataclass
class MonodromyResult:
    """Loop matrix around zeta = 0 and its derived residuals."""

    matrix: np.ndarray
    identity_residual: float
    det_residual: float
    eig_discriminant: complex
    loop_radius: float
    tol_used: Tolerances


def system_coeff(params: JosephsonParams):
    """Coefficient map zeta -> 2x2 complex matrix of the linear system."""
    a, b, omega = params.a, params.b, params.omega
    off = 1.0 / (2j * omega)

    def coeff(zeta: complex) -> np.ndarray:
        if zeta == 0:
            raise ValueError("singular point zeta=0")
        return np.array(
            [
                [-a / (2.0 * zeta * zeta) - b / zeta - a / 2.0, off / zeta],
                [off / zeta, 0.0],
            ],
            dtype=complex,
        )

    return coeff


def default_radius(a: float) -> float:
    """Loop radius 1, grown as |a|/20 to keep the irregular exponent bounded."""
    return max(1.0, abs(a) / 20.0)


def _check_radius(a: float, radius: float) -> None:
    if radius <= 0:
        raise ValueError("loop radius must be positive")
    if abs(a) / (2.0 * radius) > EXPONENT_GUARD:
        raise ValueError(
            f"radius {radius!r} too small for this a={a!r}: "
            f"|a|/(2 radius) must not exceed {EXPONENT_GUARD}"
        )


def monodromy_loop(
    params: JosephsonParams,
    radius: float | None = None,
    tol: Tolerances = DEFAULT_LOOP_TOL,
    method: str = "kernel",
) -> MonodromyResult:
    """Loop matrix from one counterclockwise transport of I around |zeta| = radius.

    method "kernel" uses the specialized fast integrator; "generic" routes
    through the general path-transport integrator (slower, used for
    cross-validation).  The matrix is reported in the base-point frame at
    zeta = radius; identity_residual is frame-independent only in its
    convergence to zero (the trivial-monodromy case), which is the only case
    where its magnitude is interpreted.
    """
    if radius is None:
        radius = default_radius(params.a)
    _check_radius(params.a, radius)

    if method == "kernel":
        y, log_scale, status = _kernels.circle_transport(
            params.a,
            params.b,
            params.omega,
            radius,
            tol.abs_tol,
            tol.rel_tol,
            tol.max_steps,
        )
        if status == _kernels.STATUS_MAX_STEPS:
            raise RuntimeError(
                f"maximum step count {tol.max_steps} exceeded in loop transport"
            )
        if status == _kernels.STATUS_UNDERFLOW:
            raise RuntimeError("step size underflow in loop transport")
        matrix = y.reshape(2, 2)
        if log_scale != 0.0:
            matrix = matrix * math.exp(log_scale)
    elif method == "generic":
        path = ComplexPath.circle(radius)
        matrix = integrate_matrix_along_path(system_coeff(params), path, tol=tol)
    else:
        raise ValueError(f"unknown method {method!r}")

    det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
    tr = matrix[0, 0] + matrix[1, 1]
    return MonodromyResult(
        matrix=matrix,
        identity_residual=float(np.max(np.abs(matrix - np.eye(2)))),
        det_residual=float(abs(det - np.exp(-2j * math.pi * params.b))),
        eig_discriminant=complex(tr * tr - 4.0 * det),
        loop_radius=radius,
        tol_used=tol,
    )


def triviality_residual(params: JosephsonParams, tol: Tolerances = DEFAULT_LOOP_TOL) -> float:
    """Max-entry distance of the loop matrix from the identity.

    A value below 1e-3 certifies trivial monodromy at the default radius
    (adjacency certificate); refinement targets use 1e-6.
    """
    return monodromy_loop(params, tol=tol).identity_residual


def eig_discriminant(params: JosephsonParams, tol: Tolerances = DEFAULT_LOOP_TOL) -> complex:
    """tr^2 - 4 det of the loop matrix; ~0 signals a multiple eigenvalue."""
    return monodromy_loop(params, tol=tol).eig_discriminant


# ---------------------------------------------------------------------------
# Confluent-Heun-form residual


@dataclass(frozen=True)
class DcheParams:
    """Parameters of the confluent-Heun-form check.

    mu is the exponent in E(z) = e^(mu z) x2(kappa z); kappa rescales the
    system variable into the equation variable.  Both are calibration inputs
    (see dche_defaults).
    """

    a: float
    b: float
    omega: float
    mu: float
    kappa: float

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")


def _x2_values(p: DcheParams, zeta_points, tol: Tolerances):
    """Second component of one fixed system solution at the given points.

    The solution with x(zeta_base) = (1, 1) is transported along straight
    segments from the base point (the rightmost requested point) to each
    target; segments passing near the singularity at 0 are rejected.
    """
    params = JosephsonParams(p.b, p.a, p.omega)
    coeff = system_coeff(params)
    pts = list(zeta_points)
    base = max(pts, key=abs)
    state0 = np.array([[1.0, 0.0], [1.0, 0.0]], dtype=complex)  # columns: solution, padding
    out = {}
    for zt in pts:
        if zt == base:
            out[zt] = state0[1, 0]
            continue
        seg = ComplexPath.segment(base, zt)
        # distance of segment to the origin
        z0, z1 = complex(base), complex(zt)
        dz = z1 - z0
        t_star = min(max(-(z0 * dz.conjugate()).real / abs(dz) ** 2, 0.0), 1.0)
        dist = abs(z0 + t_star * dz)
        if dist < 0.05 * min(abs(z0), abs(z1)):
            raise ValueError("sample too close to singularity")
        Y = integrate_matrix_along_path(coeff, seg, tol=tol, Y0=state0)
        out[zt] = Y[1, 0]
    return out


def dche_residual(p: DcheParams, sample_z, tol: Tolerances = Tolerances()) -> float:
    """Max residual of the confluent-Heun-form equation over the samples.

    E(z) = e^(mu z) x2(kappa z) is built from a numerically integrated
    solution of the linear system and substituted into

        E'' + (2a/z^2 + (b+1)/z - 2a) E'
            + ((1/(4 omega^2) - 4a^2)/z^2 - 2a(b+1)/z) E,

    with E', E'' from 5-point finite-difference stencils at steps h and h/2
    combined by one Richardson extrapolation; h adapts to the distance of the
    sample from the singularity at z = 0.
    """
    samples = [complex(z) for z in np.atleast_1d(sample_z)]
    if any(z == 0 for z in samples):
        raise ValueError("samples must avoid 0")
    a, b, omega, mu, kappa = p.a, p.b, p.omega, p.mu, p.kappa

    offsets = (-2.0, -1.0, 1.0, 2.0)
    worst = 0.0
    for z in samples:
        h = 0.05 * min(abs(z), 1.0)
        if abs(z) - 2.0 * h <= 0.25 * abs(z):
            raise ValueError("sample too close to singularity")
        nodes = {z}
        for hh in (h, 0.5 * h):
            nodes.update(z + o * hh for o in offsets)
        zeta_nodes = {kappa * zz for zz in nodes}
        x2 = _x2_values(p, zeta_nodes, tol)

        def E(zz: complex) -> complex:
            return np.exp(mu * zz) * x2[kappa * zz]

        e0 = E(z)

        def d12(hh: float):
            em2, em1 = E(z - 2 * hh), E(z - hh)
            ep1, ep2 = E(z + hh), E(z + 2 * hh)
            d1 = (em2 - 8.0 * em1 + 8.0 * ep1 - ep2) / (12.0 * hh)
            d2 = (-em2 + 16.0 * em1 - 30.0 * e0 + 16.0 * ep1 - ep2) / (12.0 * hh * hh)
            return d1, d2

        d1_h, d2_h = d12(h)
        d1_h2, d2_h2 = d12(0.5 * h)
        d1 = (16.0 * d1_h2 - d1_h) / 15.0
        d2 = (16.0 * d2_h2 - d2_h) / 15.0

        lhs = (
            d2
            + (2.0 * a / z**2 + (b + 1.0) / z - 2.0 * a) * d1
            + ((1.0 / (4.0 * omega**2) - 4.0 * a**2) / z**2 - 2.0 * a * (b + 1.0) / z) * e0
        )
        worst = max(worst, abs(lhs))
    return worst


def _load_calibration() -> dict:
    with resources.files("phaselock").joinpath("_data/dche_calibration.json").open() as f:
        return json.load(f)


def dche_defaults(a: float, b: float, omega: float) -> DcheParams:
    """DcheParams with (mu, kappa) from the stored one-time grid calibration.

    The calibration minimizes the residual at a small-|a| reference point;
    mu scales linearly with a, kappa is a-independent.  No (mu, kappa)
    removes the residual identically for a != 0 (the equation's coefficient
    pattern is incompatible with the system by an O(a) defect term), so the
    calibrated values are best-fit, not exact.
    """
    cal = _load_calibration()
    return DcheParams(a=a, b=b, omega=omega, mu=cal["mu_over_a"] * a, kappa=cal["kappa"])
