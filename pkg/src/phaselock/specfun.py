"""Bessel evaluations and zero finding for power-weighted cylinder combinations.

The central object is the combination

    u(s) = s^order * (J_order(s) + mix * Y_order(s)),   s > 0,

whose zeros drive the pole structure of the Bessel-type Painleve III
solutions and the adjacency chains built on top of them.  Evaluation is
delegated to scipy's cylinder functions; this module adds the domain
contract (positive argument, bounded order), the weighted combination and
its derivative, and certified zero finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special
from scipy.optimize import brentq

__all__ = ["MAX_ORDER", "BesselCombo", "ZeroList", "bessel_pair", "u_eval", "find_zeros"]

MAX_ORDER = 50.0


def bessel_pair(nu: float, s):
    """Evaluate (J_nu, Y_nu, J_nu', Y_nu') at s.

    Parameters
    ----------
    nu : float
        Order, |nu| <= 50.
    s : float or array
        Argument(s), strictly positive.

    Returns
    -------
    tuple of floats or arrays
        (J, Y, Jp, Yp) with derivatives taken in s.
    """
    if abs(nu) > MAX_ORDER:
        raise ValueError(f"unsupported order nu={nu!r}: |nu| must not exceed {MAX_ORDER}")
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0):
        raise ValueError("argument s must be strictly positive")
    return (
        special.jv(nu, s_arr),
        special.yv(nu, s_arr),
        special.jvp(nu, s_arr),
        special.yvp(nu, s_arr),
    )


@dataclass(frozen=True)
class BesselCombo:
    """Power-weighted cylinder combination s^order * (J + mix * Y).

    mix = math.inf selects the pure-Y combination s^order * Y_order(s).
    """

    order: float
    mix: float

    def __post_init__(self):
        if math.isnan(self.order) or abs(self.order) > MAX_ORDER:
            raise ValueError(
                f"unsupported order {self.order!r}: |order| must not exceed {MAX_ORDER}"
            )
        if math.isnan(self.mix):
            raise ValueError("mix must not be NaN")


def u_eval(combo: BesselCombo, s):
    """Evaluate the combination u and its derivative u' at s.

    Returns
    -------
    (u, du) : floats or arrays
        u(s) = s^b (J_b + m Y_b) and u'(s) = b s^(b-1) (J_b + m Y_b)
        + s^b (J_b' + m Y_b'), with b = combo.order, m = combo.mix.
    """
    b = combo.order
    j, y, jp, yp = bessel_pair(b, s)
    s_arr = np.asarray(s, dtype=float)
    if math.isinf(combo.mix):
        cyl, dcyl = y, yp
    else:
        m = combo.mix
        cyl, dcyl = j + m * y, jp + m * yp
    w = s_arr**b
    u = w * cyl
    du = b * s_arr ** (b - 1.0) * cyl + w * dcyl
    if np.ndim(s) == 0:
        return float(u), float(du)
    return u, du


@dataclass
class ZeroList:
    """Certified zeros of a combination on an interval.

    zeros are strictly increasing; residuals[i] = |u(zeros[i])| after the
    final Newton polish.
    """

    zeros: np.ndarray
    residuals: np.ndarray
    suspicious: list = field(default_factory=list)

    def __post_init__(self):
        self.zeros = np.asarray(self.zeros, dtype=float)
        self.residuals = np.asarray(self.residuals, dtype=float)
        if self.zeros.size != self.residuals.size:
            raise ValueError("zeros and residuals must have equal length")
        if self.zeros.size > 1 and not np.all(np.diff(self.zeros) > 0):
            raise ValueError("zeros must be strictly increasing")


_SWEEP_STEP = math.pi / 8.0
_ZERO_TOL = 1e-11


def find_zeros(combo: BesselCombo, s_range, max_count: int | None = None) -> ZeroList:
    """Locate all zeros of the combination on [s_range[0], s_range[1]].

    A sign-change sweep with step pi/8 brackets each zero (zero spacing of
    cylinder combinations is bounded well below by that for orders up to 50
    on the positive axis), bisection isolates it, and one Newton step with
    the analytic derivative polishes it.  Zeros whose polished residual
    exceeds 1e-11 are kept but flagged in ``suspicious``.
    """
    lo, hi = float(s_range[0]), float(s_range[1])
    if not (0 < lo < hi):
        raise ValueError("s_range must satisfy 0 < lo < hi")

    n = max(2, int(math.ceil((hi - lo) / _SWEEP_STEP)) + 1)
    grid = np.linspace(lo, hi, n)
    vals, _ = u_eval(combo, grid)

    zeros: list[float] = []
    residuals: list[float] = []
    suspicious: list[int] = []

    def f(s):
        return u_eval(combo, s)[0]

    for i in range(n - 1):
        va, vb = vals[i], vals[i + 1]
        root = None
        if va == 0.0:
            root = grid[i]
        elif va * vb < 0:
            root = brentq(f, grid[i], grid[i + 1], xtol=1e-13, rtol=8.9e-16)
        if root is None:
            continue
        u, du = u_eval(combo, root)
        if du != 0.0:
            root = root - u / du
        u_pol = abs(u_eval(combo, root)[0])
        if zeros and root <= zeros[-1]:
            continue
        zeros.append(float(root))
        residuals.append(u_pol)
        if u_pol > _ZERO_TOL:
            suspicious.append(len(zeros) - 1)
        if max_count is not None and len(zeros) >= max_count:
            break
    if vals[-1] == 0.0 and (not zeros or grid[-1] > zeros[-1]):
        if max_count is None or len(zeros) < max_count:
            zeros.append(float(grid[-1]))
            residuals.append(0.0)

    return ZeroList(np.array(zeros), np.array(residuals), suspicious)
