"""Adjacency points of the phase-lock ODE family and their infinite chains.

An adjacency point (b, a) for frequency omega is a parameter triple whose
2x2 linear system has trivial monodromy (identity loop matrix).  Seeds are
located by scanning the monodromy identity residual; from a seed with
mixing constant y0 = -J_b(a0)/Y_b(a0) the zeros a*_1 < a*_2 < ... of
u(s) = s^b (J_b(s) + y0 Y_b(s)) above a0 generate an infinite chain of
further adjacency points, each at its own frequency omega*_k.

omega*_k is reconstructed numerically: for each zero a*_k the identity
residual is minimized over omega, then certified at a second loop radius.
The closed-form candidate omega0 * a0 * u'(a0) / (a*_k * u'(a*_k)) is
recorded alongside as `omega_formula`: it does *not* reproduce the
certified frequencies (the residual at the formula value is O(1)), and is
kept as a diagnostic only.

For non-integer b the monodromy cannot be trivial (its determinant
e^{-2 pi i b} != 1), but the chain construction still preserves the
monodromy conjugacy class: boundary_chain matches the loop trace instead
of the identity, tracking Arnold-tongue boundaries across zeros of u.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .monodromy import monodromy_loop, triviality_residual
from .odeint import Tolerances
from .rotation import JosephsonParams
from .specfun import BesselCombo, bessel_pair, find_zeros, u_eval

__all__ = [
    "AdjacencySeed",
    "ChainPoint",
    "BoundaryPoint",
    "seed_y0",
    "seed_combo",
    "verify_point",
    "find_seed",
    "chain",
    "omega_from_b2b3",
    "symmetric_gauge",
    "boundary_chain",
]

CERTIFY_RESIDUAL = 1e-3
SCAN_STEP = 0.05
SCAN_CANDIDATE_THRESHOLD = 0.5
# omega*_k initial guess: omega decays roughly like a^-0.45 along measured
# chains; the bracket around the guess is wide enough to absorb the
# approximation at every step.
_OMEGA_DECAY = 0.45
_BRACKET = (0.55, 1.15)
_BRACKET_POINTS = 40
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class AdjacencySeed:
    b: float
    a0: float
    omega0: float
    residual: float

    def __post_init__(self):
        if not (self.a0 > 0 and self.omega0 > 0):
            raise ValueError("seed requires a0 > 0 and omega0 > 0")


@dataclass(frozen=True)
class ChainPoint:
    k: int
    a_star: float
    omega_star: float
    verify_residual: float
    omega_formula: float


@dataclass(frozen=True)
class BoundaryPoint:
    k: int
    a_star: float
    omega_star: float
    trace: complex
    discriminant: complex
    trace_drift: float


def seed_y0(b: float, a0: float) -> float:
    """Mixing constant y0 = -J_b(a0)/Y_b(a0), making u vanish at a0.

    Returns math.inf (the pure-Y combination flag) when Y_b(a0) itself
    vanishes at the seed.
    """
    if a0 <= 0:
        raise ValueError("a0 must be positive")
    J, Y, _, _ = bessel_pair(b, a0)
    if abs(Y) < 1e-14:
        return math.inf
    return -J / Y


def seed_combo(b: float, a0: float) -> BesselCombo:
    """Cylinder combination whose zeros generate the chain from (b, a0)."""
    return BesselCombo(order=b, mix=seed_y0(b, a0))


def _residual_at(b: float, a: float, omega: float, radius: float | None = None,
                 tol: Tolerances | None = None) -> float:
    params = JosephsonParams(b=b, a=a, omega=omega)
    if radius is None and tol is None:
        return triviality_residual(params)
    kwargs = {}
    if tol is not None:
        kwargs["tol"] = tol
    return monodromy_loop(params, radius=radius, **kwargs).identity_residual


def verify_point(b: float, a: float, omega: float, tol: Tolerances | None = None) -> float:
    """Identity residual of the loop monodromy at (b, a, omega).

    Values below 1e-3 certify an adjacency point when b is an integer; for
    non-integer b the determinant e^{-2 pi i b} != 1 bounds the residual
    away from zero regardless of (a, omega).
    """
    if a == 0:
        raise ValueError("a must be nonzero")
    return _residual_at(b, a, omega, tol=tol)


def _golden_min(f, lo: float, hi: float, rel_tol: float = 1e-11, max_iter: int = 90):
    """Golden-section minimum of f on [lo, hi]; returns (x, f(x))."""
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= rel_tol * (abs(lo) + abs(hi)):
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def find_seed(b: float, omega: float, a_range, tol: Tolerances | None = None) -> AdjacencySeed:
    """Smallest-a certified adjacency point for integer b on a_range.

    Scans the identity residual on a 0.05-step grid, refines every local
    minimum below 0.5 by golden section, certifies at residual < 1e-3 and
    polishes toward 1e-6.
    """
    if abs(b - round(b)) > 1e-12:
        raise ValueError("true adjacency requires integer b")
    if b < 0:
        raise ValueError("scan is restricted to b >= 0 (use the b -> -b symmetry)")
    if omega <= 0:
        raise ValueError("omega must be positive")
    a_lo, a_hi = float(a_range[0]), float(a_range[1])
    if a_lo < 0 or a_hi <= a_lo:
        raise ValueError("a_range must be positive and increasing")
    a_lo = max(a_lo, SCAN_STEP)
    if a_hi <= a_lo:
        raise ValueError("a_range is empty after excluding a = 0")

    n = int(math.ceil((a_hi - a_lo) / SCAN_STEP))
    grid = np.linspace(a_lo, a_hi, n + 1)
    res = np.array([_residual_at(b, a, omega, tol=tol) for a in grid])

    def objective(a):
        return _residual_at(b, a, omega, tol=tol)

    for i in range(1, n):
        if res[i] >= SCAN_CANDIDATE_THRESHOLD:
            continue
        if not (res[i] <= res[i - 1] and res[i] <= res[i + 1]):
            continue
        a_best, r_best = _golden_min(objective, grid[i - 1], grid[i + 1])
        if r_best < CERTIFY_RESIDUAL:
            # secondary polish: tighten the bracket around the certified
            # minimum until the residual target or the width floor is hit
            width = max(1e-4, 0.02 * SCAN_STEP)
            while r_best > 1e-6 and width > 1e-12:
                a_best, r_best = _golden_min(objective, a_best - width, a_best + width)
                width *= 0.02
            return AdjacencySeed(b=b, a0=float(a_best), omega0=omega, residual=float(r_best))
    raise RuntimeError(
        f"no adjacency in range: residual never certified below {CERTIFY_RESIDUAL} "
        f"for b={b}, omega={omega} on a in ({a_lo}, {a_hi})"
    )


def _chain_zeros(combo: BesselCombo, a0: float, k_max: int, below: bool = False):
    """Zeros of u covering the seed and k_max zeros above it (and below, optionally)."""
    lo = 0.05 if below else max(0.05, a0 - 0.5)
    hi = a0 + (k_max + 1) * math.pi * 1.25 + 2.0
    for _ in range(6):
        zeros = find_zeros(combo, (lo, hi)).zeros
        if zeros.size == 0:
            hi += (k_max + 2) * math.pi
            continue
        i0 = int(np.argmin(np.abs(zeros - a0)))
        if abs(zeros[i0] - a0) > 1e-6:
            raise RuntimeError(
                f"seed zero not found: u has no zero within 1e-6 of a0={a0!r}"
            )
        if zeros.size - i0 >= k_max + 1:
            if below:
                return zeros[: i0 + k_max + 1], i0
            return zeros[i0 : i0 + k_max + 1], 0
        hi += (k_max + 2) * math.pi
    raise RuntimeError(
        f"could not collect {k_max} zeros of u above the seed a0={a0!r}"
    )


def _solve_omega(objective, guess: float):
    """Bracket-scan + golden refinement of an omega-residual objective."""
    ws = guess * np.logspace(math.log10(_BRACKET[0]), math.log10(_BRACKET[1]), _BRACKET_POINTS)
    vals = np.array([objective(w) for w in ws])
    i = int(np.argmin(vals))
    lo = ws[max(i - 1, 0)]
    hi = ws[min(i + 1, len(ws) - 1)]
    return _golden_min(objective, lo, hi)


def _omega_formula(combo: BesselCombo, a0: float, omega0: float, a_star: float) -> float:
    _, du0 = u_eval(combo, a0)
    _, duk = u_eval(combo, a_star)
    return omega0 * a0 * du0 / (a_star * duk)


def chain(seed: AdjacencySeed, k_max: int, tol: Tolerances | None = None) -> list[ChainPoint]:
    """Chain of adjacency points from the seed: k = 0 (the seed) to k_max.

    a*_k are the zeros of u above the seed; omega*_k is certified by
    minimizing the identity residual over omega and re-verified at loop
    radius 2.  Zeros where u' vanishes are skipped.  The recorded
    verify_residual is the max over both radii.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    combo = seed_combo(seed.b, seed.a0)
    zeros, _ = _chain_zeros(combo, seed.a0, k_max)
    points: list[ChainPoint] = []
    omega_prev, a_prev = seed.omega0, seed.a0
    for k, a_star in enumerate(zeros):
        _, du = u_eval(combo, a_star)
        if abs(du) < 1e-8:
            warnings.warn(
                f"chain point k={k} skipped: u'({a_star!r}) ~ 0 (double zero)",
                RuntimeWarning,
                stacklevel=2,
            )
            continue
        formula = _omega_formula(combo, seed.a0, seed.omega0, a_star)
        if k == 0:
            points.append(
                ChainPoint(k=0, a_star=float(a_star), omega_star=seed.omega0,
                           verify_residual=seed.residual, omega_formula=formula)
            )
            continue
        guess = omega_prev * (a_prev / a_star) ** _OMEGA_DECAY

        def objective(w):
            return _residual_at(seed.b, a_star, w, tol=tol)

        omega_star, _ = _solve_omega(objective, guess)
        r_default = _residual_at(seed.b, a_star, omega_star, tol=tol)
        r_radius2 = _residual_at(seed.b, a_star, omega_star, radius=2.0, tol=tol)
        points.append(
            ChainPoint(k=k, a_star=float(a_star), omega_star=float(omega_star),
                       verify_residual=float(max(r_default, r_radius2)),
                       omega_formula=float(formula))
        )
        omega_prev, a_prev = omega_star, a_star
    return points


def omega_from_b2b3(b2: float, b3: float) -> float:
    """Frequency from the off-diagonal product: b2*b3 = -1/(4 omega*^2)."""
    prod = b2 * b3
    if prod >= 0:
        raise ValueError(f"no real omega*: b2*b3 = {prod!r} is not negative")
    return 1.0 / (2.0 * math.sqrt(-prod))


def symmetric_gauge(b2: float, b3: float) -> float:
    """Diagonal gauge d with b2*d^2 = b3/d^2, symmetrizing the off-diagonal pair."""
    if b2 == 0:
        raise ValueError("no real symmetric gauge: b2 = 0")
    ratio = b3 / b2
    if ratio <= 0:
        raise ValueError(f"no real symmetric gauge: b3/b2 = {ratio!r} <= 0")
    return ratio**0.25


def _trace_and_disc(b: float, a: float, omega: float, tol: Tolerances | None = None):
    params = JosephsonParams(b=b, a=a, omega=omega)
    result = monodromy_loop(params) if tol is None else monodromy_loop(params, tol=tol)
    M = result.matrix
    tr = complex(np.trace(M))
    det = complex(np.linalg.det(M))
    return tr, tr * tr - 4.0 * det


def boundary_chain(
    b: float,
    a0: float,
    omega0: float,
    k_max: int,
    include_below_seed: bool = False,
    tol: Tolerances | None = None,
) -> list[BoundaryPoint]:
    """Chain continuation for arbitrary real b, preserving the loop trace.

    Instead of the identity (unreachable for non-integer b), each zero of u
    gets the omega that matches the seed's monodromy trace; the returned
    points record the achieved trace, the eigenvalue discriminant
    tr^2 - 4 det, and the residual trace drift.  k_max = 0 gives [].
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if k_max == 0:
        return []
    combo = seed_combo(b, a0)
    zeros, i0 = _chain_zeros(combo, a0, k_max, below=include_below_seed)
    tr0, disc0 = _trace_and_disc(b, a0, omega0, tol=tol)
    points: list[BoundaryPoint] = []
    omega_prev, a_prev = omega0, a0
    for j, a_star in enumerate(zeros):
        k = j - i0
        _, du = u_eval(combo, a_star)
        if abs(du) < 1e-8:
            warnings.warn(
                f"boundary point k={k} skipped: u'({a_star!r}) ~ 0 (double zero)",
                RuntimeWarning,
                stacklevel=2,
            )
            continue
        if k == 0:
            points.append(
                BoundaryPoint(k=0, a_star=float(a_star), omega_star=omega0,
                              trace=tr0, discriminant=disc0, trace_drift=0.0)
            )
            continue
        guess = omega_prev * (a_prev / a_star) ** _OMEGA_DECAY
        if k < 0:
            guess = omega0 * (a0 / a_star) ** _OMEGA_DECAY

        def objective(w):
            tr, _ = _trace_and_disc(b, a_star, w, tol=tol)
            return abs(tr - tr0)

        omega_star, drift = _solve_omega(objective, guess)
        tr, disc = _trace_and_disc(b, a_star, omega_star, tol=tol)
        points.append(
            BoundaryPoint(k=k, a_star=float(a_star), omega_star=float(omega_star),
                          trace=tr, discriminant=disc, trace_drift=float(drift))
        )
        if k > 0:
            omega_prev, a_prev = omega_star, a_star
    return points
