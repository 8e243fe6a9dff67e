"""The isomonodromic Lax family built on a Bessel-type Painleve solution.

Each solution y(t) generates a family of linear systems

    dx/dz = ( -t A(t)/z^2 + B(t)/z + diag(-1/2, 0) ) x

whose flatness (zero-curvature compatibility with a t-direction equation)
encodes the Painleve equation itself, and whose loop-monodromy trace is
independent of t.  At a pole t* of y the family degenerates to a constant
triangular system which, after the rescaling z = a* zeta, is exactly the
junction linear system at an adjacency point.

Run:  python demos/04_isomonodromic_family.py
"""

import math

import numpy as np

from phaselock import (
    BesselCombo,
    IsoFamily,
    Tolerances,
    family_at,
    isomonodromy_drift,
    loop_monodromy,
    specialize_at_pole,
    z_equation,
    zero_curvature_report,
)


def main():
    fam = IsoFamily(b=0.5, combo=BesselCombo(order=0.5, mix=0.0))

    print("== structure of the family at a sample time ==")
    c = family_at(fam, 1.3)
    print(f"  eigenvalues of A(t):  {np.sort(np.linalg.eigvals(c.A).real)}")
    print(f"  trace of B(t):        {np.trace(c.B):+.6f}   (equals -b)")

    print("\n== zero-curvature residual on a (z, t) grid ==")
    res, excluded = zero_curvature_report(fam, [0.7, 1.3, 2.6],
                                          [1.0, 2.0, 3.0])
    print(f"  max flatness defect: {res:.2e}  (excluded samples: {excluded})")

    print("\n== the loop trace is an isomonodromy invariant ==")
    t_list = [1.0, 3.25, 5.5, 7.75, 10.0]
    drift = isomonodromy_drift(fam, t_list)
    tol = Tolerances(abs_tol=1e-12, rel_tol=1e-12)
    tr = np.trace(loop_monodromy(z_equation(fam, 1.0), radius=1.0, tol=tol))
    expected = np.exp(-2j * math.pi * fam.b) + 1.0
    print(f"  tr M = {tr:.9f}")
    print(f"  e^(-2 pi i b) + 1 = {expected:.9f}")
    print(f"  max trace drift across t in [1, 10]: {drift:.2e}")

    print("\n== degeneration at a pole of y: the adjacency junction ==")
    fam1 = IsoFamily(b=0.5, combo=BesselCombo(order=0.5, mix=0.0),
                     C1_tilde=1.0)
    t_star = math.pi**2
    ps = specialize_at_pole(fam1, t_star)
    a_star = math.sqrt(t_star)
    print(f"  pole at t* = pi^2, a* = sqrt(t*) = {a_star:.6f}")
    print(f"  limiting corners: b2* = {ps.b2_star:+.9f},"
          f" b3* = {ps.b3_star:+.9f}")
    zeta = 1.4
    M = a_star * ps.system(a_star * zeta)
    print("  rescaled system a* P(a* zeta) at zeta = 1.4:")
    with np.printoptions(precision=6, suppress=True):
        print("   ", str(M).replace("\n", "\n    "))
    print(f"  1/zeta^2 coefficient and constant term are both"
          f" diag(-a*/2, 0) = diag({-a_star / 2:.6f}, 0)")


if __name__ == "__main__":
    main()
