"""Bessel-built solutions of the third Painleve equation.

For parameters (alpha, beta, gamma, delta) = (-2b, 2b - 2, 1, -1) the
Riccati reduction w' = w^2 + b/tau * w + ... linearizes, and

    w(tau) = u'(tau) / u(tau),   u(tau) = tau^b (J_b(tau) + y0 Y_b(tau)),

solves the equation.  Movable poles of w sit exactly at the zeros of u,
all with residue +1; the substitution y(t) = sqrt(t) w(sqrt(t)) moves the
solution to the t-form of the equation.

Run:  python demos/03_painleve_bessel_solutions.py
"""

import math

import numpy as np

from phaselock import (
    BesselCombo,
    bessel_w,
    integrate_p3,
    params_from_b,
    pole_residue,
    p3_residual_report,
    special_solution_class,
    t_form_residual_report,
    y_of_t,
)


def main():
    print("== the b = 1/2, y0 = 0 member is w = cot(tau) ==")
    sol = bessel_w(BesselCombo(order=0.5, mix=0.0))
    for tau in (0.4, 1.0, 2.0):
        print(f"  tau={tau:3.1f}  w={sol(tau):+.12f}"
              f"  cot={1.0 / math.tan(tau):+.12f}")

    print("\n== finite-difference residual in the equation ==")
    for b, y0 in ((0.0, 0.0), (1.0, 0.3), (2.0, -1.2)):
        s = bessel_w(BesselCombo(order=b, mix=y0))
        params = params_from_b(b)
        taus = np.linspace(0.3, 3.0, 28)
        res, excluded = p3_residual_report(s, params, taus,
                                           poles=list(s.zeros.zeros))
        print(f"  b={b:+.1f} y0={y0:+.1f}  max residual {res:.2e}"
              f"  ({len(excluded)} samples near poles excluded)")

    print("\n== movable poles carry residue +1 ==")
    s = bessel_w(BesselCombo(order=1.0, mix=0.5))
    for tau_star in s.zeros.zeros[:3]:
        r = pole_residue(s, tau_star)
        print(f"  pole at tau*={tau_star:.6f}  residue {r:+.9f}")

    print("\n== same solution in the t-form of the equation ==")
    s = bessel_w(BesselCombo(order=0.5, mix=0.0))
    params = params_from_b(0.5)
    t_samples = [t for t in np.linspace(0.5, 8.0, 12)
                 if abs(t - math.pi**2 / 4.0) > 0.3]
    res, excluded = t_form_residual_report(lambda t: y_of_t(s, t), params,
                                           t_samples)
    print(f"  y(t) = sqrt(t) w(sqrt(t)):  max t-form residual {res:.2e}"
          f"  ({len(excluded)} excluded)")

    print("\n== forward integration agrees with the closed form ==")
    tau0 = 0.4
    w0 = s(tau0)
    w0_prime = -1.0 - w0 * w0  # (cot)' = -1 - cot^2
    num = integrate_p3(params_from_b(0.5), tau0, w0, w0_prime, 1.2)
    print(f"  integrate from tau=0.4 to 1.2: w={num:+.12f}"
          f"  closed form {s(1.2):+.12f}")

    print("\n== which parameter classes admit special solutions ==")
    for b in (0.0, 0.5, 1.0, 0.3):
        p = params_from_b(b)
        cls = special_solution_class(p.alpha, p.beta)
        print(f"  b={b}: (alpha_hat, beta_hat) = ({p.alpha:+.1f}, {p.beta:+.1f})"
              f" -> {cls}")


if __name__ == "__main__":
    main()
