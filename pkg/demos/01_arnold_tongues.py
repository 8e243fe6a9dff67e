"""Rotation numbers and Arnold tongues of the driven junction equation.

The circle flow

    d(phi)/d(tau) = (-sin(phi) + b*omega + a*cos(tau)) / omega

has a rotation number rho(b, a; omega).  Parameter regions where rho locks
to an integer ("tongues") have nonempty interior; their boundaries in b, at
fixed drive amplitude a, approach r -+ J_r(a)/omega for large a.

Run:  python demos/01_arnold_tongues.py
"""

import numpy as np

from phaselock import (
    JosephsonParams,
    rho_axis_analytic,
    rotation_number,
    scan_grid,
    trace_boundary,
)


def main():
    omega = 2.0

    print("== closed form on the a = 0 axis ==")
    for b in (0.25, 0.5, 1.0, 2.0):
        est = rotation_number(JosephsonParams(b, 0.0, omega), target=1e-9)
        exact = rho_axis_analytic(b, omega)
        print(f"  b={b:4.2f}  rho={est.rho:+.9f}  closed form {exact:+.9f}"
              f"  (defect {abs(est.rho - exact):.1e})")

    print("\n== coarse tongue map, omega = 2 ==")
    b_vals = np.linspace(0.0, 1.6, 17)
    a_vals = np.linspace(0.0, 4.0, 9)
    grid = scan_grid(b_vals, a_vals, omega, target=1e-6)
    print("  rows: b from 0 to 1.6; columns: a from 0 to 4;"
          " '0'/'1' = locked, '.' = between")
    for i, b in enumerate(grid.b_values):
        row = ""
        for j in range(grid.a_values.size):
            rho = grid.rho[i, j]
            if abs(rho) < 1e-3:
                row += "0"
            elif abs(rho - 1.0) < 1e-3:
                row += "1"
            else:
                row += "."
        print(f"  b={b:4.2f}  {row}")

    print("\n== boundary of the rho = 1 tongue vs the cylinder-function"
          " prediction ==")
    a_samples = [6.0, 12.0, 18.0]
    curve = trace_boundary(1, "minus", a_samples, omega)
    from phaselock import bessel_pair

    for a, b in zip(curve.a_values, curve.b_values):
        j1 = bessel_pair(1.0, float(a))[0]
        pred = 1.0 + j1 / omega
        print(f"  a={a:5.1f}  b_-={b:+.6f}  1 + J_1(a)/omega = {pred:+.6f}"
              f"  gap*sqrt(a) = {abs(b - pred) * np.sqrt(a):.2e}")


if __name__ == "__main__":
    main()
