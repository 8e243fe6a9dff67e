"""Infinite chains of adjacency points from zeros of cylinder combinations.

An adjacency point is a parameter point (b, a, omega) with integer b where
the loop monodromy of the linear system is the identity: two consecutive
bounded tongue components touch there.  Starting from one certified point
(b, a0, omega0), every further zero a*_k of the cylinder combination

    u(s) = s^b ( J_b(s) + y0 Y_b(s) ),   y0 = -J_b(a0)/Y_b(a0),

carries its own frequency omega*_k with trivial monodromy: one seed begets
an infinite chain.  This demo reproduces the first four continuations for
b = 1 at both omega0 = 1 and omega0 = 2, re-verifying every point.

Run:  python demos/05_adjacency_chain.py
"""

from phaselock import (
    chain,
    find_seed,
    omega_from_b2b3,
    seed_y0,
    symmetric_gauge,
    verify_point,
)


def main():
    for omega0 in (1.0, 2.0):
        print(f"== seed search: b = 1, omega0 = {omega0}, a in (0, 15) ==")
        seed = find_seed(1.0, omega0, (0.0, 15.0))
        print(f"  a0 = {seed.a0:.9f}   certified residual {seed.residual:.2e}")
        print(f"  mixing constant y0 = {seed_y0(seed.b, seed.a0):+.9f}")

        points = chain(seed, k_max=4)
        print(f"  {'k':>2} {'a*_k':>12} {'omega*_k':>12} {'residual':>10}")
        for p in points:
            check = verify_point(seed.b, p.a_star, p.omega_star)
            print(f"  {p.k:>2} {p.a_star:>12.8f} {p.omega_star:>12.9f}"
                  f" {check:>10.2e}")
        print()

    print("== frequency from the junction corners ==")
    print("  the rescaled junction system carries corner entries (b2, b3)")
    print("  with b2 b3 = -1/(4 omega*^2); a diagonal gauge d symmetrizes")
    print("  them whenever b3/b2 > 0:")
    for b2, b3 in ((0.5, -0.5), (0.25, -0.25)):
        print(f"  b2={b2:+.2f} b3={b3:+.2f} -> omega* ="
              f" {omega_from_b2b3(b2, b3):.6f}")
    print(f"  b2=+1.00 b3=+16.00 -> gauge d = {symmetric_gauge(1.0, 16.0):.6f}")


if __name__ == "__main__":
    main()
