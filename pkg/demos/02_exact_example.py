"""The solvable case: v(x) = lam e^{-|x|} with F(t) = (|t| - 1)^2.

Run:  python3 demos/02_exact_example.py

The best constant has height 1/(1 + 2 lam).  A single antisymmetric kink is
known in closed form, and the sign of its excess energy over the constant tells
which one wins.  The crossing is at lam = 3/2.
"""
import numpy as np

from stripemin.exact_example import (
    constant_solution,
    critical_lambda,
    energy_difference,
    integro_ode_residual,
    kink_parameters,
    kink_profile,
    quartic_ode_residual,
)

print(f"{'lambda':>7} {'phi0':>9} {'e_const':>9} {'kink - const':>13}")
for lam in (0.5, 1.0, 1.5, 2.0, 3.0):
    phi0, e = constant_solution(lam)
    print(f"{lam:7.2f} {phi0:9.5f} {e:9.5f} {energy_difference(lam):13.6f}")

print("\ncrossing at", critical_lambda())

p = kink_parameters(3.0)
x = np.linspace(0, 20, 1000)
print("\nlambda = 3 kink")
print("  4th-order ODE residual :", quartic_ode_residual(p, x))
print("  integral-equation residual:", integro_ode_residual(p, np.linspace(0.1, 10, 20)))
for xi in (0.0, 0.5, 1.0, 2.0, 4.0, 8.0):
    # the kink overshoots phi0 and then rings down
    print(f"  phi({xi:>3}) = {kink_profile(p, xi):+.5f}")
