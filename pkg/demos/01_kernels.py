"""Exponential-mixture kernels and their periodized form.

Run:  python3 demos/01_kernels.py

A kernel is a positive mixture of decaying exponentials.  On a block [0, T] whose
antiperiodic extension is considered, the interaction collapses to a periodized
kernel with a closed form; this script compares it with brute-force image sums
and shows that it is positive on the open square.
"""
import numpy as np

from stripemin import MixtureKernel, power_law_approximation, single_exponential

kernel = MixtureKernel.from_components(1.0, [(0.5, 1.0), (0.5, 2.0)])
print("v(1)              =", kernel(1.0))
print("integral of v     =", kernel.total_integral())

# closed form vs brute force sum over images
T, x, y = 1.0, 0.3, 0.8
n = np.arange(-50, 51)
brute = np.sum(kernel(2 * n * T + y - x) - kernel(y + x + 2 * n * T))
print(f"periodized at ({x}, {y}): closed {kernel.periodized(T)(x, y):.15f}  images {brute:.15f}")

# far from the walls the periodized kernel forgets the period
far = single_exponential(1.0).periodized(50.0)
print("T=50, (1, 2):", far(1.0, 2.0), " vs e^-1 - e^-3 =", np.exp(-1) - np.exp(-3))

# positivity on an interior grid
grid = np.linspace(0, 2.0, 22)[1:-1]
matrix = kernel.periodized(2.0)(grid[:, None], grid[None, :])
print("min over 20x20 interior grid:", matrix.min())

# a power law built as a mixture: v(x) x^2 is nearly flat in the middle of the range
pl = power_law_approximation(2.0, 40, (0.1, 10.0))
for xi in (0.5, 1.0, 2.0, 5.0):
    print(f"x={xi:<4} v(x) x^2 = {pl(xi) * xi**2:.4f}")
