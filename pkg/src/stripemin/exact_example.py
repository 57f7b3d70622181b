"""Exactly solvable case: ``v(x) = lam * exp(-|x|)`` and ``F(t) = (|t| - 1)^2``.

For this pair the constant competitor, the kink joining ``-phi0`` to ``+phi0``,
and the kink's excess energy over the constant are all elementary, and the
excess changes sign at ``lam = 3/2``.

The kink on ``x >= 0`` is ``phi0 * (1 - Re[exp(i theta) exp(-z x)] / cos theta)``
with ``z = mu1 - i mu2``, so every derivative is ``Re[(-z)^k ...]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect

__all__ = [
    "KinkParameters",
    "constant_solution",
    "kink_parameters",
    "kink_profile",
    "kink_derivative",
    "quartic_ode_residual",
    "integro_ode_residual",
    "energy_difference",
    "critical_lambda",
]


@dataclass(frozen=True)
class KinkParameters:
    coupling: float
    mu1: float
    mu2: float
    theta: float
    phi0: float

    @property
    def z(self) -> complex:
        return complex(self.mu1, -self.mu2)


def constant_solution(lam: float) -> tuple[float, float]:
    """``(phi0, e)`` of the best constant: ``phi0 = 1/(1+2 lam)``, ``e = 2 lam/(1+2 lam)``."""
    if lam < 0:
        raise ValueError("coupling must be >= 0")
    return 1.0 / (1.0 + 2.0 * lam), 2.0 * lam / (1.0 + 2.0 * lam)


def kink_parameters(lam: float) -> KinkParameters:
    if not lam > 0:
        raise ValueError("coupling must be > 0")
    theta = math.asin(math.sqrt(2.0 * lam / (1.0 + 2.0 * lam)))
    modulus = (1.0 + 2.0 * lam) ** 0.25
    return KinkParameters(
        coupling=float(lam),
        mu1=modulus * math.cos(theta / 2.0),
        mu2=modulus * math.sin(theta / 2.0),
        theta=theta,
        phi0=1.0 / (1.0 + 2.0 * lam),
    )


def kink_derivative(params: KinkParameters, x, order: int = 0):
    """``order``-th derivative of the kink at ``x >= 0`` (order 0 is the profile)."""
    x = np.asarray(x, dtype=float)
    z = params.z
    osc = np.real(np.exp(1j * params.theta) * (-z) ** order * np.exp(-z * x))
    const = 1.0 if order == 0 else 0.0
    return params.phi0 * (const - osc / math.cos(params.theta))


def kink_profile(params: KinkParameters, x):
    """The kink, extended to ``x < 0`` as an odd function."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * kink_derivative(params, np.abs(x), 0)


def _ode4_terms(params, x):
    lam = params.coupling
    return (-kink_derivative(params, x, 4) + 2.0 * kink_derivative(params, x, 2)
            - (1.0 + 2.0 * lam) * kink_derivative(params, x, 0) + 1.0)


def quartic_ode_residual(params: KinkParameters, x_grid) -> float:
    """``max |-phi'''' + 2 phi'' - (1 + 2 lam) phi + 1|`` over ``x_grid``."""
    x = np.asarray(x_grid, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be >= 0")
    return float(np.max(np.abs(_ode4_terms(params, x))))


def _half_line_interaction(params: KinkParameters, x: float) -> float:
    """``int_0^inf (exp(-|x-y|) - exp(-x-y)) phi(y) dy`` by adaptive quadrature.

    Truncated at ``Y = max(60/mu1, x + 60)``; beyond it ``phi = phi0`` to far
    below rounding, and that tail is added in closed form.
    """
    Y = max(60.0 / params.mu1, x + 60.0)

    def integrand(y):
        return (math.exp(-abs(x - y)) - math.exp(-x - y)) * float(kink_derivative(params, y))

    pieces = [(0.0, x), (x, min(x + 20.0, Y)), (min(x + 20.0, Y), Y)]
    total = 0.0
    for a, b in pieces:
        if b > a:
            total += quad(integrand, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    tail = params.phi0 * (math.exp(x - Y) - math.exp(-x - Y))
    return total + tail


def integro_ode_residual(params: KinkParameters, x_grid) -> float:
    """``max |-phi'' + phi - 1 + lam int_0^inf (e^{-|x-y|} - e^{-x-y}) phi(y) dy|``."""
    x = np.asarray(x_grid, dtype=float)
    if np.any(x <= 0):
        raise ValueError("x must be > 0")
    lam = params.coupling
    res = [
        -float(kink_derivative(params, xi, 2)) + float(kink_derivative(params, xi)) - 1.0
        + lam * _half_line_interaction(params, float(xi))
        for xi in x
    ]
    return float(np.max(np.abs(res)))


def energy_difference(lam: float) -> float:
    """Kink energy minus constant energy.

    ``2 phi0 int_0^inf exp(-mu1 x) cos(mu2 x + theta) / cos(theta) dx``
    ``= 2 phi0 (mu1 cos theta - mu2 sin theta) / ((mu1^2 + mu2^2) cos theta)``.
    """
    p = kink_parameters(lam)
    c, s = math.cos(p.theta), math.sin(p.theta)
    return 2.0 * p.phi0 * (p.mu1 * c - p.mu2 * s) / ((p.mu1**2 + p.mu2**2) * c)


def critical_lambda(bracket: tuple[float, float] = (0.1, 10.0), xtol: float = 1e-12) -> float:
    """Coupling at which the kink and the constant have equal energy."""
    a, b = bracket
    fa, fb = energy_difference(a), energy_difference(b)
    if fa * fb > 0:
        raise RuntimeError(f"energy difference does not change sign on {bracket}")
    return float(bisect(energy_difference, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps))
