"""Even double-well local free-energy densities ``F``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq
from scipy.special import xlogy

from .kernel import MixtureKernel
from .search import golden_section

__all__ = ["LocalTerm", "constant_branch", "PENALTY"]

# finite stand-in for +inf inside line searches
PENALTY = 1e30

VARIANTS = ("quartic", "vee", "entropy")


@dataclass(frozen=True)
class LocalTerm:
    """One of

    * ``quartic``: ``F(t) = (t^2 - 1)^2``
    * ``vee``:     ``F(t) = (|t| - 1)^2``
    * ``entropy``: ``F(t) = a(t) - a(1)`` with the mean-field entropy
      ``a(t) = -t^2 + [(1+At)log(1+At) + (1-At)log(1-At)] / (A beta)``, ``A = tanh(beta)``,
      and ``F = +inf`` for ``|t| >= 1/A``.
    """

    variant: str
    beta: Optional[float] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown local term {self.variant!r}; choose from {VARIANTS}")
        if self.variant == "entropy":
            if self.beta is None or not self.beta > 0:
                raise ValueError("entropy variant needs beta > 0")
            object.__setattr__(self, "beta", float(self.beta))

    @property
    def alpha(self) -> float:
        return float(np.tanh(self.beta))

    @property
    def convex_on_positive(self) -> bool:
        """Whether ``F`` is convex on ``t > 0``.

        The entropy density has ``F''(0+) = 2(tanh(beta)/beta - 1) < 0``, so it is
        only convex away from the origin.
        """
        return self.variant == "vee"

    def _entropy_a(self, t):
        A, b = self.alpha, self.beta
        return -t * t + (xlogy(1 + A * t, 1 + A * t) + xlogy(1 - A * t, 1 - A * t)) / (A * b)

    def value(self, t):
        """``F(t)``; ``inf`` outside the entropy domain."""
        t = np.asarray(t, dtype=float)
        if self.variant == "quartic":
            return (t * t - 1.0) ** 2
        if self.variant == "vee":
            return (np.abs(t) - 1.0) ** 2
        inside = np.abs(t) < 1.0 / self.alpha
        ts = np.where(inside, t, 0.0)
        return np.where(inside, self._entropy_a(ts) - self._entropy_a(1.0), np.inf)

    __call__ = value

    def penalized_value(self, t):
        """Same as :meth:`value` but with :data:`PENALTY` in place of ``inf``."""
        v = self.value(t)
        return np.where(np.isfinite(v), v, PENALTY)

    def derivative_pos(self, t):
        """``F'(t)`` for ``t > 0``."""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise ValueError("derivative_pos needs t > 0")
        return self._derivative(t)

    def _derivative(self, t):
        # one-sided derivative from the right at t = 0
        if self.variant == "quartic":
            return 4.0 * t * (t * t - 1.0)
        if self.variant == "vee":
            return 2.0 * (t - 1.0)
        A, b = self.alpha, self.beta
        if np.any(t >= 1.0 / A):
            raise ValueError("entropy derivative requested outside |t| < 1/tanh(beta)")
        return -2.0 * t + 2.0 * np.arctanh(A * t) / b

    def second_derivative_pos(self, t):
        t = np.asarray(t, dtype=float)
        if self.variant == "quartic":
            return 12.0 * t * t - 4.0
        if self.variant == "vee":
            return np.full_like(t, 2.0)
        A, b = self.alpha, self.beta
        return -2.0 + 2.0 * A / (b * (1.0 - (A * t) ** 2))


def constant_branch(term: LocalTerm, kernel: MixtureKernel, tol: float = 1e-12):
    """Minimize ``g(t) = F(t) + t^2 * integral(v)`` over ``t in (0, 1]``.

    Returns ``(t0, g(t0))``.  ``g`` is increasing past ``t = 1`` for every variant,
    so the search is confined to ``[0, 1]``; a golden-section bracket is polished
    with a root find on ``g'`` when ``g'`` changes sign inside it.
    """
    mass = kernel.total_integral()

    def g(t):
        return float(term.penalized_value(t)) + mass * t * t

    def dg(t):
        return float(term._derivative(np.float64(t))) + 2.0 * mass * t

    res = golden_section(g, 0.0, 1.0, tol=1e-9)
    t0 = res.x
    lo, hi = max(res.lo - 1e-8, 0.0), min(res.hi + 1e-8, 1.0)
    if hi > lo and dg(hi) > 0 > dg(max(lo, 1e-300)):
        t0 = brentq(dg, max(lo, 1e-300), hi, xtol=tol, rtol=4 * np.finfo(float).eps)
    elif dg(1.0) <= 0:
        t0 = 1.0
    return t0, g(t0)
