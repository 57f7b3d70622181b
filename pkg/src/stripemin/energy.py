"""Discrete free energies on uniform grids.

A :class:`Profile` stores the ``n`` interior samples ``f(i h)``, ``i = 1..n``, of a
function on ``[0, T]`` that vanishes at both ends, with ``h = T / (n + 1)``.

Quadrature rules (shared by every energy in this module):

* kinetic: forward differences ``sum (f[i+1] - f[i])^2 / h`` over all ``n + 1`` cells;
* local: trapezoid of ``F(f)``, including ``F(0)`` at the two endpoints;
* interaction: tensor trapezoid ``h^2 sum_ij f_i f_j K(x_i, x_j)``.

With these rules the per-period energy of ``f`` equals, exactly, the specific
energy of the antiperiodic extension of the discrete profile, which is what makes
the reflection inequalities hold to rounding error on the grid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import MixtureKernel, PeriodizedKernel
from .local_term import LocalTerm

__all__ = [
    "Profile",
    "EnergyBreakdown",
    "PerPeriodObjective",
    "per_period_energy",
    "per_period_gradient",
    "finite_volume_energy",
    "euler_lagrange_residual",
    "local_derivative",
]


@dataclass(frozen=True)
class Profile:
    period: float
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("a profile needs at least one interior sample")
        if not np.all(np.isfinite(values)):
            raise ValueError("profile values must be finite")
        if not self.period > 0:
            raise ValueError(f"period must be > 0, got {self.period}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "period", float(self.period))

    @classmethod
    def from_function(cls, func, period: float, n: int) -> "Profile":
        x = period / (n + 1) * np.arange(1, n + 1)
        return cls(period, func(x))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def h(self) -> float:
        return self.period / (self.n + 1)

    @property
    def x(self) -> np.ndarray:
        return self.h * np.arange(1, self.n + 1)

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """All ``n + 2`` grid points and values, endpoints included."""
        x = self.h * np.arange(self.n + 2)
        return x, np.concatenate(([0.0], self.values, [0.0]))

    def in_box(self) -> bool:
        """Membership in the clamped admissible set ``0 <= f <= 1``."""
        return bool(np.all(self.values >= 0) and np.all(self.values <= 1))

    def clamped(self) -> "Profile":
        return Profile(self.period, np.minimum(self.values, 1.0))

    def with_values(self, values) -> "Profile":
        return Profile(self.period, values)


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: float
    local: float
    interaction: float

    @property
    def total(self) -> float:
        return self.kinetic + self.local + self.interaction


def local_derivative(term: LocalTerm, f: np.ndarray) -> np.ndarray:
    """``F'`` extended oddly to negative values, right derivative at 0."""
    f = np.asarray(f, dtype=float)
    return np.sign(f + (f == 0)) * term._derivative(np.abs(f))


class PerPeriodObjective:
    """Per-period energy and its gradient for a fixed ``(T, n)`` grid.

    ``penalized=True`` replaces infinite local energies by a large finite value so
    that line searches never see ``inf``.
    """

    def __init__(self, period: float, n: int, kernel: MixtureKernel, term: LocalTerm,
                 penalized: bool = False):
        if n < 1:
            raise ValueError("need n >= 1 interior points")
        self.period = float(period)
        self.n = int(n)
        self.h = self.period / (self.n + 1)
        self.kernel = kernel
        self.term = term
        self.pk = kernel.periodized(self.period)
        self._F = term.penalized_value if penalized else term.value
        self._F0 = float(self._F(0.0))

    def _raw_parts(self, f):
        h, T = self.h, self.period
        full = np.concatenate(([0.0], f, [0.0]))
        kinetic = np.sum(np.diff(full) ** 2) / h / T
        local = h * (np.sum(self._F(f)) + self._F0) / T
        interaction = h * h * np.dot(f, self.pk.apply(f)) / T
        return np.array([kinetic, local, interaction])

    def breakdown(self, f) -> EnergyBreakdown:
        """Energy components, averaged over ``f`` and its reflection ``-f[::-1]``.

        The two evaluations agree to rounding; averaging them makes the reflection
        invariance hold bit for bit, since ``a + b == b + a`` in floating point.
        """
        f = np.asarray(f, dtype=float)
        parts = 0.5 * (self._raw_parts(f) + self._raw_parts(-f[::-1]))
        return EnergyBreakdown(*(float(p) for p in parts))

    def energy(self, f) -> float:
        return self.breakdown(f).total

    def energy_and_gradient(self, f) -> tuple[float, np.ndarray]:
        f = np.asarray(f, dtype=float)
        h, T = self.h, self.period
        full = np.concatenate(([0.0], f, [0.0]))
        d = np.diff(full)
        Kf = self.pk.apply(f)
        energy = (np.sum(d * d) / h + h * (np.sum(self._F(f)) + self._F0)
                  + h * h * np.dot(f, Kf)) / T
        grad = (2.0 * (d[:-1] - d[1:]) / h + h * local_derivative(self.term, f)
                + 2.0 * h * h * Kf) / T
        return float(energy), grad

    def gradient_from(self, f, Kf) -> np.ndarray:
        h = self.h
        d = np.diff(np.concatenate(([0.0], f, [0.0])))
        return (2.0 * (d[:-1] - d[1:]) / h + h * local_derivative(self.term, f)
                + 2.0 * h * h * Kf) / self.period

    def change(self, f, step, Kf, Kstep) -> float:
        """``e(f + step) - e(f)`` without subtracting two O(1) totals.

        Kinetic and interaction parts are quadratic and expanded exactly; the local
        part is differenced elementwise.  ``Kf``/``Kstep`` are kernel products.
        """
        h = self.h
        df = np.diff(np.concatenate(([0.0], f, [0.0])))
        ds = np.diff(np.concatenate(([0.0], step, [0.0])))
        kinetic = np.dot(ds, 2.0 * df + ds) / h
        local = h * np.sum(self._F(f + step) - self._F(f))
        interaction = h * h * (2.0 * np.dot(step, Kf) + np.dot(step, Kstep))
        return float(kinetic + local + interaction) / self.period


def per_period_energy(profile: Profile, kernel: MixtureKernel, term: LocalTerm) -> EnergyBreakdown:
    return PerPeriodObjective(profile.period, profile.n, kernel, term).breakdown(profile.values)


def per_period_gradient(profile: Profile, kernel: MixtureKernel, term: LocalTerm) -> np.ndarray:
    obj = PerPeriodObjective(profile.period, profile.n, kernel, term)
    return obj.energy_and_gradient(profile.values)[1]


def finite_volume_energy(values, length: float, kernel: MixtureKernel, term: LocalTerm,
                         boundary: str = "dirichlet") -> float:
    """Energy on ``[0, length]`` with the bare kernel ``v(x - y)``, no normalization.

    ``dirichlet``: ``values`` are the interior samples, endpoints pinned to 0,
    ``h = length / (len(values) + 1)``.
    ``free``: ``values`` are all grid samples including both endpoints,
    ``h = length / (len(values) - 1)``.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("empty profile")
    if boundary == "dirichlet":
        full = np.concatenate(([0.0], values, [0.0]))
    elif boundary == "free":
        if values.size < 2:
            raise ValueError("free boundary needs at least two samples")
        full = values
    else:
        raise ValueError(f"unknown boundary {boundary!r}")
    h = length / (full.size - 1)
    weights = np.ones(full.size)
    weights[[0, -1]] = 0.5
    kinetic = np.sum(np.diff(full) ** 2) / h
    local = h * np.dot(weights, term.value(full))
    wf = weights * full
    interaction = h * h * np.dot(wf, kernel.convolve(wf, h))
    return float(kinetic + local + interaction)


def euler_lagrange_residual(profile: Profile, kernel: MixtureKernel, term: LocalTerm) -> float:
    """Sup-norm residual of ``f'' = F'(f)/2 + int K(x, y) f(y) dy`` at interior nodes.

    ``f''`` is the centered second difference.  The integral is taken exactly over
    the piecewise-linear interpolant of the samples, so it is not the same
    quadrature the discrete energy uses; at a discrete stationary point the
    residual therefore measures the O(h^2) discretization error.
    """
    _, full = profile.nodes()
    h = profile.h
    d2 = (full[:-2] - 2.0 * full[1:-1] + full[2:]) / (h * h)
    pk = kernel.periodized(profile.period)
    integral = h * pk.apply(profile.values, interpolated=True)
    res = d2 - 0.5 * local_derivative(term, profile.values) - integral
    return float(np.max(np.abs(res)))
