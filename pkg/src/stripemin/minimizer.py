"""Constrained minimization of the per-period energy and the phase classification.

The inner problem minimizes the discrete per-period energy over profiles with
``0 <= f <= 1`` and zero endpoints (projected gradient descent, Barzilai-Borwein
trial steps, monotone Armijo backtracking).  The outer problem scans the
half-period ``T``, refines the best scan point by golden-section search in
``log T`` and compares with the constant branch.

The half-period ``T`` is the length of one positive block; the full minimizer is
the antiperiodic extension with period ``2T``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .energy import EnergyBreakdown, PerPeriodObjective, Profile
from .kernel import MixtureKernel
from .local_term import LocalTerm, constant_branch
from .search import golden_section

log = logging.getLogger(__name__)

__all__ = [
    "SolverOptions",
    "InnerSolveReport",
    "PhasePoint",
    "SweepError",
    "inner_minimize",
    "outer_minimize",
    "phase_sweep",
    "locate_transition",
    "grid_size",
]


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-8                 # projected-gradient sup norm, times (1 + |e|)
    max_iter: int = 50_000
    backtrack: float = 0.5
    armijo: float = 1e-4
    h_target: float = 0.02
    t_range: tuple[float, float] = (0.5, 60.0)
    scan_points: int = 24
    golden_tol: float = 1e-3          # bracket width in log T
    margin: float = 1e-4
    random_restarts: int = 0
    seed: Optional[int] = None

    def __post_init__(self):
        if not (self.tol > 0 and self.margin > 0 and self.h_target > 0 and self.golden_tol > 0):
            raise ValueError("tolerances must be positive")
        if not (0 < self.backtrack < 1 and 0 < self.armijo < 1):
            raise ValueError("backtracking constants must lie in (0, 1)")
        lo, hi = self.t_range
        if not 0 < lo < hi:
            raise ValueError(f"invalid T range {self.t_range}")
        if self.scan_points < 3:
            raise ValueError("need at least 3 scan points")


@dataclass
class InnerSolveReport:
    profile: Profile
    energy: EnergyBreakdown
    projected_gradient_norm: float
    iterations: int
    converged: bool
    history: np.ndarray = field(default=None, repr=False)


@dataclass
class PhasePoint:
    coupling: float
    optimal_half_period: Optional[float]
    minimum_energy: float
    constant_energy: float
    regime: str                       # "periodic", "constant" or "unclassified"
    pg_norm: float = 0.0
    iterations: int = 0
    flagged: bool = False
    scan: list = field(default_factory=list, repr=False)


class SweepError(RuntimeError):
    def __init__(self, message, points):
        super().__init__(message)
        self.points = points


def grid_size(period: float, h_target: float) -> int:
    """Smallest ``n >= 3`` with ``T / (n + 1) <= h_target``."""
    return max(3, math.ceil(period / h_target - 1e-12) - 1)


def _projected_gradient(f, g):
    return f - np.clip(f - g, 0.0, 1.0)


def _descend(obj: PerPeriodObjective, f0: np.ndarray, opts: SolverOptions) -> InnerSolveReport:
    f = np.clip(np.asarray(f0, dtype=float), 0.0, 1.0)
    Kf = obj.pk.apply(f)
    e = obj.energy(f)
    g = obj.gradient_from(f, Kf)
    history = [e]
    # the Hessian of the kinetic part is bounded by 8 / (T h)
    safe_step = obj.period * obj.h / 8.0
    step = safe_step
    pg = np.max(np.abs(_projected_gradient(f, g)))
    it = 0
    converged = pg <= opts.tol * (1.0 + abs(e))
    while not converged and it < opts.max_iter:
        it += 1
        d = np.clip(f - step * g, 0.0, 1.0) - f
        slope = float(np.dot(g, d))
        if slope >= 0:
            step = safe_step
            d = np.clip(f - step * g, 0.0, 1.0) - f
            slope = float(np.dot(g, d))
            if slope >= 0:
                break
        Kd = obj.pk.apply(d)
        t = 1.0
        while t >= 1e-16:
            de = obj.change(f, t * d, Kf, t * Kd)
            if de <= opts.armijo * t * slope:
                break
            t *= opts.backtrack
        else:
            break          # no sufficient decrease representable in floating point
        f_new = f + t * d
        Kf_new = Kf + t * Kd
        g_new = obj.gradient_from(f_new, Kf_new)
        s = t * d
        y = g_new - g
        sy = float(np.dot(s, y))
        step = float(np.dot(s, s)) / sy if sy > 0 else step * 2.0
        step = min(max(step, 1e-12), 1e12)
        f, Kf, g = f_new, Kf_new, g_new
        e += de
        history.append(e)
        pg = np.max(np.abs(_projected_gradient(f, g)))
        converged = pg <= opts.tol * (1.0 + abs(e))
    profile = Profile(obj.period, f)
    return InnerSolveReport(
        profile=profile,
        energy=obj.breakdown(f),
        projected_gradient_norm=float(pg),
        iterations=it,
        converged=bool(converged),
        history=np.asarray(history),
    )


def initial_profiles(period: float, n: int, t0: float, opts: SolverOptions) -> list[np.ndarray]:
    """Deterministic multistart set, plus seeded random restarts if requested."""
    x = period / (n + 1) * np.arange(1, n + 1)
    starts = [c * np.sin(np.pi * x / period) for c in (0.25, 0.5, 0.9)]
    height = min(1.0, 2.0 * t0)
    width = min(1.0, period / 4.0)
    starts.append(height * np.clip(np.minimum(x, period - x) / width, 0.0, 1.0))
    if opts.random_restarts:
        rng = np.random.default_rng(opts.seed)
        for _ in range(opts.random_restarts):
            raw = rng.uniform(0.0, 1.0, n)
            starts.append(np.convolve(raw, np.ones(5) / 5, mode="same") * np.sin(np.pi * x / period))
    return starts


def inner_minimize(period: float, n: int, kernel: MixtureKernel, term: LocalTerm,
                   options: Optional[SolverOptions] = None, starts: Optional[Sequence] = None,
                   ) -> InnerSolveReport:
    """Approximate ``e_T``: the minimum per-period energy at half-period ``T``."""
    opts = options or SolverOptions()
    if not period > 0:
        raise ValueError("period must be > 0")
    if n < 3:
        raise ValueError("need n >= 3 interior points")
    obj = PerPeriodObjective(period, n, kernel, term, penalized=True)
    if starts is None:
        t0, _ = constant_branch(term, kernel)
        starts = initial_profiles(period, n, t0, opts)
    best = None
    for f0 in starts:
        rep = _descend(obj, f0, opts)
        key = (not rep.converged, rep.energy.total)
        if best is None or key < (not best.converged, best.energy.total):
            best = rep
    return best


def _solve_at(period, kernel, term, opts, cache):
    if period not in cache:
        n = grid_size(period, opts.h_target)
        cache[period] = inner_minimize(period, n, kernel, term, opts)
    return cache[period]


def outer_minimize(kernel: MixtureKernel, term: LocalTerm,
                   t_range: Optional[tuple[float, float]] = None,
                   options: Optional[SolverOptions] = None) -> PhasePoint:
    """Minimize ``e_T`` over ``T`` and classify the regime against the constant branch."""
    opts = options or SolverOptions()
    if t_range is not None:
        opts = replace(opts, t_range=tuple(t_range))
    lo, hi = opts.t_range
    _, e_const = constant_branch(term, kernel)
    cache: dict[float, InnerSolveReport] = {}

    periods = np.geomspace(lo, hi, opts.scan_points)
    energies = np.array([_solve_at(float(T), kernel, term, opts, cache).energy.total
                         for T in periods])
    k = int(np.argmin(energies))          # argmin returns the first, i.e. smallest T
    best_T = float(periods[k])
    interior = 0 < k < len(periods) - 1
    if interior:
        res = golden_section(
            lambda s: _solve_at(float(np.exp(s)), kernel, term, opts, cache).energy.total,
            math.log(periods[k - 1]), math.log(periods[k + 1]), tol=opts.golden_tol)
        if res.fx < energies[k]:
            best_T = float(np.exp(res.x))
    rep = cache[best_T]
    e_min = rep.energy.total
    scan = sorted((T, r.energy.total) for T, r in cache.items())

    point = PhasePoint(
        coupling=kernel.strength,
        optimal_half_period=None,
        minimum_energy=e_min,
        constant_energy=e_const,
        regime="constant",
        pg_norm=rep.projected_gradient_norm,
        iterations=rep.iterations,
        scan=scan,
    )
    if not rep.converged:
        point.regime = "unclassified"
        point.flagged = True
        return point
    if interior and e_min < e_const - opts.margin:
        point.regime = "periodic"
        point.optimal_half_period = best_T
    else:
        # the constant profile is the T -> infinity limit and is always admissible
        point.flagged = e_min < e_const
        point.minimum_energy = min(e_min, e_const)
    log.info("lambda=%g regime=%s T*=%s e0=%.9g e_const=%.9g", kernel.strength, point.regime,
             point.optimal_half_period, point.minimum_energy, e_const)
    return point


def phase_sweep(couplings: Iterable[float], kernel: MixtureKernel, term: LocalTerm,
                options: Optional[SolverOptions] = None, map_fn=map) -> list[PhasePoint]:
    """One :class:`PhasePoint` per coupling, the kernel shape fixed and its strength varied.

    ``map_fn`` may be a pool's ``map``; results are returned in input order.
    """
    couplings = [float(c) for c in couplings]
    if any(c < 0 for c in couplings):
        raise ValueError("couplings must be nonnegative")
    if couplings != sorted(couplings):
        raise ValueError("couplings must be sorted")
    tasks = [(kernel.with_strength(c), term, options) for c in couplings]
    points = list(map_fn(_sweep_task, tasks))
    bad = [p for p in points if p.regime == "unclassified"]
    if bad:
        raise SweepError(f"{len(bad)} unclassified point(s): "
                         + ", ".join(f"lambda={p.coupling:g}" for p in bad), points)
    return points


def _sweep_task(task):
    kernel, term, options = task
    return outer_minimize(kernel, term, options=options)


def locate_transition(kernel: MixtureKernel, term: LocalTerm, lo: float, hi: float,
                      width: float = 0.05, options: Optional[SolverOptions] = None):
    """Bisect on the regime flag; ``lo`` must classify constant and ``hi`` periodic.

    Returns ``(lo, hi, points)`` with ``hi - lo <= width``.
    """
    points = {}

    def regime(c):
        p = outer_minimize(kernel.with_strength(c), term, options=options)
        points[c] = p
        if p.regime == "unclassified":
            raise SweepError(f"unclassified point at lambda={c:g}", [p])
        return p.regime

    if regime(lo) != "constant" or regime(hi) != "periodic":
        raise SweepError("bracket does not straddle the transition", list(points.values()))
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if regime(mid) == "periodic":
            hi = mid
        else:
            lo = mid
    return lo, hi, [points[c] for c in sorted(points)]
