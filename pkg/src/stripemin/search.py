"""Golden-section search on a bracket, returning the best point it evaluated."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class GoldenResult:
    x: float
    fx: float
    lo: float
    hi: float
    evaluations: int


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-8,
                   max_iter: int = 200) -> GoldenResult:
    """Minimize a unimodal ``f`` on ``[a, b]`` until the bracket is narrower than ``tol``.

    Ties go to the left point, so among equal values the smaller abscissa wins.
    """
    if b < a:
        a, b = b, a
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    best = (fc, c) if fc <= fd else (fd, d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            cand = (fc, c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            cand = (fd, d)
        evals += 1
        if cand[0] < best[0] or (cand[0] == best[0] and cand[1] < best[1]):
            best = cand
    return GoldenResult(x=best[1], fx=best[0], lo=a, hi=b, evaluations=evals)
