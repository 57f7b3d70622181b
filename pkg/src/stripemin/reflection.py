"""Profile algebra (reflection, juxtaposition, tensor powers) and numerical checks
of the reflection-positivity inequality and the Dirichlet chessboard estimate.

All blocks of a sequence share one grid spacing; juxtaposition joins blocks at
shared zero nodes and never resamples.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .energy import Profile, finite_volume_energy, per_period_energy
from .kernel import MixtureKernel
from .local_term import LocalTerm

__all__ = [
    "ProfileSequence",
    "reflect",
    "juxtapose",
    "tensor_power",
    "sequence_energy",
    "cross_interaction",
    "lemma1_check",
    "chessboard_check",
    "random_bump",
    "random_sequence",
    "lemma1_campaign",
    "chessboard_campaign",
    "CheckResult",
]

_H_RTOL = 1e-9


def reflect(f: Profile) -> Profile:
    """``(theta f)(x) = -f(T - x)``."""
    return Profile(f.period, -f.values[::-1])


@dataclass(frozen=True)
class ProfileSequence:
    """Blocks ``f_{-M+1}, ..., f_0 | f_1, ..., f_N``; ``split_index`` is ``M``."""

    blocks: tuple[Profile, ...]
    split_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not 0 <= self.split_index <= len(self.blocks):
            raise ValueError("split_index out of range")
        if self.blocks:
            h0 = self.blocks[0].h
            for b in self.blocks[1:]:
                if abs(b.h - h0) > _H_RTOL * h0:
                    raise ValueError(f"blocks must share grid spacing: {b.h} vs {h0}")

    @property
    def minus(self) -> tuple[Profile, ...]:
        return self.blocks[: self.split_index]

    @property
    def plus(self) -> tuple[Profile, ...]:
        return self.blocks[self.split_index:]

    @property
    def length(self) -> float:
        return float(sum(b.period for b in self.blocks))

    @property
    def h(self) -> float:
        return self.blocks[0].h


def _reflect_blocks(blocks: Sequence[Profile]) -> tuple[Profile, ...]:
    return tuple(reflect(b) for b in reversed(blocks))


def juxtapose(seq: ProfileSequence | Sequence[Profile]) -> Profile:
    """Concatenate blocks, joined at shared zero nodes, into one Dirichlet profile."""
    if not isinstance(seq, ProfileSequence):
        seq = ProfileSequence(tuple(seq))
    if not seq.blocks:
        raise ValueError("cannot juxtapose an empty sequence")
    parts = []
    for i, b in enumerate(seq.blocks):
        if i:
            parts.append([0.0])
        parts.append(b.values)
    return Profile(seq.length, np.concatenate(parts))


def tensor_power(f: Profile, m: int) -> tuple[Profile, ...]:
    """``f, theta f, f, theta f, ...`` with ``2**m`` blocks."""
    g = reflect(f)
    return tuple(f if i % 2 == 0 else g for i in range(2**m))


def sequence_energy(blocks: Sequence[Profile], kernel: MixtureKernel, term: LocalTerm) -> float:
    """Dirichlet energy of the juxtaposition; zero for the empty sequence."""
    if not blocks:
        return 0.0
    g = juxtapose(blocks)
    return finite_volume_energy(g.values, g.period, kernel, term, "dirichlet")


def cross_interaction(f: Profile, g: Profile, kernel: MixtureKernel) -> float:
    """``2 int_0^T1 int_T1^{T1+T2} f(x) v(x - y) g(y - T1)``, i.e. the interaction
    between the two halves of the juxtaposition ``(f, g)``."""
    whole = juxtapose([f, g])
    h = whole.h
    left = np.concatenate((f.values, np.zeros(g.n + 1)))
    right = np.concatenate((np.zeros(f.n + 1), g.values))
    return float(2.0 * h * h * np.dot(left, kernel.convolve(right, h)))


@dataclass(frozen=True)
class CheckResult:
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    def holds(self, rel_tol: float) -> bool:
        return self.margin >= -rel_tol * (1.0 + abs(self.lhs))


def lemma1_check(seq: ProfileSequence, kernel: MixtureKernel, term: LocalTerm) -> CheckResult:
    """``E(F) >= E(theta F+, F+)/2 + E(F-, theta F-)/2`` for the split ``F = (F-, F+)``."""
    lhs = sequence_energy(seq.blocks, kernel, term)
    plus, minus = seq.plus, seq.minus
    first = _reflect_blocks(plus) + plus
    second = minus + _reflect_blocks(minus)
    rhs = 0.5 * sequence_energy(first, kernel, term) + 0.5 * sequence_energy(second, kernel, term)
    return CheckResult(lhs, rhs)


def chessboard_check(seq: ProfileSequence | Sequence[Profile], kernel: MixtureKernel,
                     term: LocalTerm) -> CheckResult:
    """``E(juxtaposition) >= sum_i T_i e(|f_i|)`` for blocks of constant sign."""
    blocks = seq.blocks if isinstance(seq, ProfileSequence) else tuple(seq)
    for i, b in enumerate(blocks):
        if np.any(b.values > 0) and np.any(b.values < 0):
            raise ValueError(f"block {i} changes sign")
    lhs = sequence_energy(blocks, kernel, term)
    rhs = sum(b.period * per_period_energy(Profile(b.period, np.abs(b.values)), kernel, term).total
              for b in blocks)
    return CheckResult(lhs, float(rhs))


def random_bump(rng: np.random.Generator, n: int, h: float, signed: bool = False,
                knots: int = 6) -> Profile:
    """Smoothed random piecewise-linear block with zero ends.

    Amplitude is uniform in [0, 1]; with ``signed`` the knots take both signs,
    otherwise the block is nonnegative.
    """
    T = (n + 1) * h
    kx = np.linspace(0.0, T, knots + 2)
    ky = rng.uniform(-1.0 if signed else 0.0, 1.0, knots + 2)
    ky[[0, -1]] = 0.0
    x = h * np.arange(n + 2)
    raw = np.interp(x, kx, ky)
    width = max(1, min(n // 8, 7))
    smooth = np.convolve(raw, np.ones(2 * width + 1) / (2 * width + 1), mode="same")
    smooth *= np.sin(np.pi * x / T)       # restores the zero ends after smoothing
    peak = np.max(np.abs(smooth[1:-1]))
    scale = rng.uniform(0.0, 1.0) / peak if peak > 0 else 0.0
    return Profile(T, scale * smooth[1:-1])


def random_sequence(rng: np.random.Generator, h: float = 0.02, max_blocks: int = 4,
                    signed: bool = True, n_range: tuple[int, int] = (10, 150)) -> ProfileSequence:
    count = int(rng.integers(1, max_blocks + 1))
    blocks = []
    for _ in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        b = random_bump(rng, n, h, signed=signed)
        if not signed and rng.uniform() < 0.5:
            b = Profile(b.period, -b.values)
        blocks.append(b)
    split = int(rng.integers(0, count + 1))
    return ProfileSequence(tuple(blocks), split)


def lemma1_campaign(seed: int, cases: int, kernel: MixtureKernel, term: LocalTerm,
                    h: float = 0.02) -> list[dict]:
    rows = []
    for i in range(cases):
        rng = np.random.default_rng([seed, i])
        seq = random_sequence(rng, h=h, signed=True)
        r = lemma1_check(seq, kernel, term)
        rows.append(dict(seed=seed, case=i, check="lemma1", blocks=len(seq.blocks),
                         lhs=r.lhs, rhs=r.rhs, margin=r.margin))
    return rows


def chessboard_campaign(seed: int, cases: int, kernel: MixtureKernel, term: LocalTerm,
                        h: float = 0.02) -> list[dict]:
    rows = []
    for i in range(cases):
        rng = np.random.default_rng([seed, i])
        seq = random_sequence(rng, h=h, signed=False)
        r = chessboard_check(seq, kernel, term)
        rows.append(dict(seed=seed, case=i, check="chessboard", blocks=len(seq.blocks),
                         lhs=r.lhs, rhs=r.rhs, margin=r.margin))
    return rows
