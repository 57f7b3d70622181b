"""Reflection positivity and the chessboard bound on random discrete profiles.

Run:  python3 demos/04_reflection_checks.py

Splitting a chain of blocks and replacing each half by its mirrored double never
raises the average energy (first check).  A chain of constant-sign blocks costs
at least the sum of the per-period energies of its blocks (second check).  Both
hold exactly on the grid, so the margins are never negative beyond rounding.
"""
import numpy as np

from stripemin import LocalTerm, MixtureKernel, inner_minimize, reflect, single_exponential
from stripemin.reflection import chessboard_campaign, chessboard_check, lemma1_campaign

kernel = MixtureKernel.from_components(2.0, [(0.3, 0.5), (0.7, 2.0)])
term = LocalTerm("quartic")

for name, rows in (("split-and-mirror", lemma1_campaign(42, 100, kernel, term)),
                   ("chessboard", chessboard_campaign(42, 100, kernel, term))):
    rel = np.array([r["margin"] / (1 + abs(r["lhs"])) for r in rows])
    print(f"{name:>17}: {len(rows)} cases, min relative margin {rel.min():+.3e}, "
          f"median {np.median(rel):.3e}")

# near equality: a stretch of the periodic minimizer itself
lam_kernel, vee = single_exponential(3.0), LocalTerm("vee")
phi = inner_minimize(2.8, 139, lam_kernel, vee).profile
for count in (1, 3, 7):
    blocks = [phi if i % 2 == 0 else reflect(phi) for i in range(count)]
    r = chessboard_check(blocks, lam_kernel, vee)
    print(f"{count} alternating blocks: margin per block {r.margin / count:.5f}")
