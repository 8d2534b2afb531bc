"""
Area signatures of puzzle pieces
================================

The signature of a closed curve records, at every boundary point, how much
of a small disk centred there lies inside the piece. Straight stretches
sit at half the disk, corners at a quarter, tabs and blanks swing above
and below. Run with ``python notebooks/01_signatures.py``; the figure is
written next to this file.
"""

# %%
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from apictorial import compute_signature, generate_rectangular_puzzle, resample_closed

# %% A 2x2 puzzle in its assembled frame, resampled to 15 px spacing
puzzle = generate_rectangular_puzzle(2, 2, seed=0)
piece = resample_closed(puzzle.pieces[0], 15.0, 5)
r = 50.0
sig = compute_signature(piece, r)
print(f"{len(piece)} boundary points, signature range {sig.values.min():.0f} .. {sig.values.max():.0f}")
print(f"half disk {math.pi * r * r / 2:.0f}, quarter disk {math.pi * r * r / 4:.0f}")

# %% Plot the piece next to its signature
fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(11, 4))
ax0.plot(*np.vstack([piece.points, piece.points[:1]]).T, "k-")
sc = ax0.scatter(*piece.points.T, c=sig.values, s=8, cmap="coolwarm")
ax0.set_aspect("equal")
ax0.set_title("piece r0c0 coloured by invariant")
fig.colorbar(sc, ax=ax0)
ax1.plot(sig.values, "k-", lw=1)
for level in (0.25, 0.5, 0.75):
    ax1.axhline(level * math.pi * r * r, color="grey", ls=":")
ax1.set_xlabel("boundary index")
ax1.set_ylabel("area inside disk (px^2)")
ax1.set_title(f"signature, r = {r:g} px")
fig.tight_layout()
out = Path(__file__).with_name("01_signatures.png")
fig.savefig(out, dpi=110)
print("wrote", out)
