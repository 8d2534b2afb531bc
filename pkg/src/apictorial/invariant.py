"""Discrete integral area invariant of a piecewise linear closed curve."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RadiusTooLargeError
from .geometry import ClosedPolyline


@dataclass(frozen=True, eq=False)
class Signature:
    """Integral area invariant at every boundary point of one piece."""

    values: np.ndarray
    radius: float

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def full_disk_area(self) -> float:
        return math.pi * self.radius**2

    def __len__(self):
        return len(self.values)


def _exit_point(center, inside, outside, r):
    """Point where segment inside -> outside crosses the circle |x - center| = r."""
    v = outside - inside
    w = inside - center
    a = v @ v
    b = 2.0 * (w @ v)
    c = w @ w - r * r
    disc = max(b * b - 4.0 * a * c, 0.0)
    t = (-b + math.sqrt(disc)) / (2.0 * a)
    return inside + min(max(t, 0.0), 1.0) * v


def invariant_at(piece: ClosedPolyline, k: int, r: float) -> float:
    """Area of the disk of radius ``r`` at point ``k`` lying to the left of the curve.

    Only the contiguous stretch of boundary through point ``k`` is
    intersected with the disk; the curve is assumed not to re-enter it.
    """
    pts = piece.points
    n = len(pts)
    if not 0 <= k < n:
        raise IndexError(f"point index {k} out of range for {n} points")
    if r <= 0:
        raise ValueError("radius must be positive")
    center = pts[k]
    r2 = r * r

    def walk(step):
        j = k
        for _ in range(n - 1):
            nxt = (j + step) % n
            d = pts[nxt] - center
            if d @ d > r2:
                return j, nxt
            j = nxt
        raise RadiusTooLargeError(
            f"boundary never leaves the disk of radius {r} around point {k}", index=k
        )

    last_fwd, out_fwd = walk(+1)
    last_bwd, out_bwd = walk(-1)
    q_plus = _exit_point(center, pts[last_fwd], pts[out_fwd], r)
    q_minus = _exit_point(center, pts[last_bwd], pts[out_bwd], r)

    # chain q-, p_{k-}, ..., p_k, ..., p_{k+}, q+ (in boundary order)
    n_bwd = (k - last_bwd) % n
    n_fwd = (last_fwd - k) % n
    idx = (k + np.arange(-n_bwd, n_fwd + 1)) % n
    chain = np.vstack([q_minus, pts[idx], q_plus]) - center
    x, y = chain[:, 0], chain[:, 1]
    poly_area = 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    # circular segment cut off by the chord q+ -> q-, arc running counter-clockwise
    a_plus = math.atan2(q_plus[1] - center[1], q_plus[0] - center[0])
    a_minus = math.atan2(q_minus[1] - center[1], q_minus[0] - center[0])
    phi = (a_minus - a_plus) % (2.0 * math.pi)
    segment = 0.5 * r2 * (phi - math.sin(phi))
    return poly_area + segment


def compute_signature(piece: ClosedPolyline, r: float) -> Signature:
    values = np.empty(len(piece))
    for k in range(len(piece)):
        values[k] = invariant_at(piece, k, r)
    return Signature(values, r)


def reverse_signature(sig: Signature) -> Signature:
    """Signature of the same curve traversed in the opposite direction."""
    return Signature(sig.full_disk_area - sig.values[::-1], sig.radius)
