"""Maximal epsilon-alignment of periodic arrays and epsilon-fits between pieces."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .invariant import Signature, reverse_signature


@dataclass(frozen=True)
class EpsilonAlignment:
    """``A[i + k]`` is within epsilon of ``B[j + k]`` for ``k < length`` (periodic)."""

    i: int
    j: int
    length: int

    def __bool__(self):
        return self.length > 0


@dataclass(frozen=True)
class EpsilonFit:
    """Substrings ``P[i : i + length]`` and ``Q[j : j + length]`` (periodic) that fit together.

    Point ``P[i + k]`` is matched with ``Q[j + length - 1 - k]``.
    """

    piece_a: object
    piece_b: object
    i: int
    j: int
    length: int
    epsilon: float

    def __bool__(self):
        return self.length > 0

    def indices_a(self, n_a: int) -> np.ndarray:
        return (self.i + np.arange(self.length)) % n_a

    def indices_b(self, n_b: int) -> np.ndarray:
        """Indices on Q in matched order (``Q[j + length - 1]`` first)."""
        return (self.j + self.length - 1 - np.arange(self.length)) % n_b

    def swapped(self) -> EpsilonFit:
        """The same fit seen from Q's side."""
        return EpsilonFit(self.piece_b, self.piece_a, self.j, self.i, self.length, self.epsilon)


def _run_lengths(match: np.ndarray, cap: int) -> np.ndarray:
    """Length of the run of True starting at each position of a cyclic boolean array."""
    L = len(match)
    if match.all():
        return np.full(L, cap)
    doubled = np.concatenate([match, match])
    pos = np.arange(2 * L)
    # index of the next False at or after each position
    nxt = np.where(doubled, 2 * L, pos)
    nxt = np.minimum.accumulate(nxt[::-1])[::-1]
    return np.minimum(nxt[:L] - pos[:L], cap)


def max_epsilon_alignment(A, B, epsilon: float) -> EpsilonAlignment:
    """Longest epsilon-alignment of two periodic arrays.

    Diagonal ``rho`` of the scoring matrix visits cells
    ``((rho + t) % m, t % n)`` for ``t < lcm(m, n)``. Ties go to the last
    start in (rho, t) order. Runs are capped at ``min(m, n)``.
    """
    a = np.asarray(A, dtype=float)
    b = np.asarray(B, dtype=float)
    m, n = len(a), len(b)
    if m == 0 or n == 0:
        raise ValueError("arrays must be nonempty")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    g = math.gcd(m, n)
    L = m * n // g
    cap = min(m, n)
    t = np.arange(L)
    cols = t % n
    best = (0, 0, 0)  # length, i, j
    for rho in range(g):
        rows = (rho + t) % m
        match = np.abs(a[rows] - b[cols]) < epsilon
        if not match.any():
            continue
        runs = _run_lengths(match, cap)
        top = int(runs.max())
        if top >= best[0]:
            pos = int(np.flatnonzero(runs == top)[-1])
            best = (top, int(rows[pos]), int(cols[pos]))
    length, i, j = best
    return EpsilonAlignment(i, j, length)


def epsilon_fit(sig_a: Signature, sig_b: Signature, epsilon: float, piece_a=0, piece_b=1) -> EpsilonFit:
    """Longest epsilon-fit of piece A with piece B, found against B's reversed signature."""
    n = len(sig_b)
    al = max_epsilon_alignment(sig_a.values, reverse_signature(sig_b).values, epsilon)
    if not al:
        return EpsilonFit(piece_a, piece_b, 0, 0, 0, epsilon)
    # reversed position j' holds pi r^2 - b[n - 1 - j']; the fit starts at Q[j] with
    # j + length - 1 = n - 1 - j'
    j = (n - al.j - al.length) % n
    return EpsilonFit(piece_a, piece_b, al.i, j, al.length, epsilon)
