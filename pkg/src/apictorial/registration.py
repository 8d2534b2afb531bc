"""Rigid registration of matched boundary substrings."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alignment import EpsilonFit
from .errors import DegenerateConfigurationError, UnderdeterminedFitError
from .geometry import ClosedPolyline, RigidMotion2D
from .invariant import Signature


@dataclass(frozen=True)
class FitRecord:
    """An epsilon-fit with its aligning motion and quality measurements.

    ``g`` maps piece B into piece A's frame. ``d`` is the raw sum of squared
    distances after alignment.
    """

    fit: EpsilonFit
    g: RigidMotion2D
    d: float
    sigma_a: float
    sigma_b: float

    @property
    def length(self) -> int:
        return self.fit.length


def rigid_align(x: np.ndarray, y: np.ndarray) -> tuple[RigidMotion2D, float]:
    """Motion ``g`` minimising ``sum |x_k - g y_k|^2`` and the minimum."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise UnderdeterminedFitError(f"need at least 2 matched points, got {len(x)}")
    xbar, ybar = x.mean(axis=0), y.mean(axis=0)
    xc, yc = x - xbar, y - ybar
    if not np.any(xc) or not np.any(yc):
        raise DegenerateConfigurationError("all matched points of one substring coincide")
    # 2x2 cross-covariance reduces to one angle; det(R) = +1 by construction
    dot = float(np.sum(xc * yc))
    cross = float(np.sum(yc[:, 0] * xc[:, 1] - yc[:, 1] * xc[:, 0]))
    theta = math.atan2(cross, dot)
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    tau = xbar - rot @ ybar
    g = RigidMotion2D(theta, tau[0], tau[1])
    d = float(np.sum((x - g.apply(y)) ** 2))
    return g, d


def substring_stddev(sig: Signature | np.ndarray, start: int, length: int) -> float:
    """Population standard deviation of a periodic substring."""
    values = sig.values if isinstance(sig, Signature) else np.asarray(sig, dtype=float)
    idx = (start + np.arange(length)) % len(values)
    return float(np.std(values[idx]))


def procrustes_fit(
    P: ClosedPolyline,
    Q: ClosedPolyline,
    fit: EpsilonFit,
    sig_a: Signature | None = None,
    sig_b: Signature | None = None,
) -> FitRecord:
    """Align Q's fit substring onto P's (correspondence reversed along Q)."""
    if fit.length < 2:
        raise UnderdeterminedFitError(f"fit of length {fit.length} does not determine a motion")
    x = P.points[fit.indices_a(len(P))]
    y = Q.points[fit.indices_b(len(Q))]
    g, d = rigid_align(x, y)
    sa = substring_stddev(sig_a, fit.i, fit.length) if sig_a is not None else 0.0
    sb = substring_stddev(sig_b, fit.j, fit.length) if sig_b is not None else 0.0
    return FitRecord(fit, g, d, sa, sb)
