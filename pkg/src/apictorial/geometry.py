"""Planar primitives: closed polylines, rigid motions, area and resampling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvalidPolygonError, ResolutionError


def _as_points(points) -> np.ndarray:
    pts = np.array(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidPolygonError(f"expected an (n, 2) array of points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InvalidPolygonError("point coordinates must be finite")
    pts.setflags(write=False)
    return pts


@dataclass(frozen=True, eq=False)
class ClosedPolyline:
    """Ordered boundary points of a closed curve.

    The closing point is implicit: ``points[-1]`` connects back to
    ``points[0]`` and the first point is never repeated at the end.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = _as_points(self.points)
        if len(pts) < 3:
            raise InvalidPolygonError(f"a closed polyline needs at least 3 points, got {len(pts)}")
        gaps = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
        if np.any(gaps == 0.0):
            k = int(np.flatnonzero(gaps == 0.0)[0])
            raise InvalidInputError(f"adjacent points {k} and {(k + 1) % len(pts)} coincide")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def signed_area(self) -> float:
        return shoelace_area(self)

    @property
    def is_ccw(self) -> bool:
        return self.signed_area > 0

    def reversed(self) -> ClosedPolyline:
        return ClosedPolyline(self.points[::-1])

    def oriented_ccw(self) -> ClosedPolyline:
        return self if self.is_ccw else self.reversed()

    def centroid(self) -> np.ndarray:
        """Area centroid of the enclosed region."""
        p = self.points
        q = np.roll(p, -1, axis=0)
        cross = p[:, 0] * q[:, 1] - q[:, 0] * p[:, 1]
        a = cross.sum() / 2.0
        cx = ((p[:, 0] + q[:, 0]) * cross).sum() / (6.0 * a)
        cy = ((p[:, 1] + q[:, 1]) * cross).sum() / (6.0 * a)
        return np.array([cx, cy])


def polyline_from_points(points, *, collapse_duplicates=False) -> ClosedPolyline:
    """Build a ClosedPolyline, optionally dropping repeated consecutive points.

    A trailing copy of the first point is always removed.
    """
    pts = np.array(points, dtype=float)
    if len(pts) > 1 and np.array_equal(pts[0], pts[-1]):
        pts = pts[:-1]
    if collapse_duplicates and len(pts) > 1:
        keep = np.any(pts != np.roll(pts, 1, axis=0), axis=1)
        if not keep.any():
            keep[0] = True
        pts = pts[keep]
    return ClosedPolyline(pts)


def shoelace_area(poly) -> float:
    """Signed area of a polygon; positive when counter-clockwise."""
    p = poly.points if isinstance(poly, ClosedPolyline) else np.asarray(poly, dtype=float)
    if len(p) < 3:
        raise InvalidPolygonError(f"a polygon needs at least 3 vertices, got {len(p)}")
    x, y = p[:, 0], p[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * yn - xn * y))


def perimeter(poly: ClosedPolyline) -> float:
    p = poly.points
    return float(np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1).sum())


# -- resampling --------------------------------------------------------------


def _arclength_pass(pts: np.ndarray, delta: float) -> np.ndarray:
    # Steps 1-4: q_k = h(g(k delta)), k = 0..floor(d_n / delta).
    loop = np.vstack([pts, pts[:1]])
    d = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(loop, axis=0), axis=1))])
    m = int(math.floor(d[-1] / delta))
    s = delta * np.arange(m + 1)
    g = np.interp(s, d, np.arange(len(loop)))
    seg = np.minimum(np.floor(g).astype(int), len(loop) - 2)
    frac = (g - seg)[:, None]
    q = loop[seg] + frac * (loop[seg + 1] - loop[seg])
    if np.linalg.norm(q[-1] - q[0]) <= 1e-9 * delta:
        q = q[:-1]
    return q


def _chord_pass(pts: np.ndarray, delta: float) -> np.ndarray:
    """Walk the closed polyline placing points exactly ``delta`` apart (Euclidean)."""
    loop = np.vstack([pts, pts[:1]])
    nseg = len(loop) - 1
    out = [loop[0].copy()]
    c = loop[0]
    seg, t0 = 0, 0.0
    d2 = delta * delta
    while seg < nseg:
        a = loop[seg]
        v = loop[seg + 1] - a
        w = a - c
        # |w + t v|^2 = delta^2; the walk is inside the disk at t0, so take the larger root.
        qa = v @ v
        qb = 2.0 * (w @ v)
        qc = w @ w - d2
        disc = qb * qb - 4.0 * qa * qc
        if disc >= 0.0:
            t = (-qb + math.sqrt(disc)) / (2.0 * qa)
            if t0 <= t <= 1.0:
                x = a + t * v
                # point back at the start of the loop: closure, not a new sample
                if seg == nseg - 1 and np.linalg.norm(x - loop[0]) <= 1e-9 * delta:
                    break
                out.append(x)
                c, t0 = x, t
                continue
        seg += 1
        t0 = 0.0
    return np.array(out)


def resample_closed(poly: ClosedPolyline, delta: float, iterations: int = 5) -> ClosedPolyline:
    """Resample a closed polyline at fixed spacing ``delta``.

    Each iteration interpolates the curve at arclengths ``k * delta`` and
    then walks the interpolated curve so that consecutive points sit at
    Euclidean distance exactly ``delta``. The last point's gap back to the
    first is whatever is left over.
    """
    if delta <= 0:
        raise ResolutionError("delta must be positive")
    if iterations < 1:
        raise InvalidInputError("iterations must be >= 1")
    pts = poly.points
    for _ in range(iterations):
        if delta >= perimeter(ClosedPolyline(pts)) / 3.0:
            raise ResolutionError(
                f"delta={delta} is too large for a curve of perimeter {perimeter(ClosedPolyline(pts)):.6g}"
            )
        pts = _chord_pass(_arclength_pass(pts, delta), delta)
        if len(pts) < 3:
            raise ResolutionError("resampling produced fewer than 3 points")
    return ClosedPolyline(pts)


def resample_arclength(poly: ClosedPolyline, delta: float, iterations: int = 5) -> ClosedPolyline:
    """Plain arclength interpolation, without the chord equalisation step."""
    if delta <= 0:
        raise ResolutionError("delta must be positive")
    pts = poly.points
    for _ in range(iterations):
        if delta >= perimeter(ClosedPolyline(pts)) / 3.0:
            raise ResolutionError(f"delta={delta} is too large for this curve")
        pts = _arclength_pass(pts, delta)
    return ClosedPolyline(pts)


# -- rigid motions -------------------------------------------------------------


def wrap_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    t = math.remainder(theta, 2.0 * math.pi)
    if t <= -math.pi:
        t += 2.0 * math.pi
    return t


@dataclass(frozen=True)
class RigidMotion2D:
    """Rotation by ``theta`` followed by translation ``(tx, ty)``."""

    theta: float = 0.0
    tx: float = 0.0
    ty: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))
        object.__setattr__(self, "tx", float(self.tx))
        object.__setattr__(self, "ty", float(self.ty))

    @classmethod
    def from_matrix(cls, rotation, translation) -> RigidMotion2D:
        r = np.asarray(rotation, dtype=float)
        return cls(math.atan2(r[1, 0], r[0, 0]), translation[0], translation[1])

    @property
    def tau(self) -> np.ndarray:
        return np.array([self.tx, self.ty])

    @property
    def rotation(self) -> np.ndarray:
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, -s], [s, c]])

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.rotation.T + self.tau

    def __matmul__(self, other: RigidMotion2D) -> RigidMotion2D:
        return compose_motions(self, other)

    def inverse(self) -> RigidMotion2D:
        rt = self.rotation.T
        return RigidMotion2D(-self.theta, *(-(rt @ self.tau)))

    def is_identity(self, atol=1e-12) -> bool:
        return abs(self.theta) <= atol and math.hypot(self.tx, self.ty) <= atol


IDENTITY = RigidMotion2D()


def apply_motion(g: RigidMotion2D, poly: ClosedPolyline) -> ClosedPolyline:
    return ClosedPolyline(g.apply(poly.points))


def compose_motions(g1: RigidMotion2D, g2: RigidMotion2D) -> RigidMotion2D:
    """Return ``g1 o g2``: apply ``g2`` first, then ``g1``."""
    tau = g1.rotation @ g2.tau + g1.tau
    return RigidMotion2D(g1.theta + g2.theta, tau[0], tau[1])
