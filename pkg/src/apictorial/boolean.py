"""Area of intersection of simple polygons."""

from __future__ import annotations

import numpy as np
import shapely
from shapely.errors import GEOSException
from shapely.geometry import Polygon

from .errors import InvalidPolygonError
from .geometry import ClosedPolyline


def to_shapely(poly: ClosedPolyline | np.ndarray, *, validate: bool = True) -> Polygon:
    pts = poly.points if isinstance(poly, ClosedPolyline) else np.asarray(poly, dtype=float)
    shape = Polygon(pts)
    if validate and not shape.is_valid:
        raise InvalidPolygonError(f"polygon is not simple: {shapely.is_valid_reason(shape)}")
    return shape


def _jittered(shape: Polygon, seed: int) -> Polygon:
    pts = np.asarray(shape.exterior.coords)[:-1]
    scale = 1e-9 * float(np.ptp(pts, axis=0).max())
    rng = np.random.default_rng(seed)
    return Polygon(pts + rng.uniform(-scale, scale, size=pts.shape))


def shape_intersection_area(a: Polygon, b: Polygon) -> float:
    """Intersection area of two already-validated shapely polygons."""
    ax0, ay0, ax1, ay1 = a.bounds
    bx0, by0, bx1, by1 = b.bounds
    if ax0 >= bx1 or bx0 >= ax1 or ay0 >= by1 or by0 >= ay1:
        return 0.0
    # fixed operand order keeps area(a & b) == area(b & a) bit for bit
    if (a.bounds, a.area) > (b.bounds, b.area):
        a, b = b, a
    try:
        return float(a.intersection(b).area)
    except GEOSException:
        # vertex/edge degeneracy: perturb both inputs by ~1e-9 of their extent
        return float(_jittered(a, 1).intersection(_jittered(b, 2)).area)


def polygon_intersection_area(P: ClosedPolyline, Q: ClosedPolyline) -> float:
    """Area of the intersection of the interiors of two simple polygons.

    Polygons that only touch along edges or at points give 0.
    """
    return shape_intersection_area(to_shapely(P), to_shapely(Q))
