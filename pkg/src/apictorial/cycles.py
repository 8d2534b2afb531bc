"""Cycle graphs of the comparison graph and their consistency checks."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import shapely.affinity

from .assembly import ComparisonGraph
from .boolean import shape_intersection_area, to_shapely
from .errors import CycleLimitError
from .geometry import IDENTITY, RigidMotion2D, compose_motions


@dataclass
class CycleGraphRecord:
    """A cycle on distinct pieces, stored from its smallest vertex.

    Flags stay ``None`` until the corresponding check has been run.
    """

    vertices: tuple[int, ...]
    transformation_consistent: bool | None = None
    overlap_consistent: bool | None = None

    def edges(self) -> list[tuple[int, int]]:
        v = self.vertices
        return [tuple(sorted((v[t], v[(t + 1) % len(v)]))) for t in range(len(v))]

    def rotations(self):
        v = self.vertices
        for s in range(len(v)):
            yield v[s:] + v[:s]


def enumerate_cycle_graphs(
    G: ComparisonGraph, k: int, finite_only: bool = True, max_cycles: int | None = None
) -> list[CycleGraphRecord]:
    """Every cycle graph of length ``k``, each reported once.

    A cycle is listed from its smallest vertex, in the direction whose
    second vertex is smaller than its last.
    """
    if k < 3:
        raise ValueError("cycle length must be at least 3")
    n = len(G)
    keys = G.finite_edges() if finite_only else sorted(G.edges)
    adj = {v: set() for v in range(n)}
    for i, j in keys:
        adj[i].add(j)
        adj[j].add(i)
    nbrs = {v: sorted(adj[v]) for v in range(n)}
    out = []

    def extend(path, on_path):
        last = path[-1]
        if len(path) == k:
            if path[0] in adj[last] and path[1] < last:
                out.append(CycleGraphRecord(tuple(path)))
                if max_cycles is not None and len(out) > max_cycles:
                    raise CycleLimitError(f"more than {max_cycles} cycle graphs of length {k}")
            return
        for w in nbrs[last]:
            if w > path[0] and w not in on_path:
                path.append(w)
                on_path.add(w)
                extend(path, on_path)
                on_path.discard(w)
                path.pop()

    for s in range(n):
        extend([s], {s})
    return out


def cycle_motion(G: ComparisonGraph, vertices) -> RigidMotion2D:
    """``g_{v0 v1} g_{v1 v2} ... g_{v(k-1) v0}``, a motion of P_{v0}'s frame."""
    g = IDENTITY
    k = len(vertices)
    for t in range(k):
        g = compose_motions(g, G.motion(vertices[t], vertices[(t + 1) % k]))
    return g


def transformation_consistency_check(
    cycle: CycleGraphRecord, G: ComparisonGraph, theta_star: float, tau_star: float
) -> bool:
    for start in cycle.rotations():
        g = cycle_motion(G, start)
        if not (abs(g.theta) < theta_star and math.hypot(g.tx, g.ty) < tau_star):
            cycle.transformation_consistent = False
            return False
    cycle.transformation_consistent = True
    return True


def _shape(G: ComparisonGraph, v: int):
    shape = G._shapes.get(v)
    if shape is None:
        shape = to_shapely(G.pieces[v].polyline, validate=False)
        G._shapes[v] = shape
    return shape


def _moved(shape, g: RigidMotion2D):
    c, s = math.cos(g.theta), math.sin(g.theta)
    return shapely.affinity.affine_transform(shape, [c, -s, s, c, g.tx, g.ty])


def overlap_consistency_check(cycle: CycleGraphRecord, G: ComparisonGraph, alpha_star: float) -> bool:
    """Pieces placed along the cycle must overlap by less than ``alpha_star`` of their combined area."""
    for start in cycle.rotations():
        placed, g = [], IDENTITY
        for t, v in enumerate(start):
            if t > 0:
                g = compose_motions(g, G.motion(start[t - 1], v))
            placed.append(_moved(_shape(G, v), g))
        areas = [p.area for p in placed]
        for a in range(len(placed)):
            for b in range(a + 1, len(placed)):
                limit = alpha_star * (areas[a] + areas[b])
                if shape_intersection_area(placed[a], placed[b]) >= limit:
                    cycle.overlap_consistent = False
                    return False
    cycle.overlap_consistent = True
    return True


def cycle_counts(cycles) -> Counter:
    """Number of the given cycle graphs containing each edge."""
    counts = Counter()
    for cyc in cycles:
        counts.update(cyc.edges())
    return counts


def apply_cycle_reweighting(G: ComparisonGraph, consistent_cycles, beta_star: float) -> ComparisonGraph:
    """Multiply each edge weight by ``beta_star ** c``, c = number of consistent cycles through it."""
    if not 0 < beta_star < 1:
        raise ValueError("beta_star must lie in (0, 1)")
    counts = cycle_counts(consistent_cycles)
    new = {key: (beta_star**c) * G.edges[key].weight for key, c in counts.items()}
    return G.with_weights(new)
