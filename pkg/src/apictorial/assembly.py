"""Comparison graph, fit quality and spanning-tree assemblies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from itertools import combinations

import numpy as np

from .alignment import EpsilonFit, epsilon_fit
from .errors import ApictorialError, InvalidInputError, NoAssemblyError
from .geometry import IDENTITY, ClosedPolyline, RigidMotion2D, compose_motions
from .invariant import Signature, compute_signature
from .registration import FitRecord, procrustes_fit

CONSISTENCY_MODES = ("off", "transform", "overlap")


@dataclass(frozen=True)
class AssemblyConfig:
    """Parameters of the assembly pipeline; lengths in pixels, angles in radians.

    ``epsilon=None`` means ``0.1 * r**2``. ``refine_offset`` is how many
    neighbouring index offsets of each fit are re-registered, keeping the
    smallest residual; 0 uses the epsilon-fit as found.
    """

    delta: float = 15.0
    r: float = 50.0
    epsilon: float | None = None
    sigma_star: float = 115.0
    theta_star: float = math.pi / 20
    tau_star: float = 30.0
    alpha_star: float = 1 / 80
    beta_star: float = 0.5
    cycle_length: int = 4
    quality_exponent: float = 1.0
    iterations: int = 5
    consistency: str = "off"
    prefilter: bool = True
    max_cycles: int = 10_000_000
    refine_offset: int = 1

    def __post_init__(self):
        positive = ("delta", "r", "sigma_star", "theta_star", "tau_star", "alpha_star")
        for name in positive:
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be positive")
        if self.epsilon is not None and not self.epsilon > 0:
            raise InvalidInputError("epsilon must be positive")
        if not 0 < self.beta_star < 1:
            raise InvalidInputError("beta_star must lie in (0, 1)")
        if self.cycle_length < 3:
            raise InvalidInputError("cycle_length must be at least 3")
        if self.refine_offset < 0:
            raise InvalidInputError("refine_offset must be >= 0")
        if self.iterations < 1:
            raise InvalidInputError("iterations must be at least 1")
        if self.consistency not in CONSISTENCY_MODES:
            raise InvalidInputError(f"consistency must be one of {CONSISTENCY_MODES}")

    @property
    def eps(self) -> float:
        return 0.1 * self.r**2 if self.epsilon is None else self.epsilon

    @classmethod
    def from_mapping(cls, values: dict) -> AssemblyConfig:
        known = {f.name: f for f in fields(cls)}
        unknown = set(values) - set(known)
        if unknown:
            raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**values)

    def to_mapping(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def fit_quality(rec: FitRecord | None, cfg: AssemblyConfig) -> float:
    """``d / length**e``, or infinity when the fit is empty or too featureless."""
    if rec is None or rec.length == 0:
        return math.inf
    if min(rec.sigma_a, rec.sigma_b) < cfg.sigma_star:
        return math.inf
    return rec.d / rec.length**cfg.quality_exponent


@dataclass
class PieceRecord:
    polyline: ClosedPolyline
    signature: Signature | None = None
    id: str = ""


@dataclass
class Edge:
    i: int
    j: int
    record: FitRecord | None
    weight: float
    tag: str | None = None


@dataclass
class ComparisonGraph:
    """Complete graph on pieces; ``edges[i, j]`` (``i < j``) holds the fit of P_i with P_j.

    The stored motion maps P_j into P_i's frame.
    """

    pieces: list[PieceRecord]
    edges: dict[tuple[int, int], Edge]
    _shapes: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self):
        return len(self.pieces)

    def edge(self, i: int, j: int) -> Edge:
        return self.edges[(i, j) if i < j else (j, i)]

    def weight(self, i: int, j: int) -> float:
        return self.edge(i, j).weight

    def motion(self, i: int, j: int) -> RigidMotion2D:
        """Motion placing P_j next to P_i, expressed in P_i's frame."""
        e = self.edge(i, j)
        if e.record is None:
            raise ApictorialError(f"edge ({i}, {j}) has no fit")
        return e.record.g if i < j else e.record.g.inverse()

    def finite_edges(self) -> list[tuple[int, int]]:
        return sorted(k for k, e in self.edges.items() if math.isfinite(e.weight))

    def with_weights(self, weights: dict) -> ComparisonGraph:
        edges = {k: replace(e, weight=weights.get(k, e.weight)) for k, e in self.edges.items()}
        return ComparisonGraph(self.pieces, edges, self._shapes)

    def weights(self) -> dict[tuple[int, int], float]:
        return {k: e.weight for k, e in self.edges.items()}


def graph_from_motions(pieces, motions: dict, weights: dict | None = None) -> ComparisonGraph:
    """Hand-built comparison graph: ``motions[i, j]`` maps P_j into P_i's frame."""
    recs = [p if isinstance(p, PieceRecord) else PieceRecord(p, None, str(k)) for k, p in enumerate(pieces)]
    edges = {}
    for i, j in combinations(range(len(recs)), 2):
        if (i, j) in motions:
            g = motions[i, j]
        elif (j, i) in motions:
            g = motions[j, i].inverse()
        else:
            edges[i, j] = Edge(i, j, None, math.inf, "absent")
            continue
        fit = EpsilonFit(i, j, 0, 0, 2, 0.0)
        w = 1.0 if weights is None else weights.get((i, j), weights.get((j, i), 1.0))
        edges[i, j] = Edge(i, j, FitRecord(fit, g, 0.0, 0.0, 0.0), w)
    return ComparisonGraph(recs, edges)


def build_comparison_graph(pieces, cfg: AssemblyConfig, ids=None) -> ComparisonGraph:
    """Signatures, pairwise epsilon-fits, Procrustes records and weights.

    ``pieces`` must already be resampled at a common spacing.
    """
    polys = [p.polyline if isinstance(p, PieceRecord) else p for p in pieces]
    if len(polys) < 2:
        raise InvalidInputError("a comparison graph needs at least 2 pieces")
    ids = list(ids) if ids is not None else [str(k) for k in range(len(polys))]
    recs = [PieceRecord(p, compute_signature(p, cfg.r), pid) for p, pid in zip(polys, ids)]
    edges = {}
    for i, j in combinations(range(len(recs)), 2):
        edges[i, j] = _compare(recs[i], recs[j], i, j, cfg)
    return ComparisonGraph(recs, edges)


def _compare(a: PieceRecord, b: PieceRecord, i: int, j: int, cfg: AssemblyConfig) -> Edge:
    fit = epsilon_fit(a.signature, b.signature, cfg.eps, i, j)
    if fit.length < 2:
        return Edge(i, j, None, math.inf, "empty-fit")
    try:
        rec = procrustes_fit(a.polyline, b.polyline, fit, a.signature, b.signature)
    except ApictorialError as exc:
        return Edge(i, j, None, math.inf, exc.category)
    if cfg.refine_offset:
        rec = _refine_offset(a, b, rec, cfg.refine_offset)
    return Edge(i, j, rec, fit_quality(rec, cfg))


def _refine_offset(a: PieceRecord, b: PieceRecord, rec: FitRecord, radius: int) -> FitRecord:
    # A loose epsilon can let the longest run sit one sample off the true
    # correspondence; the residual tells the offsets apart.
    fit, nb = rec.fit, len(b.polyline)
    best = rec
    for s in range(-radius, radius + 1):
        if s == 0:
            continue
        shifted = replace(fit, j=(fit.j + s) % nb)
        try:
            cand = procrustes_fit(a.polyline, b.polyline, shifted, a.signature, b.signature)
        except ApictorialError:
            continue
        if cand.d < best.d:
            best = cand
    return best


def compare_pair(P: ClosedPolyline, Q: ClosedPolyline, cfg: AssemblyConfig) -> Edge:
    """Fit record and weight for a single pair of (resampled) pieces."""
    a = PieceRecord(P, compute_signature(P, cfg.r))
    b = PieceRecord(Q, compute_signature(Q, cfg.r))
    return _compare(a, b, 0, 1, cfg)


@dataclass
class AssemblyTree:
    """Spanning tree of fits with one placement per piece (root fixed at identity)."""

    edges: list[tuple[int, int]]
    placements: list[RigidMotion2D]
    root: int = 0

    def place(self, pieces) -> list[ClosedPolyline]:
        return [ClosedPolyline(g.apply(p.points)) for g, p in zip(self.placements, pieces)]


class _DisjointSet:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def minimum_spanning_tree(G: ComparisonGraph) -> AssemblyTree:
    """Kruskal over finite-weight edges; ties broken by edge id ``(i, j)``."""
    n = len(G)
    if n == 1:
        return AssemblyTree([], [IDENTITY], 0)
    order = sorted(G.finite_edges(), key=lambda k: (G.edges[k].weight, k))
    ds = _DisjointSet(n)
    chosen = []
    for i, j in order:
        if ds.union(i, j):
            chosen.append((i, j))
            if len(chosen) == n - 1:
                break
    if len(chosen) < n - 1:
        root = ds.find(0)
        unreachable = [k for k in range(n) if ds.find(k) != root]
        names = [G.pieces[k].id or str(k) for k in unreachable]
        raise NoAssemblyError(
            f"no finite-weight spanning tree; pieces not connected to the root: {names}",
            unreachable,
        )
    return AssemblyTree(sorted(chosen), tree_placements(G, chosen, root=0), 0)


def tree_placements(G: ComparisonGraph, tree_edges, root: int = 0) -> list[RigidMotion2D]:
    """Compose fit motions outward from ``root`` along the tree."""
    n = len(G)
    nbrs = {k: [] for k in range(n)}
    for i, j in tree_edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    placements: list[RigidMotion2D | None] = [None] * n
    placements[root] = IDENTITY
    stack = [root]
    while stack:
        u = stack.pop()
        for v in sorted(nbrs[u]):
            if placements[v] is None:
                placements[v] = compose_motions(placements[u], G.motion(u, v))
                stack.append(v)
    return placements


def tree_weight(G: ComparisonGraph, tree: AssemblyTree) -> float:
    return float(sum(G.weight(i, j) for i, j in tree.edges))


def placement_errors(tree: AssemblyTree, pieces, true_motions) -> np.ndarray:
    """Per-point distance between estimated and true placement, after the best global motion."""
    from .registration import rigid_align

    est = np.vstack([g.apply(p.points) for g, p in zip(tree.placements, pieces)])
    truth = np.vstack([g.apply(p.points) for g, p in zip(true_motions, pieces)])
    glob, _ = rigid_align(truth, est)
    return np.linalg.norm(truth - glob.apply(est), axis=1)
