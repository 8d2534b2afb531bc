"""Synthetic rectangular jigsaw puzzles with known solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import shapely
from shapely.geometry import LineString, Polygon

from .errors import InvalidInputError
from .geometry import IDENTITY, ClosedPolyline, RigidMotion2D, compose_motions


@dataclass(frozen=True)
class TabProfile:
    """Tab shape parameters, as fractions of the piece size.

    Each interior edge gets a trapezoidal bump whose corners are rounded
    by polyline fillets, on a baseline that undulates gently (``wave``,
    tapered to zero at the piece corners). ``variation`` is the relative
    spread applied independently to amplitude, width and fillet radius.
    """

    amplitude: float = 0.2
    width: float = 0.25
    variation: float = 0.3
    fillet: float = 0.06
    wave: float = 0.012


@dataclass(frozen=True)
class SharedArc:
    """Boundary index ranges two adjacent pieces have in common.

    ``start_a``/``count_a`` index piece ``a`` (periodic, corners included);
    ``points`` is the noiseless arc in the assembled frame, in piece a's order.
    """

    a: int
    b: int
    start_a: int
    count_a: int
    start_b: int
    count_b: int
    points: np.ndarray = field(repr=False)


@dataclass
class GroundTruthPuzzle:
    pieces: list[ClosedPolyline]
    ids: list[str]
    true_motions: list[RigidMotion2D]
    adjacency: list[tuple[int, int]]
    shared_arcs: list[SharedArc]
    rows: int
    cols: int
    piece_size: float
    decoy_pairs: list[tuple[int, int]] = field(default_factory=list)

    def assembled(self) -> list[ClosedPolyline]:
        """Pieces moved back to the assembled frame."""
        return [ClosedPolyline(g.apply(p.points)) for g, p in zip(self.true_motions, self.pieces)]

    def is_adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in set(self.adjacency)


def _sample_segments(vertices: np.ndarray, spacing: float) -> np.ndarray:
    """Points along an open polyline at spacing <= ``spacing``; last vertex excluded."""
    out = []
    for a, b in zip(vertices[:-1], vertices[1:]):
        k = max(1, math.ceil(np.linalg.norm(b - a) / spacing))
        t = np.arange(k)[:, None] / k
        out.append(a + t * (b - a))
    return np.vstack(out)


def _fillet(vertices: np.ndarray, radii, spacing: float) -> np.ndarray:
    """Round interior vertex k of an open polyline with an arc of radius ``radii[k - 1]``."""
    out = [vertices[0]]
    for k in range(1, len(vertices) - 1):
        prev, v, nxt = vertices[k - 1], vertices[k], vertices[k + 1]
        d_in = v - prev
        d_out = nxt - v
        l_in, l_out = np.linalg.norm(d_in), np.linalg.norm(d_out)
        u_in, u_out = d_in / l_in, d_out / l_out
        turn = math.atan2(u_in[0] * u_out[1] - u_in[1] * u_out[0], u_in @ u_out)
        if abs(turn) < 1e-9:
            out.append(v)
            continue
        rho = radii[k - 1]
        tangent = rho * math.tan(abs(turn) / 2)
        limit = 0.45 * min(l_in, l_out)
        if tangent > limit:
            tangent = limit
            rho = tangent / math.tan(abs(turn) / 2)
        start = v - tangent * u_in
        normal = np.array([-u_in[1], u_in[0]]) * math.copysign(1.0, turn)
        center = start + rho * normal
        a0 = math.atan2(*(start - center)[::-1])
        steps = max(2, math.ceil(rho * abs(turn) / spacing))
        for s in range(steps + 1):
            ang = a0 + turn * s / steps
            out.append(center + rho * np.array([math.cos(ang), math.sin(ang)]))
    out.append(vertices[-1])
    return np.array(out)


def _draw_tab(rng, length, size, profile: TabProfile):
    var = profile.variation
    half = 0.5 * profile.width * size * rng.uniform(1 - var, 1 + var)
    return {
        "center": length * rng.uniform(0.42, 0.58),
        "base": half,
        "top": half * rng.uniform(0.8, 1.2),
        "skew": half * rng.uniform(-0.1, 0.1),
        "height": profile.amplitude * size * rng.uniform(1 - var, 1 + var) * rng.choice([-1.0, 1.0]),
        "fillets": profile.fillet * size * rng.uniform(1 - var, 1 + var, size=4),
        # two sinusoids: (amplitude, wavelength as a fraction of the edge, phase)
        "wave": [
            (profile.wave * size * rng.uniform(0.5, 1.0), rng.uniform(0.2, 0.45), rng.uniform(0, 2 * math.pi))
            for _ in range(2)
        ],
    }


def _edge_points(a, b, tab, size, profile, spacing):
    """Sampled edge from corner a to corner b (b excluded); ``tab`` None means straight."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if tab is None:
        return _sample_segments(np.array([a, b]), spacing)
    L = float(np.linalg.norm(b - a))
    u = (b - a) / L
    v = np.array([-u[1], u[0]])
    c, wb, wt, sk, h = tab["center"], tab["base"], tab["top"], tab["skew"], tab["height"]
    local = np.array([
        [0.0, 0.0],
        [c - wb, 0.0],
        [c - wt + sk, h],
        [c + wt + sk, h],
        [c + wb, 0.0],
        [L, 0.0],
    ])
    local = _fillet(local, tab["fillets"], spacing)
    local = np.vstack([_sample_segments(local, spacing / 2), local[-1:]])
    x = local[:, 0]
    taper = np.sin(math.pi * np.clip(x / L, 0.0, 1.0))
    wave = sum(amp * np.sin(2 * math.pi * x / (frac * L) + ph) for amp, frac, ph in tab["wave"])
    local[:, 1] += taper * wave
    world = a + local[:, :1] * u + local[:, 1:] * v
    return _sample_segments(world, spacing)


def _grid_corners(rng, m, n, size, jitter, straight_decoys=False):
    xs = np.arange(n + 1) * size
    ys = np.arange(m + 1) * size
    corners = np.zeros((m + 1, n + 1, 2))
    for i in range(m + 1):
        for j in range(n + 1):
            dx, dy = rng.uniform(-jitter, jitter, size=2) * size
            on_side = j in (0, n)
            on_end = i in (0, m)
            if on_side:
                dx = 0.0
            if on_end:
                dy = 0.0
            if straight_decoys and (on_side or on_end):
                # frame corners stay on the grid: every outer edge has the same length
                dx = dy = 0.0
            corners[i, j] = (xs[j] + dx, ys[i] + dy)
    return corners


def _far_apart_edges(rng, edges, count):
    """Pick pairs of interior edges whose four pieces are pairwise non-adjacent."""
    keys = list(edges)
    order = rng.permutation(len(keys))
    used = set()
    pairs = []

    def touches(p, q):
        (pi, pj), (qi, qj) = p, q
        return abs(pi - qi) + abs(pj - qj) <= 1

    for x in order:
        ex = keys[x]
        if ex in used:
            continue
        for y in order:
            ey = keys[y]
            if ey in used or ey == ex:
                continue
            cells = [*edges[ex], *edges[ey]]
            if any(touches(cells[s], cells[t]) for s in range(2) for t in range(2, 4)):
                continue
            pairs.append((ex, ey))
            used.update((ex, ey))
            break
        if len(pairs) == count:
            break
    return pairs


def generate_rectangular_puzzle(
    m: int,
    n: int,
    piece_size: float = 2000.0,
    tab_profile: TabProfile | None = None,
    seed: int = 0,
    *,
    spacing: float = 2.0,
    jitter: float = 0.05,
    decoys: int = 0,
    straight_decoys: bool = False,
) -> GroundTruthPuzzle:
    """Build an ``m`` x ``n`` puzzle in its assembled frame.

    Boundaries are sampled every ``spacing`` pixels or less, with shared
    edges sampled identically on both sides. ``decoys`` copies the tab of
    that many interior edges onto a distant edge, so pieces that are not
    neighbours get near-perfect fits. ``straight_decoys`` makes every
    outer edge exactly ``piece_size`` long, so straight frame edges of
    different pieces match each other perfectly.
    """
    if m < 1 or n < 1 or m * n < 2:
        raise InvalidInputError(f"invalid puzzle dimensions {m}x{n}")
    if piece_size <= 0 or spacing <= 0:
        raise InvalidInputError("piece_size and spacing must be positive")
    profile = tab_profile or TabProfile()
    rng = np.random.default_rng(seed)
    for _ in range(100):
        puzzle = _try_generate(rng, m, n, piece_size, profile, spacing, jitter, decoys, straight_decoys)
        if puzzle is not None:
            return puzzle
    raise InvalidInputError("could not generate non-self-intersecting pieces; reduce tab size")


def _try_generate(rng, m, n, size, profile, spacing, jitter, decoys, straight_decoys):
    corners = _grid_corners(rng, m, n, size, jitter, straight_decoys)
    # interior edges keyed ("h", i, j): between rows i-1 and i at column j;
    # ("v", i, j): between columns j-1 and j at row i
    owners = {}
    for i in range(1, m):
        for j in range(n):
            owners["h", i, j] = ((i - 1, j), (i, j))
    for i in range(m):
        for j in range(1, n):
            owners["v", i, j] = ((i, j - 1), (i, j))

    def ends(key):
        kind, i, j = key
        if kind == "h":
            return corners[i, j], corners[i, j + 1]
        return corners[i, j], corners[i + 1, j]

    tabs = {}
    for key in owners:
        a, b = ends(key)
        tabs[key] = _draw_tab(rng, float(np.linalg.norm(b - a)), size, profile)
    twin_edges = _far_apart_edges(rng, owners, decoys) if decoys else []
    for src, dst in twin_edges:
        tabs[dst] = dict(tabs[src])

    sampled = {key: _edge_points(*ends(key), tabs[key], size, profile, spacing) for key in owners}

    def side(i, j, which):
        """(points, key, reversed) for one side of cell (i, j), counter-clockwise."""
        bl, br = corners[i, j], corners[i, j + 1]
        tl, tr = corners[i + 1, j], corners[i + 1, j + 1]
        if which == "bottom":
            key = ("h", i, j)
            return (sampled[key], key, False) if key in sampled else (_sample_segments(np.array([bl, br]), spacing), None, False)
        if which == "right":
            key = ("v", i, j + 1)
            return (sampled[key], key, False) if key in sampled else (_sample_segments(np.array([br, tr]), spacing), None, False)
        if which == "top":
            key = ("h", i + 1, j)
            if key in sampled:
                return _reverse_open(sampled[key], tr), key, True
            return _sample_segments(np.array([tr, tl]), spacing), None, False
        key = ("v", i, j)
        if key in sampled:
            return _reverse_open(sampled[key], tl), key, True
        return _sample_segments(np.array([tl, bl]), spacing), None, False

    pieces, ids = [], []
    arc_index = {}
    for i in range(m):
        for j in range(n):
            chunks, start = [], 0
            for which in ("bottom", "right", "top", "left"):
                pts, key, _ = side(i, j, which)
                if key is not None:
                    arc_index[key, (i, j)] = (start, len(pts) + 1)
                chunks.append(pts)
                start += len(pts)
            boundary = np.vstack(chunks)
            if not Polygon(boundary).is_valid:
                return None
            pieces.append(ClosedPolyline(boundary))
            ids.append(f"r{i}c{j}")

    def pid(cell):
        return cell[0] * n + cell[1]

    adjacency, arcs = [], []
    for key, (ca, cb) in sorted(owners.items(), key=lambda kv: (pid(kv[1][0]), pid(kv[1][1]))):
        a, b = pid(ca), pid(cb)
        sa, na = arc_index[key, ca]
        sb, nb = arc_index[key, cb]
        start, stop = ends(key)
        arc_pts = np.vstack([sampled[key], stop])
        # the lower/left cell traverses the edge forwards for "v", backwards for "h"
        if key[0] == "h":
            arc_pts = arc_pts[::-1]
        adjacency.append((a, b))
        arcs.append(SharedArc(a, b, sa, na, sb, nb, arc_pts))
    decoy_pairs = []
    for src, dst in twin_edges:
        for x in owners[src]:
            for y in owners[dst]:
                decoy_pairs.append(tuple(sorted((pid(x), pid(y)))))
    return GroundTruthPuzzle(
        pieces=pieces,
        ids=ids,
        true_motions=[IDENTITY] * len(pieces),
        adjacency=adjacency,
        shared_arcs=arcs,
        rows=m,
        cols=n,
        piece_size=size,
        decoy_pairs=sorted(set(decoy_pairs)),
    )


def _reverse_open(points: np.ndarray, end) -> np.ndarray:
    """Reverse an edge sampled a -> b (b excluded) into b -> a (a excluded)."""
    return np.vstack([np.asarray(end, dtype=float)[None, :], points[:0:-1]])


def scatter_pieces(puzzle: GroundTruthPuzzle, noise_amp: float = 0.0, seed: int = 0) -> GroundTruthPuzzle:
    """Move every piece by its own random rigid motion, optionally adding radial noise.

    ``true_motions`` of the result map each scattered piece back to the
    assembled frame.
    """
    if noise_amp < 0:
        raise InvalidInputError("noise_amp must be non-negative")
    rng = np.random.default_rng(seed)
    spread = 2.0 * puzzle.piece_size
    cols = max(1, math.ceil(math.sqrt(len(puzzle.pieces))))
    pieces, motions = [], []
    for k, (piece, back) in enumerate(zip(puzzle.pieces, puzzle.true_motions)):
        pts = piece.points
        if noise_amp > 0:
            c = piece.centroid()
            radial = pts - c
            radial /= np.linalg.norm(radial, axis=1, keepdims=True)
            pts = pts + rng.uniform(-noise_amp, noise_amp, size=(len(pts), 1)) * radial
        theta = rng.uniform(-math.pi, math.pi)
        slot = np.array([k % cols, k // cols]) * spread + rng.uniform(-0.2, 0.2, size=2) * puzzle.piece_size
        centroid = piece.centroid()
        rot = RigidMotion2D(theta)
        shift = slot - rot.apply(centroid)
        g = RigidMotion2D(theta, shift[0], shift[1])
        pieces.append(ClosedPolyline(g.apply(pts)))
        motions.append(compose_motions(back, g.inverse()))
    return replace(puzzle, pieces=pieces, true_motions=motions)


def locate_shared_arcs(puzzle: GroundTruthPuzzle, pieces: list[ClosedPolyline], tol: float) -> dict:
    """Index ranges of each shared arc on (re)sampled versions of the puzzle's pieces.

    A point belongs to the arc when, moved to the assembled frame, it lies
    within ``tol`` of the noiseless shared edge. Returns
    ``{(a, b): ((start_a, count_a), (start_b, count_b))}``.
    """
    out = {}
    for arc in puzzle.shared_arcs:
        line = LineString(arc.points)
        ranges = []
        for idx in (arc.a, arc.b):
            pts = puzzle.true_motions[idx].apply(pieces[idx].points)
            near = shapely.distance(shapely.points(pts), line) <= tol
            ranges.append(_cyclic_run(near))
        out[arc.a, arc.b] = tuple(ranges)
    return out


def _cyclic_run(mask: np.ndarray) -> tuple[int, int]:
    """(start, count) of the longest cyclic run of True."""
    n = len(mask)
    if mask.all():
        return 0, n
    if not mask.any():
        return 0, 0
    first_false = int(np.flatnonzero(~mask)[0])
    rolled = np.roll(mask, -first_false)
    best, cur, cur_start, best_start = 0, 0, 0, 0
    for k, v in enumerate(rolled):
        if v:
            if cur == 0:
                cur_start = k
            cur += 1
            if cur > best:
                best, best_start = cur, cur_start
        else:
            cur = 0
    return (best_start + first_false) % n, best
